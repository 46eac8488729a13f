import pytest

from dropout_mining import id3
from dropout_mining.dataset import MISSING
from dropout_mining.errors import ClassificationError, DegenerateError


def test_entropy_values():
    assert id3.entropy({"yes": 9, "no": 5}) == pytest.approx(0.9403, abs=1e-4)
    assert id3.entropy([7, 7]) == 1.0
    assert id3.entropy([5, 0]) == 0.0
    with pytest.raises(DegenerateError):
        id3.entropy([])


def test_weather_gains(weather):
    gains = dict(id3.rank_attributes(weather))
    assert gains["Outlook"] == pytest.approx(0.2467, abs=1e-4)
    assert gains["Humidity"] == pytest.approx(0.1518, abs=1e-4)
    assert gains["Windy"] == pytest.approx(0.0481, abs=1e-4)
    assert gains["Temperature"] == pytest.approx(0.0292, abs=1e-4)
    assert id3.rank_attributes(weather)[0][0] == "Outlook"


def test_weather_tree_shape(weather):
    tree = id3.build_tree(weather)
    assert tree.attribute == "Outlook"
    assert tree.children["Overcast"] == id3.Leaf("Yes", 4)
    assert tree.children["Sunny"].attribute == "Humidity"
    assert tree.children["Rain"].attribute == "Windy"
    assert id3.leaves(tree) == 5 and id3.depth(tree) == 2


def test_rules_render(weather):
    rules = [r.render("Play") for r in id3.extract_rules(id3.build_tree(weather))]
    assert "IF Outlook=Sunny AND Humidity=High THEN Play=No" in rules
    assert len(rules) == 5


def test_classify_edge_cases(weather):
    tree = id3.build_tree(weather)
    with pytest.raises(ClassificationError):
        id3.classify(tree, {"Outlook": MISSING})
    assert id3.classify(tree, {"Outlook": "Fog"}) == tree.majority


def test_dict_round_trip(weather):
    tree = id3.build_tree(weather)
    assert id3.tree_from_dict(id3.tree_to_dict(tree)) == tree


def test_render_tree(weather):
    text = id3.render_tree(id3.build_tree(weather))
    assert "Outlook = Overcast: Yes (4)" in text
    assert "|  Humidity = High: No (3)" in text
