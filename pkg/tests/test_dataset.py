import pytest

from dropout_mining.dataset import (
    MISSING, NOMINAL, NUMERIC, AttributeSpec, Codebook, Dataset, discretize_grade,
    discretize_income, drop_incomplete, dumps_csv, from_rows, load_csv, ordinal_code,
    project, read_table, to_nominal, write_csv,
)
from dropout_mining.errors import ConfigurationError, DomainError, StructuralError


def test_load_infers_kinds_and_domains(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("# comment\nRes,Age,Drop\nurban,19,No\nrural,?,Yes\n\nurban,21,No\n")
    d = load_csv(p)
    assert d.class_attribute == "Drop"
    assert d.attribute("Res").domain == ("rural", "urban")
    assert d.attribute("Age").kind == NUMERIC
    assert d.column("Age") == [19.0, MISSING, 21.0]
    assert len(d) == 3


def test_numeric_looking_class_stays_nominal():
    d = from_rows(["a", "y"], [["x", "0"], ["z", "1"]])
    assert d.attribute("y").kind == NOMINAL
    assert d.class_values == ("0", "1")


@pytest.mark.parametrize("text, err", [
    ("a,a\n1,2\n", StructuralError),
    ("a,b\n1\n", StructuralError),
    ("", StructuralError),
])
def test_malformed_tables(text, err):
    with pytest.raises(err):
        read_table(text)


def test_unknown_class_attribute():
    with pytest.raises(ConfigurationError):
        from_rows(["a", "b"], [["x", "y"]], "c")


def test_dataset_rejects_out_of_domain_value():
    with pytest.raises(ConfigurationError):
        Dataset((AttributeSpec("c", NOMINAL, ("a",)),), (("b",),), "c")


def test_csv_round_trip(tmp_path, weather):
    p = tmp_path / "w.csv"
    write_csv(weather, p, "seed=1")
    assert p.read_text().startswith("# seed=1\n")
    again = load_csv(p, "Play")
    assert again.instances == weather.instances
    assert dumps_csv(again) == dumps_csv(weather)


def test_integer_floats_written_without_decimals():
    d = from_rows(["n", "c"], [["3", "a"], ["2.5", "b"]])
    assert dumps_csv(d).splitlines()[1:] == ["3,a", "2.5,b"]


def test_codebook_pins_order_and_codes():
    cb = Codebook.parse("Res:urban=1\nRes:rural=0\n# note\nDrop:Yes=1\nDrop:No=0\n")
    d = cb.apply_rows(["Res", "Drop"], [["urban", "No"], ["rural", "Yes"]])
    assert d.attribute("Res").kind == NUMERIC
    assert d.column("Res") == [1.0, 0.0]
    assert d.class_values == ("1", "0")
    assert Codebook.parse(cb.dumps()).mappings == cb.mappings


def test_codebook_rejects_unmapped_value():
    cb = Codebook.parse("Res:urban=1\n")
    with pytest.raises(ConfigurationError):
        cb.apply_rows(["Res", "c"], [["suburb", "x"]])


def test_codebook_bad_line():
    with pytest.raises(StructuralError):
        Codebook.parse("no separator here\n")


def test_drop_incomplete_and_project(weather):
    d = from_rows(["a", "b", "c"], [["x", "?", "p"], ["y", "z", "q"]])
    assert len(drop_incomplete(d)) == 1
    assert project(weather, ["Outlook", "Play"]).names == ["Outlook", "Play"]
    with pytest.raises(ConfigurationError):
        project(weather, ["Outlook"])


def test_to_nominal_and_ordinal_code():
    d = from_rows(["n", "c"], [["1", "a"], ["2", "b"]])
    nom = to_nominal(d)
    assert nom.attribute("n").domain == ("1", "2")
    coded = ordinal_code(from_rows(["lvl", "c"], [["hi", "a"], ["lo", "b"]]))
    assert coded.column("lvl") == [0.0, 1.0]


@pytest.mark.parametrize("pct, grade", [(90, "A"), (85, "B"), (80, "B"), (75, "C"), (66, "C"),
                                        (65, "D"), (0, "D"), (100, "A")])
def test_discretize_grade(pct, grade):
    assert discretize_grade(pct) == grade


@pytest.mark.parametrize("income, level", [(700000, "VHigh"), (600000, "High"), (400001, "High"),
                                           (400000, "Medium"), (200000, "Low"), (0, "Low")])
def test_discretize_income(income, level):
    assert discretize_income(income) == level


@pytest.mark.parametrize("bad", [-1, 101])
def test_grade_domain(bad):
    with pytest.raises(DomainError):
        discretize_grade(bad)


def test_income_domain():
    with pytest.raises(DomainError):
        discretize_income(-5)
