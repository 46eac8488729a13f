import math
from collections import Counter

import pytest

from dropout_mining import evaluation as ev
from dropout_mining import id3
from dropout_mining.errors import ContractError


def test_confusion_orientation():
    m = ev.confusion(["No", "No", "Yes"], ["No", "Yes", "No"], ["No", "Yes"])
    assert (m.tp, m.fn, m.fp, m.tn) == (1, 1, 1, 0)


def test_undefined_metrics_are_nan():
    r = ev.metrics(ev.ConfusionMatrix.binary(0, 0, 0, 5))
    assert math.isnan(r.recall) and math.isnan(r.precision)
    assert r.to_dict()["recall"] is None


def test_length_mismatch():
    with pytest.raises(ContractError):
        ev.confusion(["a"], ["a", "b"])


def test_stratified_folds_balance():
    labels = ["No"] * 183 + ["Yes"] * 37
    parts = ev.stratified_folds(labels, 10, seed=3)
    assert sorted(i for p in parts for i in p) == list(range(220))
    for label in ("No", "Yes"):
        sizes = [sum(labels[i] == label for i in p) for p in parts]
        assert max(sizes) - min(sizes) <= 1
    assert parts == ev.stratified_folds(labels, 10, seed=3)


def test_fold_errors():
    with pytest.raises(ContractError):
        ev.stratified_folds(["a", "b"], 1, 0)
    with pytest.raises(ContractError):
        ev.stratified_folds(["a", "b"], 3, 0)


def _loop_cv(d, folds, seed):
    labels = d.column(d.class_attribute)
    parts = ev.stratified_folds(labels, folds, seed, d.class_values)
    counts = Counter()
    for held in parts:
        train = d.subset(i for i in range(len(d)) if i not in held)
        tree = id3.build_tree(train)
        for i in held:
            counts[(labels[i], id3.classify(tree, dict(zip(d.names, d.instances[i]))))] += 1
    return counts


def test_cross_validate_matches_loop(weather):
    m, report = ev.cross_validate(weather, folds=7, seed=2)
    counts = _loop_cv(weather, 7, 2)
    for i, a in enumerate(m.labels):
        for j, p in enumerate(m.labels):
            assert m.counts[i][j] == counts[(a, p)]
    assert m.total == 14
    assert report.accuracy + report.error == pytest.approx(100.0)


def test_render_mentions_counts():
    text = ev.metrics(ev.ConfusionMatrix.binary(182, 1, 3, 34)).render(220)
    assert "216  98.1818 %" in text
    assert ev.ConfusionMatrix.binary(182, 1, 3, 34).render().splitlines()[-1].strip().startswith("3")
