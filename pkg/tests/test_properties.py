"""Property-based checks of the invariants each module promises."""

import itertools
import math
from collections import Counter

import numpy as np
from hypothesis import assume, given, settings, strategies as st

from dropout_mining import apriori, discriminant, evaluation, feature_select, id3, stats
from dropout_mining.dataset import NOMINAL, NUMERIC, AttributeSpec, Dataset, dumps_csv, from_rows, read_table

counts = st.lists(st.integers(0, 50), min_size=1, max_size=6)


@given(counts)
def test_entropy_bounds_and_order_independence(cs):
    assume(sum(cs) > 0)
    h = id3.entropy(cs)
    support = sum(1 for c in cs if c)
    assert -1e-12 <= h <= math.log2(max(support, 1)) + 1e-12
    assert h == id3.entropy(list(reversed(cs)))


@st.composite
def nominal_datasets(draw, max_attrs=4, max_rows=25):
    k = draw(st.integers(1, max_attrs))
    n = draw(st.integers(2, max_rows))
    rows = draw(st.lists(st.lists(st.sampled_from("abc"), min_size=k + 1, max_size=k + 1),
                         min_size=n, max_size=n))
    return from_rows([f"f{i}" for i in range(k)] + ["cls"], rows)


@given(nominal_datasets())
@settings(max_examples=60, deadline=None)
def test_gain_bounds(d):
    base = id3.entropy(Counter(d.column("cls")))
    for name in d.feature_names:
        g = id3.information_gain(d, name)
        assert -1e-12 <= g <= base + 1e-12


@given(nominal_datasets())
@settings(max_examples=60, deadline=None)
def test_rules_partition_the_domain(d):
    rules = id3.extract_rules(id3.build_tree(d))
    names = d.feature_names
    for point in itertools.product(*(d.attribute(n).domain for n in names)):
        rec = dict(zip(names, point))
        fired = [r for r in rules if r.matches(rec)]
        assert len(fired) == 1
        assert fired[0].consequent == id3.classify(id3.build_tree(d), rec)


@given(nominal_datasets())
@settings(max_examples=40, deadline=None)
def test_su_symmetric_and_bounded(d):
    for a, b in itertools.combinations(d.names, 2):
        su = feature_select.symmetric_uncertainty(d, a, b)
        assert su == feature_select.symmetric_uncertainty(d, b, a)
        assert -1e-12 <= su <= 1 + 1e-12


@given(nominal_datasets(max_attrs=5))
@settings(max_examples=40, deadline=None)
def test_search_merit_dominates_singletons(d):
    cache = feature_select.CorrelationCache.from_dataset(d)
    res = feature_select.best_first_select(d, cache=cache)
    assert res.merit >= max(cache.cf(n) for n in d.feature_names) - 1e-12
    assert res.merit == feature_select.cfs_merit(cache, res.selected)
    k = len(res.selected)
    assert res.merit <= math.sqrt(k) * max(cache.cf(n) for n in d.feature_names) + 1e-12


@st.composite
def tables(draw):
    r, c = draw(st.integers(2, 4)), draw(st.integers(2, 4))
    return [[draw(st.integers(1, 30)) for _ in range(c)] for _ in range(r)]


@given(tables())
def test_chi_square_properties(table):
    width = len(table[0])
    t = stats.ContingencyTable.from_counts(table)
    res = stats.chi_square(t)
    assert res.statistic >= -1e-12
    assert res.degrees_of_freedom == (len(table) - 1) * (width - 1)
    assert math.isclose(stats.chi_square(t.transpose()).statistic, res.statistic, rel_tol=1e-9, abs_tol=1e-12)
    scaled = stats.chi_square(stats.ContingencyTable.from_counts([[2 * c for c in r] for r in table]))
    assert math.isclose(scaled.statistic, 2 * res.statistic, rel_tol=1e-9, abs_tol=1e-9)


@given(st.lists(st.sampled_from(["No", "Yes"]), min_size=1, max_size=60),
       st.lists(st.sampled_from(["No", "Yes"]), min_size=1, max_size=60))
def test_confusion_sums(actual, predicted):
    n = min(len(actual), len(predicted))
    m = evaluation.confusion(actual[:n], predicted[:n], ["No", "Yes"])
    assert m.tp + m.fn + m.fp + m.tn == n
    r = evaluation.metrics(m)
    assert math.isclose(r.accuracy + r.error, 100.0)


@given(st.lists(st.sampled_from("AB"), min_size=4, max_size=80), st.integers(2, 4), st.integers(0, 10**6))
def test_folds_partition_and_stratify(labels, k, seed):
    assume(k <= len(labels))
    parts = evaluation.stratified_folds(labels, k, seed)
    assert sorted(i for p in parts for i in p) == list(range(len(labels)))
    for c in "AB":
        sizes = [sum(labels[i] == c for i in p) for p in parts]
        assert max(sizes) - min(sizes) <= 1


transactions = st.lists(st.sets(st.sampled_from("abcde")), min_size=1, max_size=30)


@given(transactions, st.sampled_from([0.1, 0.2, 0.4]), st.sampled_from([0.2, 0.6, 1.0]))
@settings(max_examples=60, deadline=None)
def test_apriori_closure_and_rule_bounds(ts, ms, mc):
    db = apriori.TransactionDB.from_lists(ts, alphabet="abcde")
    sets = {s.items: s for s in apriori.frequent_itemsets(db, ms)}
    for items, s in sets.items():
        assert s.support >= ms
        for k in range(1, len(items)):
            for sub in itertools.combinations(items, k):
                assert sub in sets and sets[sub].count >= s.count
    for r in apriori.generate_rules(db, ms, mc):
        assert mc <= r.confidence <= 1.0
        assert r.support <= min(sets[r.antecedent].support, sets[r.consequent].support) + 1e-12


def _numeric(x, labels):
    p = x.shape[1]
    attrs = tuple(AttributeSpec(f"x{j}", NUMERIC) for j in range(p)) + (AttributeSpec("g", NOMINAL, ("A", "B")),)
    return Dataset(attrs, tuple(tuple(map(float, r)) + (l,) for r, l in zip(x, labels)), "g")


@given(st.integers(0, 10**6), st.integers(1, 3), st.floats(0.5, 3.0))
@settings(max_examples=40, deadline=None)
def test_lda_direction_and_identities(seed, p, shift):
    rng = np.random.default_rng(seed)
    x = np.vstack([rng.normal(0, 1, (8, p)), rng.normal(shift, 1, (9, p))])
    labels = ["A"] * 8 + ["B"] * 9
    d = _numeric(x, labels)
    m = discriminant.fit_lda(d)
    y = np.array([0] * 8 + [1] * 9)
    mu0, mu1 = x[y == 0].mean(0), x[y == 1].mean(0)
    w = sum(((x[y == g] - x[y == g].mean(0)).T @ (x[y == g] - x[y == g].mean(0))) for g in (0, 1))
    v = np.linalg.solve(w / 15, mu1 - mu0)
    b = np.array(m.coefficients)
    assert np.allclose(b / np.linalg.norm(b), v / np.linalg.norm(v), atol=1e-6)
    scores = x @ b + m.constant
    assert abs(scores.mean()) < 1e-9
    rep = discriminant.significance(m, d)
    assert math.isclose(rep.wilks_lambda, 1 / (1 + rep.eigenvalue), abs_tol=1e-9)
    assert all(-1 <= r <= 1 for r in discriminant.coefficient_reports(m, d).structure)
    # scaling coefficients, constant and cut point together keeps every decision
    scaled = discriminant.DiscriminantModel(m.predictors, tuple(3 * c for c in m.coefficients),
                                            3 * m.constant, m.groups, cut_point=3 * m.cut_point)
    for row in d.records():
        assert scaled.classify(row) == m.classify(row)


@given(st.integers(0, 10**6))
@settings(max_examples=20, deadline=None)
def test_stepwise_lambda_non_increasing(seed):
    rng = np.random.default_rng(seed)
    x = np.vstack([rng.normal(0, 1, (15, 4)), rng.normal(0.8, 1, (15, 4))])
    trace, _ = discriminant.stepwise_select(_numeric(x, ["A"] * 15 + ["B"] * 15))
    entered = [s.wilks_lambda for s in trace.steps if s.action == "entered"]
    assert all(b <= a + 1e-12 for a, b in zip(entered, entered[1:]))


@given(nominal_datasets())
@settings(max_examples=30, deadline=None)
def test_csv_round_trip(d):
    header, rows = read_table(dumps_csv(d))
    assert from_rows(header, rows).instances == d.instances
