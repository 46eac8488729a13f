"""Two-group linear discriminant analysis with forward stepwise selection.

Predictors must already be numerically coded (see ``dataset.Codebook``).
Scores are normalised so the pooled within-group variance of the
discriminant score is 1, and the constant puts the grand mean at score 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .dataset import MISSING, Dataset
from .errors import CollinearityError, ContractError
from .evaluation import ConfusionMatrix
from .stats import critical_value

PIVOT_EPS = 1e-10
MIN_TOLERANCE = 1e-3


# -- small dense linear algebra ----------------------------------------------


def solve(a, b, names: Sequence[str] | None = None) -> np.ndarray:
    """Gaussian elimination with partial pivoting.

    Raises CollinearityError naming the column whose pivot falls below 1e-10.
    """
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    n = a.shape[0]
    vector = b.ndim == 1
    if vector:
        b = b[:, None]
    m = np.hstack([a, b])
    for k in range(n):
        p = k + int(np.argmax(np.abs(m[k:, k])))
        if abs(m[p, k]) < PIVOT_EPS:
            who = names[k] if names is not None else f"column {k}"
            raise CollinearityError(f"singular pooled covariance: {who} is linearly dependent "
                                    f"on the preceding predictors", predictor=who)
        if p != k:
            m[[k, p]] = m[[p, k]]
        m[k + 1:] -= np.outer(m[k + 1:, k] / m[k, k], m[k])
    x = np.zeros((n, m.shape[1] - n))
    for k in range(n - 1, -1, -1):
        x[k] = (m[k, n:] - m[k, k + 1:n] @ x[k + 1:]) / m[k, k]
    return x[:, 0] if vector else x


def det(a) -> float:
    """Determinant by the same elimination; 0.0 once a pivot vanishes."""
    m = np.array(a, dtype=float)
    n = m.shape[0]
    sign = 1.0
    out = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(m[k:, k])))
        if abs(m[p, k]) < PIVOT_EPS:
            return 0.0
        if p != k:
            m[[k, p]] = m[[p, k]]
            sign = -sign
        out *= m[k, k]
        m[k + 1:] -= np.outer(m[k + 1:, k] / m[k, k], m[k])
    return sign * out


# -- model -------------------------------------------------------------------


@dataclass(frozen=True)
class DiscriminantModel:
    predictors: tuple[str, ...]
    coefficients: tuple[float, ...]
    constant: float
    groups: tuple[str, str] = ("0", "1")
    group_sizes: tuple[int, int] = (0, 0)
    group_means: tuple[tuple[float, ...], ...] = ()
    pooled_covariance: tuple[tuple[float, ...], ...] = ()
    centroids: tuple[float, float] = (0.0, 0.0)
    cut_point: float = 0.0

    def __post_init__(self):
        if len(self.coefficients) != len(self.predictors):
            raise ContractError("one coefficient per predictor required")

    def score(self, x: Mapping) -> float:
        return discriminant_score(self, x)

    def predict_score(self, s: float) -> str:
        """Higher scores point to the second group."""
        return self.groups[1] if s > self.cut_point else self.groups[0]

    def classify(self, x: Mapping) -> str:
        return self.predict_score(self.score(x))

    def equation(self) -> str:
        terms = [f"{self.constant:.3f}"]
        terms += [f"({c:.3f} * {n})" for n, c in zip(self.predictors, self.coefficients)]
        return "D = " + " + ".join(terms)

    def to_dict(self) -> dict:
        return {
            "predictors": list(self.predictors),
            "coefficients": list(self.coefficients),
            "constant": self.constant,
            "groups": list(self.groups),
            "group_sizes": list(self.group_sizes),
            "group_means": [list(r) for r in self.group_means],
            "pooled_covariance": [list(r) for r in self.pooled_covariance],
            "centroids": list(self.centroids),
            "cut_point": self.cut_point,
        }


def discriminant_score(m: DiscriminantModel, x: Mapping) -> float:
    """constant + sum(coefficient * value)."""
    total = m.constant
    for name, coef in zip(m.predictors, m.coefficients):
        if name not in x or x[name] is MISSING:
            raise ContractError(f"instance has no value for predictor {name}")
        total += coef * float(x[name])
    return total


def _design(d: Dataset, predictors: Sequence[str] | None):
    if predictors is None:
        predictors = [a.name for a in d.attributes if a.name != d.class_attribute and not a.is_nominal]
        nominal = [a.name for a in d.attributes if a.name != d.class_attribute and a.is_nominal]
        if nominal:
            raise ContractError(
                f"nominal predictors must be coded numerically first: {', '.join(nominal)}")
    predictors = list(predictors)
    for name in predictors:
        a = d.attribute(name)
        if a.is_nominal:
            raise ContractError(f"predictor {name} is nominal; code it numerically first")
        if name == d.class_attribute:
            raise ContractError("the class attribute cannot be a predictor")
    labels = d.column(d.class_attribute)
    groups = [g for g in d.class_values if g in set(labels)]
    if len(groups) != 2:
        raise ContractError(f"exactly 2 class groups required, found {len(groups)}")
    idx = [d.index(n) for n in predictors]
    rows = []
    for r, inst in enumerate(d.instances):
        if any(inst[i] is MISSING for i in idx) or inst[d.class_index] is MISSING:
            raise ContractError(f"instance {r} has missing values; drop incomplete rows first")
        rows.append([float(inst[i]) for i in idx])
    x = np.array(rows, dtype=float).reshape(len(rows), len(idx))
    y = np.array([groups.index(l) for l in labels])
    return predictors, tuple(groups), x, y


def _scatter(x, y):
    """Within-group and total SSCP matrices."""
    w = np.zeros((x.shape[1], x.shape[1]))
    for g in (0, 1):
        xg = x[y == g]
        dev = xg - xg.mean(axis=0)
        w += dev.T @ dev
    dev = x - x.mean(axis=0)
    return w, dev.T @ dev


def _fit_arrays(x, y, groups, names, prior="equal") -> DiscriminantModel:
    n0, n1 = int((y == 0).sum()), int((y == 1).sum())
    if n0 < 2 or n1 < 2:
        raise ContractError("each group needs at least 2 instances")
    n = n0 + n1
    mu0, mu1 = x[y == 0].mean(axis=0), x[y == 1].mean(axis=0)
    w, _ = _scatter(x, y)
    s = w / (n - 2)
    diff = mu1 - mu0
    v = solve(s, diff, names)
    d2 = float(diff @ v)
    if d2 <= 0:
        raise ContractError("group means coincide; no discriminating direction")
    b = v / math.sqrt(d2)
    grand = x.mean(axis=0)
    const = -float(b @ grand)
    c0, c1 = float(b @ mu0) + const, float(b @ mu1) + const
    if prior == "equal":
        cut = (c0 + c1) / 2
    elif prior == "size":
        cut = (n0 * c0 + n1 * c1) / n
    else:
        raise ContractError(f"unknown prior rule {prior!r}")
    return DiscriminantModel(
        predictors=tuple(names),
        coefficients=tuple(float(c) for c in b),
        constant=const,
        groups=groups,
        group_sizes=(n0, n1),
        group_means=(tuple(map(float, mu0)), tuple(map(float, mu1))),
        pooled_covariance=tuple(tuple(map(float, r)) for r in s),
        centroids=(c0, c1),
        cut_point=cut,
    )


def fit_lda(d: Dataset, predictors: Sequence[str] | None = None, prior: str = "equal") -> DiscriminantModel:
    """Fit the two-group discriminant function on numerically coded data.

    Coefficients are S_pooled^-1 (mean_1 - mean_0) scaled to unit pooled
    within-group score variance. ``prior="equal"`` cuts halfway between the
    group centroids; ``prior="size"`` uses the size-weighted centroid mean,
    which is the grand-mean score 0.
    """
    names, groups, x, y = _design(d, predictors)
    if not names:
        raise ContractError("no predictors")
    return _fit_arrays(x, y, groups, names, prior)


def _scores(m: DiscriminantModel, x) -> np.ndarray:
    return x @ np.array(m.coefficients) + m.constant


# -- significance --------------------------------------------------------------


@dataclass(frozen=True)
class SignificanceReport:
    eigenvalue: float
    canonical_correlation: float
    wilks_lambda: float
    chi_square: float
    df: int
    significant_5: bool
    significant_1: bool

    def render(self) -> str:
        return "\n".join([
            "Function                1",
            f"Eigenvalue              {self.eigenvalue:.3f}",
            f"Canonical Correlation   {self.canonical_correlation:.3f}",
            f"Wilks' Lambda           {self.wilks_lambda:.3f}",
            f"Chi-square              {self.chi_square:.3f}",
            f"df                      {self.df}",
            f"Significance            {'sig@1%' if self.significant_1 else 'sig@5%' if self.significant_5 else 'NS'}",
        ])

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def significance_from_eigenvalue(eigenvalue: float, n: int, p: int, g: int = 2) -> SignificanceReport:
    """Wilks' lambda, canonical correlation and Bartlett's chi-square from one eigenvalue."""
    if eigenvalue < 0:
        raise ContractError("eigenvalue must be non-negative")
    lam = 1.0 / (1.0 + eigenvalue)
    r = math.sqrt(eigenvalue / (1.0 + eigenvalue))
    chi2 = -(n - 1 - (p + g) / 2.0) * math.log(lam)
    chi2 = max(chi2, 0.0)
    df = p * (g - 1)
    return SignificanceReport(
        eigenvalue=eigenvalue,
        canonical_correlation=r,
        wilks_lambda=lam,
        chi_square=chi2,
        df=df,
        significant_5=chi2 > critical_value(df, 0.05),
        significant_1=chi2 > critical_value(df, 0.01),
    )


def significance(m: DiscriminantModel, d: Dataset) -> SignificanceReport:
    """Between/within ratio of the discriminant scores on ``d``."""
    _, _, x, y = _design(d, m.predictors)
    s = _scores(m, x)
    grand = s.mean()
    within = sum(((s[y == g] - s[y == g].mean()) ** 2).sum() for g in (0, 1))
    between = sum((y == g).sum() * (s[y == g].mean() - grand) ** 2 for g in (0, 1))
    if within == 0:
        raise ContractError("zero within-group score variance")
    return significance_from_eigenvalue(float(between / within), len(d), len(m.predictors))


# -- coefficient reports ------------------------------------------------------


@dataclass(frozen=True)
class CoefficientReport:
    predictors: tuple[str, ...]
    standardized: tuple[float, ...]
    structure: tuple[float, ...]

    def render(self) -> str:
        w = max([9] + [len(p) for p in self.predictors])
        lines = [f"{'Variable':<{w}}  {'Standardized':>12}  {'Structure':>10}"]
        for p, s, r in zip(self.predictors, self.standardized, self.structure):
            fs = "NaN" if math.isnan(s) else f"{s:.3f}"
            fr = "NaN" if math.isnan(r) else f"{r:.3f}"
            lines.append(f"{p:<{w}}  {fs:>12}  {fr:>10}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        def num(v):
            return None if math.isnan(v) else v
        return {p: {"standardized": num(s), "structure": num(r)}
                for p, s, r in zip(self.predictors, self.standardized, self.structure)}


def coefficient_reports(m: DiscriminantModel, d: Dataset) -> CoefficientReport:
    """Standardized (b * pooled within SD) and structure (total-sample r with score) coefficients."""
    _, _, x, _ = _design(d, m.predictors)
    s = _scores(m, x)
    sd_s = s.std()
    standardized, structure = [], []
    for j, b in enumerate(m.coefficients):
        var_w = m.pooled_covariance[j][j]
        standardized.append(b * math.sqrt(var_w) if var_w > 0 else float("nan"))
        col = x[:, j]
        sd = col.std()
        if sd == 0 or sd_s == 0:
            structure.append(float("nan"))
        else:
            r = float(((col - col.mean()) * (s - s.mean())).mean() / (sd * sd_s))
            structure.append(max(-1.0, min(1.0, r)))
    return CoefficientReport(m.predictors, tuple(standardized), tuple(structure))


# -- classification ---------------------------------------------------------------


@dataclass(frozen=True)
class ClassificationTable:
    original: ConfusionMatrix
    cross_validated: ConfusionMatrix

    @staticmethod
    def _accuracy(cm: ConfusionMatrix) -> float:
        return 100.0 * sum(cm.counts[i][i] for i in range(len(cm.labels))) / cm.total

    @property
    def original_accuracy(self) -> float:
        return self._accuracy(self.original)

    @property
    def cross_validated_accuracy(self) -> float:
        return self._accuracy(self.cross_validated)

    def render(self) -> str:
        labels = self.original.labels
        lines = [f"{'':<16}{'actual':<8}" + "".join(f"{l:>16}" for l in labels) + f"{'Total':>8}"]
        for title, cm in (("Original", self.original), ("Cross-validated", self.cross_validated)):
            for i, label in enumerate(labels):
                row = cm.counts[i]
                n = sum(row)
                cells = "".join(
                    f"{c:>6} ({100.0 * c / n:5.1f}%)" if n else f"{c:>16}" for c in row)
                lines.append(f"{title if i == 0 else '':<16}{label:<8}{cells}{n:>8}")
        lines.append(f"{self.original_accuracy:.1f}% of original grouped cases correctly classified")
        lines.append(f"{self.cross_validated_accuracy:.1f}% of cross-validated grouped cases correctly classified")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "original": self.original.to_dict(),
            "cross_validated": self.cross_validated.to_dict(),
            "original_accuracy": self.original_accuracy,
            "cross_validated_accuracy": self.cross_validated_accuracy,
        }


def _table(groups, y, pred) -> ConfusionMatrix:
    counts = [[0, 0], [0, 0]]
    for a, p in zip(y, pred):
        counts[a][p] += 1
    return ConfusionMatrix(groups, tuple(tuple(r) for r in counts))


def classification_table(m: DiscriminantModel, d: Dataset, prior: str = "equal") -> ClassificationTable:
    """Resubstitution table plus leave-one-out (refit without each case) table."""
    names, groups, x, y = _design(d, m.predictors)
    if tuple(groups) != tuple(m.groups):
        raise ContractError("dataset groups differ from the model's groups")
    s = _scores(m, x)
    original = [1 if v > m.cut_point else 0 for v in s]
    loo = []
    mask = np.ones(len(y), dtype=bool)
    for i in range(len(y)):
        mask[i] = False
        cols, mi = _refit_estimable(x[mask], y[mask], groups, list(names), prior)
        mask[i] = True
        si = float(x[i, cols] @ np.array(mi.coefficients) + mi.constant)
        loo.append(1 if si > mi.cut_point else 0)
    return ClassificationTable(_table(groups, y, original), _table(groups, y, loo))


def _refit_estimable(x, y, groups, names, prior):
    """Fit, dropping predictors that become dependent once a case is held out.

    A predictor with a single non-zero case is constant in the refit that
    holds that case out; it carries no information there and is skipped.
    """
    cols = list(range(len(names)))
    while True:
        try:
            return cols, _fit_arrays(x[:, cols], y, groups, [names[c] for c in cols], prior)
        except CollinearityError as exc:
            if len(cols) == 1:
                raise
            cols.pop([names[c] for c in cols].index(exc.predictor))


def score_summary(m: DiscriminantModel, d: Dataset) -> dict:
    """Per-group score range; stands in for a histogram of discriminant scores."""
    _, groups, x, y = _design(d, m.predictors)
    s = _scores(m, x)
    out = {}
    for g, label in enumerate(groups):
        sg = s[y == g]
        out[label] = {"n": int(sg.size), "min": float(sg.min()), "max": float(sg.max()),
                      "mean": float(sg.mean()), "sd": float(sg.std(ddof=1)) if sg.size > 1 else 0.0}
    return out


# -- stepwise selection ---------------------------------------------------------


@dataclass(frozen=True)
class StepRecord:
    step: int
    action: str  # "entered" or "removed"
    variable: str
    wilks_lambda: float
    partial_f: float
    exact_f: float
    df1: int
    df2: int


@dataclass
class StepTrace:
    steps: list[StepRecord] = field(default_factory=list)
    f_enter: float = 3.84
    f_remove: float = 2.71
    max_steps: int = 0

    @property
    def selected(self) -> list[str]:
        current: list[str] = []
        for s in self.steps:
            if s.action == "entered":
                current.append(s.variable)
            else:
                current.remove(s.variable)
        return current

    def render(self) -> str:
        w = max([8] + [len(s.variable) for s in self.steps])
        lines = [f"{'Step':>4}  {'Action':<8} {'Variable':<{w}}  {'Wilks':>7}  {'F':>10}  "
                 f"{'Exact F':>10}  {'df1':>4}  {'df2':>6}"]
        for s in self.steps:
            lines.append(f"{s.step:>4}  {s.action:<8} {s.variable:<{w}}  {s.wilks_lambda:>7.3f}  "
                         f"{s.partial_f:>10.3f}  {s.exact_f:>10.3f}  {s.df1:>4}  {s.df2:>6}")
        lines.append("At each step, the variable that minimizes the overall Wilks' Lambda is entered.")
        lines.append(f"Maximum number of steps is {self.max_steps}.")
        lines.append(f"Minimum partial F to enter is {self.f_enter:g}.")
        lines.append(f"Maximum partial F to remove is {self.f_remove:g}.")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "f_enter": self.f_enter,
            "f_remove": self.f_remove,
            "max_steps": self.max_steps,
            "steps": [dict(s.__dict__) for s in self.steps],
            "selected": self.selected,
        }


def wilks_lambda(w, t, cols: Sequence[int]) -> float:
    if not cols:
        return 1.0
    ix = np.ix_(cols, cols)
    dt = det(t[ix])
    if dt == 0.0:
        return 1.0
    return det(w[ix]) / dt


def _tolerance(w, j, cols) -> float:
    wjj = w[j, j]
    if wjj <= PIVOT_EPS:
        return 0.0
    if not cols:
        return 1.0
    wss = w[np.ix_(cols, cols)]
    wsj = w[cols, j]
    try:
        resid = wjj - wsj @ solve(wss, wsj)
    except CollinearityError:
        return 0.0
    return resid / wjj


def stepwise_select(d: Dataset, f_enter: float = 3.84, f_remove: float = 2.71,
                    predictors: Sequence[str] | None = None, max_steps: int | None = None,
                    prior: str = "equal") -> tuple[StepTrace, DiscriminantModel | None]:
    """Forward stepwise entry by minimum Wilks' lambda with F-to-enter/F-to-remove gates."""
    if not (f_enter > f_remove > 0):
        raise ContractError("need f_enter > f_remove > 0")
    names, groups, x, y = _design(d, predictors)
    n, g = len(y), 2
    w, t = _scatter(x, y)
    p = len(names)
    max_steps = 2 * p if max_steps is None else max_steps
    trace = StepTrace(f_enter=f_enter, f_remove=f_remove, max_steps=max_steps)
    entered: list[int] = []
    lam = 1.0
    step = 0

    def exact_f(lam_k, k):
        df2 = n - k - 1
        return ((1 - lam_k) / lam_k) * df2 / k if lam_k > 0 else float("inf"), k, df2

    while step < max_steps:
        best, best_lam = None, None
        for j in range(p):
            if j in entered or _tolerance(w, j, entered) < MIN_TOLERANCE:
                continue
            lj = wilks_lambda(w, t, entered + [j])
            if best is None or lj < best_lam:
                best, best_lam = j, lj
        if best is None:
            break
        k = len(entered)
        f = (lam / best_lam - 1.0) * (n - g - k) / (g - 1)
        if f < f_enter:
            break
        entered.append(best)
        lam = best_lam
        step += 1
        ef, df1, df2 = exact_f(lam, len(entered))
        trace.steps.append(StepRecord(step, "entered", names[best], lam, f, ef, df1, df2))

        while len(entered) > 1 and step < max_steps:
            k_now = len(entered)
            worst, worst_f, worst_lam = None, None, None
            for j in entered:
                rest = [c for c in entered if c != j]
                lw = wilks_lambda(w, t, rest)
                fr = (lw / lam - 1.0) * (n - g - (k_now - 1)) / (g - 1)
                if worst is None or fr < worst_f:
                    worst, worst_f, worst_lam = j, fr, lw
            if worst_f >= f_remove:
                break
            entered.remove(worst)
            lam = worst_lam
            step += 1
            ef, df1, df2 = exact_f(lam, len(entered))
            trace.steps.append(StepRecord(step, "removed", names[worst], lam, worst_f, ef, df1, df2))

    if not entered:
        return trace, None
    chosen = [names[j] for j in entered]
    return trace, _fit_arrays(x[:, entered], y, groups, chosen, prior)
