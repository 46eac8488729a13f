"""Confusion matrices, classification metrics and stratified k-fold CV."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .dataset import Dataset
from .errors import ContractError
from . import id3

UNDEFINED = float("nan")


def _ratio(num: float, den: float) -> float:
    return num / den if den else UNDEFINED


def _fmt(x: float, digits: int = 3) -> str:
    return "NaN" if math.isnan(x) else f"{x:.{digits}f}"


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts indexed ``[actual][predicted]`` over ``labels``.

    For binary problems the first label is the positive class, so with
    labels ``("No", "Yes")``: TP = No/No, FN = No/Yes, FP = Yes/No, TN = Yes/Yes.
    """

    labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "counts", tuple(tuple(int(c) for c in r) for r in self.counts))
        k = len(self.labels)
        if len(self.counts) != k or any(len(r) != k for r in self.counts):
            raise ContractError("confusion matrix must be square over its labels")
        if any(c < 0 for r in self.counts for c in r):
            raise ContractError("confusion counts must be non-negative")

    @classmethod
    def binary(cls, tp: int, fn: int, fp: int, tn: int, labels=("No", "Yes")) -> "ConfusionMatrix":
        return cls(tuple(labels), ((tp, fn), (fp, tn)))

    @property
    def total(self) -> int:
        return sum(map(sum, self.counts))

    def _require_binary(self):
        if len(self.labels) != 2:
            raise ContractError("TP/FN/FP/TN are defined for binary matrices only")

    @property
    def tp(self) -> int:
        self._require_binary()
        return self.counts[0][0]

    @property
    def fn(self) -> int:
        self._require_binary()
        return self.counts[0][1]

    @property
    def fp(self) -> int:
        self._require_binary()
        return self.counts[1][0]

    @property
    def tn(self) -> int:
        self._require_binary()
        return self.counts[1][1]

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        if self.labels != other.labels:
            raise ContractError("cannot add matrices over different labels")
        return ConfusionMatrix(self.labels, tuple(
            tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.counts, other.counts)
        ))

    def render(self) -> str:
        w = max([len(l) for l in self.labels] + [len(str(c)) for r in self.counts for c in r] + [6])
        lines = ["=== Confusion Matrix ===", "",
                 "  ".join(f"{l:>{w}}" for l in self.labels) + "   <-- classified as"]
        for label, row in zip(self.labels, self.counts):
            lines.append("  ".join(f"{c:>{w}}" for c in row) + f"   | {label}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "counts": [list(r) for r in self.counts]}


@dataclass(frozen=True)
class ClassRates:
    tp_rate: float
    fp_rate: float
    precision: float
    recall: float
    f_measure: float


@dataclass(frozen=True)
class EvaluationReport:
    accuracy: float  # percent
    error: float  # percent
    mean_absolute_error: float
    per_class: dict
    # binary summary for the positive (first) class; NaN when not binary
    recall: float = UNDEFINED
    specificity: float = UNDEFINED
    precision: float = UNDEFINED
    f_measure: float = UNDEFINED

    def render(self, n: int | None = None) -> str:
        lines = []
        if n is not None:
            correct = round(self.accuracy * n / 100)
            lines.append(f"Correctly Classified Instances     {correct:>5}  {self.accuracy:.4f} %")
            lines.append(f"Incorrectly Classified Instances   {n - correct:>5}  {self.error:.4f} %")
        else:
            lines.append(f"Accuracy  {self.accuracy:.4f} %")
            lines.append(f"Error     {self.error:.4f} %")
        lines.append(f"Mean absolute error                {self.mean_absolute_error:.4f}")
        if not math.isnan(self.specificity):
            lines.append(f"Recall (sensitivity)               {_fmt(self.recall)}")
            lines.append(f"Specificity                        {_fmt(self.specificity)}")
            lines.append(f"Precision                          {_fmt(self.precision)}")
            lines.append(f"F-measure                          {_fmt(self.f_measure)}")
        lines += ["", "=== Detailed Accuracy By Class ===", ""]
        labels = list(self.per_class)
        w = max([9] + [len(l) for l in labels])
        lines.append(f"{'':<10}" + "".join(f"{l:>{w}}" for l in labels))
        for field_name, title in (("tp_rate", "TP rate"), ("fp_rate", "FP rate"),
                                  ("precision", "Precision"), ("recall", "Recall"),
                                  ("f_measure", "F-measure")):
            lines.append(f"{title:<10}" + "".join(
                f"{_fmt(getattr(self.per_class[l], field_name)):>{w}}" for l in labels))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        def num(x):
            return None if math.isnan(x) else x

        return {
            "accuracy": self.accuracy,
            "error": self.error,
            "mean_absolute_error": self.mean_absolute_error,
            "recall": num(self.recall),
            "specificity": num(self.specificity),
            "precision": num(self.precision),
            "f_measure": num(self.f_measure),
            "per_class": {
                label: {k: num(getattr(r, k)) for k in
                        ("tp_rate", "fp_rate", "precision", "recall", "f_measure")}
                for label, r in self.per_class.items()
            },
        }


def confusion(actual: Sequence[str], predicted: Sequence[str],
              labels: Sequence[str] | None = None) -> ConfusionMatrix:
    if len(actual) != len(predicted):
        raise ContractError(f"length mismatch: {len(actual)} actual vs {len(predicted)} predicted")
    if not actual:
        raise ContractError("need at least one label")
    if labels is None:
        labels = sorted(set(actual) | set(predicted))
    pos = {l: i for i, l in enumerate(labels)}
    unknown = (set(actual) | set(predicted)) - set(pos)
    if unknown:
        raise ContractError(f"labels not in label set: {sorted(unknown)}")
    k = len(labels)
    counts = [[0] * k for _ in range(k)]
    for a, p in zip(actual, predicted):
        counts[pos[a]][pos[p]] += 1
    return ConfusionMatrix(tuple(labels), tuple(tuple(r) for r in counts))


def _f(p: float, r: float) -> float:
    if math.isnan(p) or math.isnan(r) or p + r == 0:
        return UNDEFINED
    return 2 * r * p / (r + p)


def metrics(m: ConfusionMatrix) -> EvaluationReport:
    n = m.total
    if n == 0:
        raise ContractError("empty confusion matrix")
    k = len(m.labels)
    correct = sum(m.counts[i][i] for i in range(k))
    per_class = {}
    for i, label in enumerate(m.labels):
        tp = m.counts[i][i]
        fn = sum(m.counts[i]) - tp
        fp = sum(m.counts[j][i] for j in range(k)) - tp
        tn = n - tp - fn - fp
        recall = _ratio(tp, tp + fn)
        precision = _ratio(tp, tp + fp)
        per_class[label] = ClassRates(
            tp_rate=recall,
            fp_rate=_ratio(fp, fp + tn),
            precision=precision,
            recall=recall,
            f_measure=_f(precision, recall),
        )
    report = dict(
        accuracy=100.0 * correct / n,
        error=100.0 * (n - correct) / n,
        mean_absolute_error=(n - correct) / n,
        per_class=per_class,
    )
    if k == 2:
        tp, fn, fp, tn = m.tp, m.fn, m.fp, m.tn
        recall = _ratio(tp, tp + fn)
        precision = _ratio(tp, tp + fp)
        report.update(recall=recall, specificity=_ratio(tn, fp + tn),
                      precision=precision, f_measure=_f(precision, recall))
    return EvaluationReport(**report)


def stratified_folds(labels: Sequence[str], folds: int, seed: int,
                     order: Sequence[str] | None = None) -> list[list[int]]:
    """Seeded stratified partition of instance indices into ``folds`` folds.

    Indices are shuffled, grouped by class, and the concatenated sequence is
    dealt round-robin, so each fold's class counts differ by at most one.
    """
    n = len(labels)
    if folds < 2:
        raise ContractError("need at least 2 folds")
    if folds > n:
        raise ContractError(f"{folds} folds requested for {n} instances")
    idx = list(range(n))
    random.Random(seed).shuffle(idx)
    order = list(order) if order is not None else sorted(set(labels))
    dealt = [i for label in order for i in idx if labels[i] == label]
    parts = [[] for _ in range(folds)]
    for pos, i in enumerate(dealt):
        parts[pos % folds].append(i)
    return [sorted(p) for p in parts]


def cross_validate(d: Dataset, folds: int = 10, seed: int = 1,
                   learner=id3.build_tree, classifier=id3.classify
                   ) -> tuple[ConfusionMatrix, EvaluationReport]:
    """Train on k-1 folds, predict the held-out fold, sum the matrices."""
    labels = d.column(d.class_attribute)
    parts = stratified_folds(labels, folds, seed, d.class_values)
    names = d.names
    actual, predicted = [], []
    for held in parts:
        held_set = set(held)
        train = d.subset(i for i in range(len(d)) if i not in held_set)
        model = learner(train)
        for i in held:
            actual.append(labels[i])
            predicted.append(classifier(model, dict(zip(names, d.instances[i]))))
    m = confusion(actual, predicted, d.class_values)
    return m, metrics(m)
