"""ID3 decision-tree induction, classification and rule extraction."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from .dataset import MISSING, Dataset
from .errors import ClassificationError, ContractError, DegenerateError


def entropy(dist) -> float:
    """Shannon entropy (bits) of a class distribution.

    ``dist`` is a mapping class -> count or an iterable of counts. Zero counts
    contribute nothing. Summation is exact-rounded, so the result does not
    depend on the order of the counts.
    """
    counts = list(dist.values()) if isinstance(dist, Mapping) else list(dist)
    if any(c < 0 for c in counts):
        raise ContractError("class counts must be non-negative")
    n = sum(counts)
    if n == 0:
        raise DegenerateError("entropy of an empty distribution")
    return math.fsum(-(c / n) * math.log2(c / n) for c in counts if c)


def _partition_counts(rows, attr_idx, class_idx):
    parts: dict = {}
    for row in rows:
        parts.setdefault(row[attr_idx], Counter())[row[class_idx]] += 1
    return parts


def _gain(rows, attr_idx, class_idx, base=None) -> float:
    n = len(rows)
    if base is None:
        base = entropy(Counter(row[class_idx] for row in rows))
    parts = _partition_counts(rows, attr_idx, class_idx)
    remainder = math.fsum(
        (sum(c.values()) / n) * entropy(c) for c in parts.values()
    )
    return base - remainder


def _check_nominal(d: Dataset):
    for a in d.attributes:
        if not a.is_nominal:
            raise ContractError(f"ID3 needs nominal attributes; {a.name} is numeric")


def information_gain(d: Dataset, attribute: str) -> float:
    """Entropy(S) minus the size-weighted entropy of the partitions by ``attribute``."""
    if attribute == d.class_attribute:
        raise ContractError("cannot compute the gain of the class attribute")
    if not d.attribute(attribute).is_nominal:
        raise ContractError(f"{attribute} is numeric")
    if not len(d):
        return 0.0
    return _gain(d.instances, d.index(attribute), d.class_index)


def rank_attributes(d: Dataset) -> list[tuple[str, float]]:
    """Non-class attributes by descending gain, ties in name order."""
    if not d.feature_names:
        raise ContractError("dataset has no non-class attributes")
    gains = [(name, information_gain(d, name)) for name in d.feature_names]
    return sorted(gains, key=lambda t: (-t[1], t[0]))


@dataclass(frozen=True)
class Leaf:
    label: str
    count: int = 0


@dataclass(frozen=True)
class Node:
    attribute: str
    children: Mapping[str, "DecisionTree"]
    majority: str
    count: int = 0


DecisionTree = Union[Leaf, Node]


@dataclass(frozen=True)
class ClassifierRule:
    antecedent: tuple[tuple[str, str], ...]
    consequent: str

    def matches(self, record: Mapping) -> bool:
        return all(record.get(a) == v for a, v in self.antecedent)

    def render(self, class_name: str = "class") -> str:
        body = " AND ".join(f"{a}={v}" for a, v in self.antecedent)
        if body:
            return f"IF {body} THEN {class_name}={self.consequent}"
        return f"IF TRUE THEN {class_name}={self.consequent}"


def _majority(counts: Counter, order: Sequence[str]) -> str:
    best, best_n = None, -1
    for label in order:
        if counts.get(label, 0) > best_n:
            best, best_n = label, counts.get(label, 0)
    return best


def build_tree(d: Dataset) -> DecisionTree:
    """Grow an unpruned ID3 tree.

    Splits on the highest-gain attribute (ties go to the alphabetically first
    name) and keeps splitting while the node is impure and attributes remain,
    even when the best gain is zero. A branch value with no training instances
    becomes a leaf labelled with the parent's majority class.
    """
    if not len(d):
        raise DegenerateError("cannot build a tree from an empty dataset")
    _check_nominal(d)
    class_idx = d.class_index
    order = d.class_values
    features = sorted((name, d.index(name), d.attribute(name).domain) for name in d.feature_names)

    def grow(rows, available):
        counts = Counter(row[class_idx] for row in rows)
        majority = _majority(counts, order)
        if len(counts) == 1 or not available:
            return Leaf(majority, len(rows))
        base = entropy(counts)
        best, best_gain = None, -1.0
        for feat in available:
            g = _gain(rows, feat[1], class_idx, base)
            if g > best_gain:
                best, best_gain = feat, g
        name, idx, domain = best
        rest = [f for f in available if f is not best]
        children = {}
        for value in domain:
            sub = [row for row in rows if row[idx] == value]
            children[value] = grow(sub, rest) if sub else Leaf(majority, 0)
        return Node(name, children, majority, len(rows))

    return grow(list(d.instances), features)


def classify(t: DecisionTree, x: Mapping) -> str:
    """Follow the branches of ``t`` for the record ``x`` (attribute name -> value)."""
    while isinstance(t, Node):
        if t.attribute not in x:
            raise ClassificationError(f"instance has no value for {t.attribute}")
        value = x[t.attribute]
        if value is MISSING:
            raise ClassificationError(f"missing value for tested attribute {t.attribute}")
        child = t.children.get(value)
        if child is None:
            return t.majority
        t = child
    return t.label


def predict(t: DecisionTree, d: Dataset) -> list[str]:
    return [classify(t, rec) for rec in d.records()]


def extract_rules(t: DecisionTree) -> list[ClassifierRule]:
    rules = []

    def walk(node, path):
        if isinstance(node, Leaf):
            rules.append(ClassifierRule(tuple(path), node.label))
            return
        for value, child in node.children.items():
            walk(child, path + [(node.attribute, value)])

    walk(t, [])
    return rules


def depth(t: DecisionTree) -> int:
    if isinstance(t, Leaf):
        return 0
    return 1 + max(depth(c) for c in t.children.values())


def leaves(t: DecisionTree) -> int:
    if isinstance(t, Leaf):
        return 1
    return sum(leaves(c) for c in t.children.values())


def render_tree(t: DecisionTree) -> str:
    """Indented text: one ``attribute = value`` per line, leaves as ``: class (count)``."""
    if isinstance(t, Leaf):
        return f": {t.label} ({t.count})"
    lines = []

    def walk(node, level):
        for value, child in node.children.items():
            prefix = "|  " * level + f"{node.attribute} = {value}"
            if isinstance(child, Leaf):
                lines.append(f"{prefix}: {child.label} ({child.count})")
            else:
                lines.append(prefix)
                walk(child, level + 1)

    walk(t, 0)
    return "\n".join(lines)


def tree_to_dict(t: DecisionTree) -> dict:
    if isinstance(t, Leaf):
        return {"leaf": t.label, "count": t.count}
    return {
        "attribute": t.attribute,
        "majority": t.majority,
        "count": t.count,
        "children": {v: tree_to_dict(c) for v, c in t.children.items()},
    }


def tree_from_dict(obj: dict) -> DecisionTree:
    if "leaf" in obj:
        return Leaf(obj["leaf"], obj.get("count", 0))
    return Node(obj["attribute"],
                {v: tree_from_dict(c) for v, c in obj["children"].items()},
                obj["majority"], obj.get("count", 0))
