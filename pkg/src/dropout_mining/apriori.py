"""Apriori frequent itemsets and association rules over small item alphabets."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .dataset import MISSING, Dataset
from .errors import ConfigurationError, ContractError

AFFIRMATIVE = frozenset({"Yes", "yes", "Y", "1", "True", "true"})


@dataclass(frozen=True)
class TransactionDB:
    alphabet: tuple[str, ...]
    transactions: tuple[frozenset, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "transactions", tuple(frozenset(t) for t in self.transactions))
        known = set(self.alphabet)
        for i, t in enumerate(self.transactions):
            extra = t - known
            if extra:
                raise ConfigurationError(f"transaction {i + 1} has items outside the alphabet: {sorted(extra)}")

    @classmethod
    def from_lists(cls, transactions: Iterable[Iterable[str]], alphabet=None) -> "TransactionDB":
        ts = [frozenset(t) for t in transactions]
        if alphabet is None:
            alphabet = sorted(set().union(*ts)) if ts else []
        return cls(tuple(alphabet), tuple(ts))

    def __len__(self):
        return len(self.transactions)

    def count(self, items: Iterable[str]) -> int:
        items = frozenset(items)
        unknown = items - set(self.alphabet)
        if unknown:
            raise ConfigurationError(f"unknown items: {sorted(unknown)}")
        return sum(1 for t in self.transactions if items <= t)


@dataclass(frozen=True)
class Itemset:
    items: tuple[str, ...]
    count: int
    n: int

    @property
    def support(self) -> float:
        return self.count / self.n


@dataclass(frozen=True)
class AssociationRule:
    antecedent: tuple[str, ...]
    consequent: tuple[str, ...]
    count: int  # transactions containing antecedent and consequent
    antecedent_count: int
    n: int

    @property
    def support(self) -> float:
        return self.count / self.n

    @property
    def confidence(self) -> float:
        return self.count / self.antecedent_count

    def render(self) -> str:
        return (f"{','.join(self.antecedent)} => {','.join(self.consequent)} "
                f"[support={self.support:.2f}, confidence={self.confidence:.2f}]")

    def to_dict(self) -> dict:
        return {
            "antecedent": list(self.antecedent),
            "consequent": list(self.consequent),
            "count": self.count,
            "antecedent_count": self.antecedent_count,
            "n": self.n,
            "support": self.support,
            "confidence": self.confidence,
        }


def read_transactions(path) -> TransactionDB:
    """One transaction per line, items comma-separated; a blank line or ``-`` is empty."""
    text = Path(path).read_text(encoding="utf-8")
    rows = []
    for line in text.splitlines():
        if line.startswith("#"):
            continue
        cells = next(csv.reader([line]), [])
        items = [c.strip() for c in cells if c.strip() and c.strip() != "-"]
        rows.append(items)
    return TransactionDB.from_lists(rows)


def write_transactions(db: TransactionDB, path) -> None:
    lines = [",".join(sorted(t)) for t in db.transactions]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _affirmative(value, tokens) -> bool:
    if value is MISSING:
        return False
    if isinstance(value, float):
        return value == 1.0
    return value in tokens


def encode_transactions(d: Dataset, factor_map: Mapping[str, str | None],
                        dropout_value: str | None = "Yes",
                        reason_attributes: Sequence[str] | None = None,
                        affirmative: Iterable[str] = AFFIRMATIVE) -> TransactionDB:
    """Turn reason attributes into factor transactions.

    ``factor_map`` maps each reason attribute to a factor item; a ``None``
    factor drops that reason. Only instances whose class equals
    ``dropout_value`` are encoded (all instances when it is None). Numeric
    cells count as present when equal to 1. Every
    attribute named in ``reason_attributes`` must appear in the map.
    """
    affirmative = frozenset(affirmative)
    for name in factor_map:
        d.index(name)
    if reason_attributes is not None:
        unmapped = [r for r in reason_attributes if r not in factor_map]
        if unmapped:
            raise ConfigurationError(f"reason attributes without a factor: {', '.join(unmapped)}")
    alphabet = sorted({f for f in factor_map.values() if f is not None})
    cols = [(d.index(r), f) for r, f in factor_map.items() if f is not None]
    ci = d.class_index
    transactions = []
    for row in d.instances:
        if dropout_value is not None and row[ci] != dropout_value:
            continue
        items = {f for i, f in cols if _affirmative(row[i], affirmative)}
        transactions.append(frozenset(items))
    return TransactionDB(tuple(alphabet), tuple(transactions))


def support(db: TransactionDB, items: Iterable[str]) -> float:
    """Fraction of transactions containing every item (1.0 for the empty set)."""
    if not len(db):
        raise ContractError("empty transaction database")
    return db.count(items) / len(db)


def frequent_itemsets(db: TransactionDB, min_support: float) -> list[Itemset]:
    """Level-wise Apriori; result sorted by size, then lexicographically."""
    if not 0 < min_support <= 1:
        raise ContractError("min_support must be in (0, 1]")
    n = len(db)
    if n == 0:
        return []

    def frequent(count):
        return count / n >= min_support

    level = {}
    for item in sorted(db.alphabet):
        c = db.count((item,))
        if frequent(c):
            level[(item,)] = c
    result = dict(level)
    k = 1
    while level:
        prev = sorted(level)
        prev_set = set(prev)
        candidates = []
        for i in range(len(prev)):
            for j in range(i + 1, len(prev)):
                a, b = prev[i], prev[j]
                if a[:k - 1] != b[:k - 1]:
                    break
                cand = a + (b[-1],)
                if all(sub in prev_set for sub in combinations(cand, k)):
                    candidates.append(cand)
        counts = {c: 0 for c in candidates}
        for t in db.transactions:
            if len(t) <= k:
                continue
            for c in candidates:
                if t.issuperset(c):
                    counts[c] += 1
        level = {c: v for c, v in counts.items() if frequent(v)}
        result.update(level)
        k += 1
    return [Itemset(items, c, n) for items, c in sorted(result.items(), key=lambda kv: (len(kv[0]), kv[0]))]


def generate_rules(db: TransactionDB, min_support: float, min_confidence: float) -> list[AssociationRule]:
    """All X => Z\\X from frequent Z (|Z| >= 2) meeting ``min_confidence``.

    Sorted by confidence descending, then antecedent and consequent.
    """
    if not 0 < min_confidence <= 1:
        raise ContractError("min_confidence must be in (0, 1]")
    itemsets = frequent_itemsets(db, min_support)
    counts = {s.items: s.count for s in itemsets}
    n = len(db)
    rules = []
    for s in itemsets:
        if len(s.items) < 2:
            continue
        for r in range(1, len(s.items)):
            for x in combinations(s.items, r):
                y = tuple(i for i in s.items if i not in x)
                rule = AssociationRule(x, y, s.count, counts[x], n)
                if rule.confidence >= min_confidence:
                    rules.append(rule)
    rules.sort(key=lambda r: (-r.confidence, r.antecedent, r.consequent))
    return rules
