"""Correlation-based feature selection with forward best-first search."""

from __future__ import annotations

import heapq
import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable

from .dataset import Dataset
from .errors import ConfigurationError, ContractError
from .id3 import entropy


def _column_entropy(values) -> float:
    return entropy(Counter(values)) if values else 0.0


def symmetric_uncertainty(d: Dataset, a: str, b: str) -> float:
    """2 * I(a; b) / (H(a) + H(b)); 0 when both attributes are constant."""
    for name in (a, b):
        if not d.attribute(name).is_nominal:
            raise ContractError(f"{name} is numeric")
    return _su(d.column(a), d.column(b))


def _su(xs, ys) -> float:
    hx, hy = _column_entropy(xs), _column_entropy(ys)
    denom = hx + hy
    if denom == 0.0:
        return 0.0
    # joint counts as a multiset, so (a, b) and (b, a) give the same float
    hxy = entropy(sorted(Counter(zip(xs, ys)).values()))
    su = 2.0 * (denom - hxy) / denom
    return min(1.0, max(0.0, su))


class CorrelationCache:
    """Feature-class and feature-feature symmetric uncertainties."""

    def __init__(self, feature_class: dict[str, float], feature_feature: dict[frozenset, float]):
        self.feature_class = dict(feature_class)
        self.feature_feature = dict(feature_feature)

    @classmethod
    def from_dataset(cls, d: Dataset, features: Iterable[str] | None = None) -> "CorrelationCache":
        names = list(features) if features is not None else d.feature_names
        cols = {n: d.column(n) for n in names}
        for n in names:
            if not d.attribute(n).is_nominal:
                raise ContractError(f"{n} is numeric")
        target = d.column(d.class_attribute)
        rcf = {n: _su(cols[n], target) for n in names}
        rff = {frozenset((x, y)): _su(cols[x], cols[y]) for x, y in combinations(names, 2)}
        return cls(rcf, rff)

    @property
    def features(self) -> list[str]:
        return sorted(self.feature_class)

    def cf(self, a: str) -> float:
        try:
            return self.feature_class[a]
        except KeyError:
            raise ConfigurationError(f"{a!r} not in correlation cache") from None

    def ff(self, a: str, b: str) -> float:
        if a == b:
            return 1.0
        try:
            return self.feature_feature[frozenset((a, b))]
        except KeyError:
            raise ConfigurationError(f"pair ({a!r}, {b!r}) not in correlation cache") from None


def cfs_merit(cache: CorrelationCache, subset: Iterable[str]) -> float:
    """K * mean(r_cf) / sqrt(K + K (K - 1) * mean(r_ff)); 0 for the empty set."""
    names = sorted(set(subset))
    k = len(names)
    if k == 0:
        return 0.0
    mean_cf = math.fsum(cache.cf(n) for n in names) / k
    if k == 1:
        mean_ff = 0.0
    else:
        pairs = [cache.ff(x, y) for x, y in combinations(names, 2)]
        mean_ff = math.fsum(pairs) / len(pairs)
    return k * mean_cf / math.sqrt(k + k * (k - 1) * mean_ff)


@dataclass(frozen=True)
class SearchConfig:
    stale_limit: int = 5
    direction: str = "forward"

    def __post_init__(self):
        if self.stale_limit < 1:
            raise ConfigurationError("stale_limit must be >= 1")
        if self.direction != "forward":
            raise ConfigurationError("only forward search is supported")


@dataclass
class SelectionResult:
    selected: tuple[str, ...]
    merit: float
    subsets_evaluated: int
    config: SearchConfig
    expansions: int = 0
    trace: list = field(default_factory=list)

    def __iter__(self):
        return iter((self.selected, self.merit, self.subsets_evaluated))

    def render(self, class_attribute: str, positions: dict | None = None) -> str:
        lines = [
            "=== Attribute Selection on all input data ===",
            "",
            "Search Method:",
            "  Best first.",
            "  Start set: no attributes",
            f"  Search direction: {self.config.direction}",
            f"  Stale search after {self.config.stale_limit} node expansions",
            f"  Total number of subsets evaluated: {self.subsets_evaluated}",
            f"  Merit of best subset found: {self.merit:.3f}",
            "",
            f"Attribute Subset Evaluator (supervised, Class (nominal): {class_attribute}):",
            "  CFS Subset Evaluator",
            "",
        ]
        if positions:
            idx = ",".join(str(positions[n]) for n in self.selected)
            lines.append(f"Selected attributes: {idx} : {len(self.selected)}")
        else:
            lines.append(f"Selected attributes: {len(self.selected)}")
        lines.extend(f"  {n}" for n in self.selected)
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "search": "best-first",
            "direction": self.config.direction,
            "stale_limit": self.config.stale_limit,
            "subsets_evaluated": self.subsets_evaluated,
            "expansions": self.expansions,
            "merit": self.merit,
            "selected": list(self.selected),
        }


def best_first_select(d: Dataset, cfg: SearchConfig | None = None,
                      cache: CorrelationCache | None = None) -> SelectionResult:
    """Forward best-first search over feature subsets, scored by CFS merit.

    The OPEN list is ordered by merit, then by the sorted member names. The
    search stops once ``stale_limit`` consecutive expansions fail to improve
    on the best merit seen, or when OPEN is exhausted.
    """
    cfg = cfg or SearchConfig()
    if not d.feature_names:
        raise ContractError("dataset has no non-class attributes")
    cache = cache or CorrelationCache.from_dataset(d)
    features = cache.features

    empty = frozenset()
    best_set, best_merit = empty, 0.0
    seen = {empty}
    open_list = [(-0.0, (), empty)]
    evaluated = 0
    stale = 0
    expansions = 0
    trace = []

    while open_list and stale < cfg.stale_limit:
        _, _, current = heapq.heappop(open_list)
        expansions += 1
        improved = False
        for f in features:
            if f in current:
                continue
            child = current | {f}
            if child in seen:
                continue
            seen.add(child)
            merit = cfs_merit(cache, child)
            evaluated += 1
            heapq.heappush(open_list, (-merit, tuple(sorted(child)), child))
            if merit > best_merit:
                best_set, best_merit = child, merit
                improved = True
        stale = 0 if improved else stale + 1
        trace.append((tuple(sorted(current)), best_merit, stale))

    return SelectionResult(tuple(sorted(best_set)), best_merit, evaluated, cfg, expansions, trace)

