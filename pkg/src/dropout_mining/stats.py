"""One-way frequencies, crosstabs and Pearson's chi-square test."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dataset import Dataset
from .errors import ConfigurationError, ContractError, DegenerateError

# upper-tail critical values of the chi-square distribution, (5%, 1%)
CRITICAL_VALUES = {
    1: (3.841, 6.635),
    2: (5.991, 9.210),
    3: (7.815, 11.345),
    4: (9.488, 13.277),
    5: (11.070, 15.086),
    6: (12.592, 16.812),
    7: (14.067, 18.475),
    8: (15.507, 20.090),
    9: (16.919, 21.666),
    10: (18.307, 23.209),
}

_Z = {0.05: 1.6448536269514722, 0.01: 2.3263478740408408}


def critical_value(df: int, alpha: float) -> float:
    """Chi-square critical value at level ``alpha`` (0.05 or 0.01).

    Tabulated for df <= 10; Wilson-Hilferty cube approximation above that.
    """
    if alpha not in _Z:
        raise ContractError("alpha must be 0.05 or 0.01")
    if df < 1:
        raise ContractError("degrees of freedom must be >= 1")
    if df in CRITICAL_VALUES:
        return CRITICAL_VALUES[df][0 if alpha == 0.05 else 1]
    h = 2.0 / (9.0 * df)
    return df * (1.0 - h + _Z[alpha] * math.sqrt(h)) ** 3


@dataclass(frozen=True)
class FrequencyTable:
    attribute: str
    rows: tuple[tuple[str, int, float], ...]

    @property
    def total(self) -> int:
        return sum(r[1] for r in self.rows)

    def count(self, category: str) -> int:
        for token, n, _ in self.rows:
            if token == category:
                return n
        raise KeyError(category)

    def render(self) -> str:
        width = max([len(self.attribute), 8] + [len(r[0]) for r in self.rows])
        lines = [f"{self.attribute:<{width}}  {'count':>6}  {'percent':>7}"]
        for token, n, pct in self.rows:
            lines.append(f"{token:<{width}}  {n:>6}  {pct:>7.1f}")
        lines.append(f"{'Total':<{width}}  {self.total:>6}  {100.0:>7.1f}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "attribute": self.attribute,
            "rows": [{"category": t, "count": n, "percent": p} for t, n, p in self.rows],
            "total": self.total,
        }


@dataclass(frozen=True)
class ContingencyTable:
    row_attribute: str
    col_attribute: str
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    observed: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        obs = tuple(tuple(int(c) for c in row) for row in self.observed)
        object.__setattr__(self, "observed", obs)
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "col_labels", tuple(self.col_labels))
        if len(obs) != len(self.row_labels) or any(len(r) != len(self.col_labels) for r in obs):
            raise ContractError("observed counts do not match the row/column labels")
        if any(c < 0 for r in obs for c in r):
            raise ContractError("contingency counts must be non-negative")

    @classmethod
    def from_counts(cls, counts, row_labels=None, col_labels=None,
                    row_attribute="row", col_attribute="col") -> "ContingencyTable":
        counts = [list(r) for r in counts]
        if row_labels is None:
            row_labels = [str(i) for i in range(len(counts))]
        if col_labels is None:
            col_labels = [str(j) for j in range(len(counts[0]) if counts else 0)]
        return cls(row_attribute, col_attribute, tuple(row_labels), tuple(col_labels),
                   tuple(tuple(r) for r in counts))

    @property
    def row_totals(self) -> list[int]:
        return [sum(r) for r in self.observed]

    @property
    def col_totals(self) -> list[int]:
        return [sum(c) for c in zip(*self.observed)] if self.observed else []

    @property
    def total(self) -> int:
        return sum(self.row_totals)

    def transpose(self) -> "ContingencyTable":
        return ContingencyTable(self.col_attribute, self.row_attribute, self.col_labels,
                                self.row_labels, tuple(zip(*self.observed)))

    def render(self) -> str:
        """Observed counts with row percents in parentheses, as in a crosstab report."""
        head = f"{self.row_attribute} \\ {self.col_attribute}"
        cells = []
        for label, row in zip(self.row_labels, self.observed):
            n = sum(row)
            cells.append([label] + [f"{c} ({100.0 * c / n:.1f})" if n else f"{c}" for c in row]
                         + [f"{n} (100.0)"])
        total = self.total
        cells.append(["Total"] + [f"{c} ({100.0 * c / total:.1f})" if total else str(c)
                                  for c in self.col_totals] + [f"{total} (100.0)"])
        header = [head] + list(self.col_labels) + ["Total"]
        widths = [max(len(r[k]) for r in cells + [header]) for k in range(len(header))]
        def fmt(r):
            return "  ".join([r[0].ljust(widths[0])] +
                             [r[k].rjust(widths[k]) for k in range(1, len(r))])

        return "\n".join([fmt(header)] + [fmt(r) for r in cells])

    def to_dict(self) -> dict:
        return {
            "row_attribute": self.row_attribute,
            "col_attribute": self.col_attribute,
            "row_labels": list(self.row_labels),
            "col_labels": list(self.col_labels),
            "observed": [list(r) for r in self.observed],
        }


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    degrees_of_freedom: int
    expected: tuple[tuple[float, ...], ...]
    significant_5: bool
    significant_1: bool

    @property
    def level(self) -> str:
        if self.significant_1:
            return "sig@1%"
        if self.significant_5:
            return "sig@5%"
        return "NS"

    def render(self) -> str:
        return f"chi-square={self.statistic:.2f} df={self.degrees_of_freedom} {self.level}"

    def to_dict(self) -> dict:
        return {
            "expected": [list(r) for r in self.expected],
            "statistic": self.statistic,
            "df": self.degrees_of_freedom,
            "significant_5": self.significant_5,
            "significant_1": self.significant_1,
        }


def one_way_frequency(d: Dataset, attribute: str) -> FrequencyTable:
    a = d.attribute(attribute)
    if not a.is_nominal:
        raise ContractError(f"{attribute} is numeric; frequencies need a nominal attribute")
    col = d.column(attribute)
    n = len(col)
    rows = []
    for token in a.domain:
        c = col.count(token)
        rows.append((token, c, 100.0 * c / n if n else 0.0))
    return FrequencyTable(attribute, tuple(rows))


def crosstab(d: Dataset, row: str, col: str) -> ContingencyTable:
    if row == col:
        raise ConfigurationError("row and column attributes must differ")
    ra, ca = d.attribute(row), d.attribute(col)
    for a in (ra, ca):
        if not a.is_nominal:
            raise ContractError(f"{a.name} is numeric; crosstab needs nominal attributes")
    ri, ci = d.index(row), d.index(col)
    rpos = {v: k for k, v in enumerate(ra.domain)}
    cpos = {v: k for k, v in enumerate(ca.domain)}
    counts = [[0] * len(ca.domain) for _ in ra.domain]
    for inst in d.instances:
        rv, cv = inst[ri], inst[ci]
        if rv is None or cv is None:
            continue
        counts[rpos[rv]][cpos[cv]] += 1
    return ContingencyTable(row, col, ra.domain, ca.domain, tuple(tuple(r) for r in counts))


def chi_square(t: ContingencyTable) -> ChiSquareResult:
    """Uncorrected Pearson statistic sum (O - E)^2 / E."""
    r, c = len(t.row_labels), len(t.col_labels)
    if r < 2 or c < 2:
        raise DegenerateError("chi-square needs at least a 2x2 table")
    rows, cols, n = t.row_totals, t.col_totals, t.total
    if any(v == 0 for v in rows) or any(v == 0 for v in cols):
        raise DegenerateError("table has a zero row or column marginal")
    expected = tuple(tuple(rows[i] * cols[j] / n for j in range(c)) for i in range(r))
    stat = math.fsum(
        (t.observed[i][j] - expected[i][j]) ** 2 / expected[i][j]
        for i in range(r) for j in range(c)
    )
    df = (r - 1) * (c - 1)
    return ChiSquareResult(
        statistic=stat,
        degrees_of_freedom=df,
        expected=expected,
        significant_5=stat > critical_value(df, 0.05),
        significant_1=stat > critical_value(df, 0.01),
    )
