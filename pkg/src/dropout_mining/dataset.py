"""Categorical data model, CSV ingestion, value coding and discretization."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ConfigurationError, DegenerateError, DomainError, StructuralError

MISSING = None
MISSING_TOKEN = "?"

NOMINAL = "nominal"
NUMERIC = "numeric"

GRADE_ORDER = ("D", "C", "B", "A")
INCOME_ORDER = ("Low", "Medium", "High", "VHigh")


@dataclass(frozen=True)
class AttributeSpec:
    name: str
    kind: str = NOMINAL
    domain: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.name:
            raise ConfigurationError("attribute name must be non-empty")
        if self.kind not in (NOMINAL, NUMERIC):
            raise ConfigurationError(f"unknown attribute kind {self.kind!r}")
        object.__setattr__(self, "domain", tuple(self.domain))
        if self.kind == NOMINAL:
            if len(set(self.domain)) != len(self.domain):
                raise ConfigurationError(f"duplicate values in domain of {self.name}")
            if any(v == "" for v in self.domain):
                raise ConfigurationError(f"empty value in domain of {self.name}")

    @property
    def is_nominal(self) -> bool:
        return self.kind == NOMINAL


@dataclass(frozen=True)
class Dataset:
    """Immutable table of categorical (or numeric) attributes.

    ``instances`` is a tuple of row tuples aligned with ``attributes``; a cell
    is a string token, a float, or ``MISSING`` (None).
    """

    attributes: tuple[AttributeSpec, ...]
    instances: tuple[tuple, ...]
    class_attribute: str
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        attrs = tuple(self.attributes)
        rows = tuple(tuple(r) for r in self.instances)
        object.__setattr__(self, "attributes", attrs)
        object.__setattr__(self, "instances", rows)
        index = {}
        for i, a in enumerate(attrs):
            if a.name in index:
                raise StructuralError(f"duplicate attribute name {a.name!r}")
            index[a.name] = i
        object.__setattr__(self, "_index", index)
        if self.class_attribute not in index:
            raise ConfigurationError(f"unknown class attribute {self.class_attribute!r}")
        if not attrs[index[self.class_attribute]].is_nominal:
            raise ConfigurationError(f"class attribute {self.class_attribute!r} must be nominal")
        width = len(attrs)
        for r, row in enumerate(rows):
            if len(row) != width:
                raise StructuralError(f"instance {r} has {len(row)} cells, expected {width}")
            for a, v in zip(attrs, row):
                if v is MISSING:
                    continue
                if a.is_nominal and v not in a.domain:
                    raise ConfigurationError(
                        f"instance {r}: value {v!r} not in domain of {a.name}"
                    )

    def __len__(self):
        return len(self.instances)

    @property
    def names(self) -> list[str]:
        return [a.name for a in self.attributes]

    @property
    def class_index(self) -> int:
        return self._index[self.class_attribute]

    @property
    def class_values(self) -> tuple[str, ...]:
        return self.attributes[self.class_index].domain

    @property
    def feature_names(self) -> list[str]:
        return [a.name for a in self.attributes if a.name != self.class_attribute]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ConfigurationError(f"unknown attribute {name!r}") from None

    def attribute(self, name: str) -> AttributeSpec:
        return self.attributes[self.index(name)]

    def column(self, name: str) -> list:
        i = self.index(name)
        return [row[i] for row in self.instances]

    def records(self) -> Iterator[dict]:
        names = self.names
        for row in self.instances:
            yield dict(zip(names, row))

    def with_instances(self, rows: Iterable[Sequence]) -> "Dataset":
        return Dataset(self.attributes, tuple(tuple(r) for r in rows), self.class_attribute)

    def subset(self, indices: Iterable[int]) -> "Dataset":
        return self.with_instances(self.instances[i] for i in indices)


# -- CSV ---------------------------------------------------------------------


def _parse_number(token: str):
    try:
        return float(token)
    except ValueError:
        return None


def _format_cell(value) -> str:
    if value is MISSING:
        return MISSING_TOKEN
    if isinstance(value, float):
        return str(int(value)) if value.is_integer() else repr(value)
    return str(value)


def read_table(text: str) -> tuple[list[str], list[list[str]]]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise StructuralError("empty file")
    reader = csv.reader(lines)
    header = [h.strip() for h in next(reader)]
    if len(set(header)) != len(header):
        dupes = sorted({h for h in header if header.count(h) > 1})
        raise StructuralError(f"duplicate header names: {', '.join(dupes)}")
    if any(h == "" for h in header):
        raise StructuralError("empty header name")
    rows = []
    for i, row in enumerate(reader):
        if len(row) != len(header):
            raise StructuralError(
                f"row {i + 1} has {len(row)} cells, expected {len(header)}"
            )
        rows.append([c.strip() for c in row])
    return header, rows


def from_rows(header: Sequence[str], rows: Sequence[Sequence[str]],
              class_attribute: str | None = None) -> Dataset:
    """Build a dataset from raw string cells, inferring kinds and domains."""
    if class_attribute is None:
        class_attribute = header[-1]
    if class_attribute not in header:
        raise ConfigurationError(f"unknown class attribute {class_attribute!r}")
    attrs = []
    columns = []
    for j, name in enumerate(header):
        cells = [MISSING if r[j] == MISSING_TOKEN else r[j] for r in rows]
        present = [c for c in cells if c is not MISSING]
        numbers = [_parse_number(c) for c in present]
        if name != class_attribute and present and all(n is not None for n in numbers):
            attrs.append(AttributeSpec(name, NUMERIC))
            it = iter(numbers)
            columns.append([MISSING if c is MISSING else next(it) for c in cells])
        else:
            attrs.append(AttributeSpec(name, NOMINAL, tuple(sorted(set(present)))))
            columns.append(cells)
    instances = list(zip(*columns)) if columns and rows else []
    return Dataset(tuple(attrs), tuple(instances), class_attribute)


def load_csv(path, class_attribute: str | None = None, codebook: "Codebook | None" = None) -> Dataset:
    """Read a comma-separated file; ``?`` cells become MISSING.

    Lines starting with ``#`` are comments. ``class_attribute`` defaults to the
    last column. When a codebook is given it is applied to the raw tokens
    before kinds are inferred.
    """
    text = Path(path).read_text(encoding="utf-8")
    header, rows = read_table(text)
    if class_attribute is not None and class_attribute not in header:
        raise ConfigurationError(f"unknown class attribute {class_attribute!r}")
    if codebook is not None:
        return codebook.apply_rows(header, rows, class_attribute)
    return from_rows(header, rows, class_attribute)


def dumps_csv(d: Dataset, comment: str | None = None) -> str:
    buf = io.StringIO()
    if comment:
        for line in comment.splitlines():
            buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(d.names)
    for row in d.instances:
        writer.writerow([_format_cell(v) for v in row])
    return buf.getvalue()


def write_csv(d: Dataset, path, comment: str | None = None) -> None:
    Path(path).write_text(dumps_csv(d, comment), encoding="utf-8")


# -- codebook ----------------------------------------------------------------


class Codebook:
    """Per-attribute raw -> coded token mapping.

    File format is one ``attribute:raw=coded`` mapping per line. The coded
    tokens, in first-appearance order, become the attribute's domain, which
    is how a codebook pins category ordering.
    """

    def __init__(self, mappings: Mapping[str, Mapping[str, str]] | None = None):
        self.mappings: dict[str, dict[str, str]] = {
            k: dict(v) for k, v in (mappings or {}).items()
        }

    @classmethod
    def parse(cls, text: str) -> "Codebook":
        mappings: dict[str, dict[str, str]] = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            attr, sep, rest = line.partition(":")
            raw, sep2, coded = rest.partition("=")
            if not sep or not sep2 or not attr or not raw or not coded:
                raise StructuralError(f"codebook line {lineno}: expected attribute:raw=coded")
            mappings.setdefault(attr.strip(), {})[raw.strip()] = coded.strip()
        return cls(mappings)

    @classmethod
    def load(cls, path) -> "Codebook":
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    def dumps(self) -> str:
        return "".join(
            f"{attr}:{raw}={coded}\n"
            for attr, m in self.mappings.items()
            for raw, coded in m.items()
        )

    def apply_rows(self, header, rows, class_attribute=None) -> Dataset:
        unknown = [a for a in self.mappings if a not in header]
        if unknown:
            raise ConfigurationError(f"codebook names unknown attributes: {', '.join(unknown)}")
        coded_rows = [list(r) for r in rows]
        for attr, mapping in self.mappings.items():
            j = header.index(attr)
            for i, row in enumerate(coded_rows):
                raw = row[j]
                if raw == MISSING_TOKEN:
                    continue
                if raw not in mapping:
                    raise ConfigurationError(
                        f"codebook for {attr} has no entry for raw value {raw!r} (row {i + 1})"
                    )
                row[j] = mapping[raw]
        d = from_rows(header, coded_rows, class_attribute)
        # pin domain order for nominal attributes covered by the codebook
        attrs = list(d.attributes)
        for attr, mapping in self.mappings.items():
            j = header.index(attr)
            if attrs[j].is_nominal:
                attrs[j] = AttributeSpec(attr, NOMINAL, tuple(dict.fromkeys(mapping.values())))
        return Dataset(tuple(attrs), d.instances, d.class_attribute)

    def apply(self, d: Dataset) -> Dataset:
        header = d.names
        rows = [[_format_cell(v) for v in row] for row in d.instances]
        return self.apply_rows(header, rows, d.class_attribute)


# -- preprocessing -----------------------------------------------------------


def drop_incomplete(d: Dataset) -> Dataset:
    """Listwise deletion of every instance with a MISSING cell."""
    kept = [row for row in d.instances if all(v is not MISSING for v in row)]
    if not kept:
        raise DegenerateError("no complete instances remain")
    return d.with_instances(kept)


def project(d: Dataset, keep: Sequence[str]) -> Dataset:
    if d.class_attribute not in keep:
        raise ConfigurationError(f"class attribute {d.class_attribute!r} must be kept")
    if len(set(keep)) != len(keep):
        raise ConfigurationError("duplicate names in projection")
    idx = [d.index(name) for name in keep]
    attrs = tuple(d.attributes[i] for i in idx)
    rows = tuple(tuple(row[i] for i in idx) for row in d.instances)
    return Dataset(attrs, rows, d.class_attribute)


def to_nominal(d: Dataset) -> Dataset:
    """Turn numeric attributes into nominal ones using their printed tokens."""
    if all(a.is_nominal for a in d.attributes):
        return d
    header = d.names
    rows = [[_format_cell(v) for v in row] for row in d.instances]
    attrs = []
    columns = list(zip(*rows)) if rows else [() for _ in header]
    for a, col in zip(d.attributes, columns):
        if a.is_nominal:
            attrs.append(a)
        else:
            attrs.append(AttributeSpec(a.name, NOMINAL,
                                       tuple(sorted({c for c in col if c != MISSING_TOKEN}))))
    instances = tuple(
        tuple(MISSING if c == MISSING_TOKEN else c for c in row) for row in rows
    )
    return Dataset(tuple(attrs), instances, d.class_attribute)


def ordinal_code(d: Dataset, attributes: Sequence[str] | None = None) -> Dataset:
    """Replace nominal feature tokens by their domain position (0, 1, ...)."""
    names = attributes if attributes is not None else d.feature_names
    mappings = {}
    for name in names:
        a = d.attribute(name)
        if a.is_nominal and name != d.class_attribute:
            mappings[name] = {v: str(k) for k, v in enumerate(a.domain)}
    return Codebook(mappings).apply(d) if mappings else d


def discretize_grade(percentage: float) -> str:
    """School percentage to grade A/B/C/D over half-open bands (lo, hi]."""
    if not 0 <= percentage <= 100:
        raise DomainError(f"percentage {percentage} outside [0, 100]")
    if percentage > 85:
        return "A"
    if percentage > 75:
        return "B"
    if percentage > 65:
        return "C"
    return "D"


def discretize_income(annual_income: float) -> str:
    """Annual family income in rupees to Low/Medium/High/VHigh."""
    if annual_income < 0:
        raise DomainError(f"income {annual_income} is negative")
    if annual_income > 600_000:
        return "VHigh"
    if annual_income > 400_000:
        return "High"
    if annual_income > 200_000:
        return "Medium"
    return "Low"
