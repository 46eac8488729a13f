"""Deterministic synthetic student cohort.

The raw survey records are not public, so the cohort is assembled from the
published one-way frequencies and two-way crosstabs. Pinned joints are laid
out cell by cell; only unpinned attributes depend on the seed. The dropout
reasons of the "Yes" group are assembled so that grouping them into family /
personal / institutional factors reproduces the published transaction table.
"""

from __future__ import annotations

import random
import zlib
from dataclasses import dataclass, field

from .dataset import NOMINAL, AttributeSpec, Codebook, Dataset
from .errors import SpecificationError

GENERATOR_VERSION = "dropout-cohort/1"
RNG_NAME = "python-random-mt19937"

CLASS = "DROPOUT"

# transaction table of factor items for the 37 dropouts (F family, P personal, I institutional)
FACTOR_TRANSACTIONS = (
    "P", "P", "P,I", "I", "P,I", "F,P", "I", "F,I", "F", "P,I",
    "I", "F,I", "I", "F,P", "P,I", "F,I", "F,P", "P", "F", "P",
    "F", "F,P", "P", "", "P", "F", "F,P", "F,P", "F,P", "P",
    "F,P", "F,P,I", "F,P,I", "P", "P,I", "F,P", "F,P,I",
)


def factor_transactions() -> list[frozenset]:
    return [frozenset(t.split(",")) if t else frozenset() for t in FACTOR_TRANSACTIONS]


# reason attribute -> (factor item or None, affirmative count among the 37 dropouts)
DROPOUT_REASONS = {
    "Illness": (None, 0),
    "fmlyProblem": ("F", 19),
    "Hsickness": ("P", 12),
    "Marriage": ("P", 0),
    "ChngGoal": ("P", 12),
    "AdjustPrblm": ("P", 9),
    "HighFee": ("P", 3),
    "EnrolOthrInst": ("P", 14),
    "DifficultCourse": ("P", 1),
    "LearningPrblm": ("P", 1),
    "PeerPrblm": ("P", 0),
    "CmpsEnvironment": ("I", 8),
    "TooManyRules": ("I", 6),
    "LowPlacement": ("I", 5),
    "HecticSchedule": ("I", 0),
}


def default_factor_map() -> dict[str, str | None]:
    return {name: factor for name, (factor, _) in DROPOUT_REASONS.items()}


@dataclass(frozen=True)
class PinnedJoint:
    """Full contingency counts for an (anchor, attribute) pair.

    ``anchor`` must already be materialised when this joint is laid out.
    """

    anchor: str
    attribute: str
    anchor_values: tuple[str, ...]
    values: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ReasonBlock:
    transactions: tuple[frozenset, ...]
    reasons: dict
    group_value: str = "Yes"
    other_value: str = "No"


@dataclass
class CohortSpec:
    n: int
    class_attribute: str
    class_counts: dict
    marginals: dict  # attribute -> {value: count}, in domain order
    joints: list = field(default_factory=list)
    reasons: ReasonBlock | None = None

    def validate(self) -> None:
        problems = []
        if sum(self.class_counts.values()) != self.n:
            problems.append(f"{self.class_attribute}: class counts sum to "
                            f"{sum(self.class_counts.values())}, not {self.n}")
        for attr, m in self.marginals.items():
            if sum(m.values()) != self.n:
                problems.append(f"{attr}: marginal sums to {sum(m.values())}, not {self.n}")
            if any(c < 0 for c in m.values()):
                problems.append(f"{attr}: negative count")
        placed = {self.class_attribute}
        for j in self.joints:
            if j.anchor not in placed:
                problems.append(f"{j.attribute}: anchor {j.anchor} is not laid out before it")
            anchor_m = self.class_counts if j.anchor == self.class_attribute else self.marginals.get(j.anchor, {})
            rows = dict(zip(j.anchor_values, (sum(r) for r in j.counts)))
            if rows != {v: anchor_m.get(v, 0) for v in j.anchor_values} or \
                    any(c and v not in rows for v, c in anchor_m.items()):
                problems.append(f"{j.anchor}: row totals of the pinned joint with {j.attribute} "
                                f"disagree with its marginal")
            cols = dict(zip(j.values, (sum(c) for c in zip(*j.counts))))
            own = self.marginals.get(j.attribute)
            if own is None or cols != own:
                problems.append(f"{j.attribute}: pinned joint totals {cols} disagree with marginal {own}")
            placed.add(j.attribute)
        if self.reasons is not None:
            rb = self.reasons
            size = self.class_counts.get(rb.group_value, 0)
            if len(rb.transactions) != size:
                problems.append(f"reason block has {len(rb.transactions)} transactions for "
                                f"{size} '{rb.group_value}' instances")
            for factor in sorted({f for f, _ in rb.reasons.values() if f}):
                holders = sum(1 for t in rb.transactions if factor in t)
                counts = [c for f, c in rb.reasons.values() if f == factor]
                if sum(counts) < holders or any(c > holders for c in counts):
                    problems.append(f"factor {factor}: reason counts {counts} cannot cover "
                                    f"{holders} transactions")
            for name, (factor, c) in rb.reasons.items():
                if factor is None and c:
                    problems.append(f"{name}: dropped reason must have zero count")
        if problems:
            raise SpecificationError("inconsistent cohort spec: " + "; ".join(problems))


def _arrangement(name: str, size: int) -> list[int]:
    """Fixed, seed-independent permutation used to lay out pinned cells."""
    order = list(range(size))
    random.Random(zlib.crc32(name.encode("utf-8"))).shuffle(order)
    return order


def _assign_reasons(rb: ReasonBlock) -> list[dict]:
    """Reason flags per transaction: a factor's reasons cover exactly its transactions."""
    flags = [{name: rb.other_value for name in rb.reasons} for _ in rb.transactions]
    for factor in sorted({f for f, _ in rb.reasons.values() if f}):
        holders = [i for i, t in enumerate(rb.transactions) if factor in t]
        load = {i: 0 for i in holders}
        names = sorted((n for n, (f, c) in rb.reasons.items() if f == factor and c),
                       key=lambda n: (-rb.reasons[n][1], n))
        for name in names:
            count = rb.reasons[name][1]
            chosen = sorted(holders, key=lambda i: (load[i], i))[:count]
            for i in chosen:
                flags[i][name] = rb.group_value
                load[i] += 1
    return flags


def generate(spec: CohortSpec, seed: int = 1) -> Dataset:
    """Materialise the cohort: exact pinned joints, shuffled unpinned marginals."""
    spec.validate()
    n = spec.n
    cls = spec.class_attribute
    columns: dict[str, list] = {}
    columns[cls] = [v for v, c in spec.class_counts.items() for _ in range(c)]

    if spec.reasons is not None:
        rb = spec.reasons
        group_rows = [i for i, v in enumerate(columns[cls]) if v == rb.group_value]
        flags = _assign_reasons(rb)
        for name in rb.reasons:
            col = [rb.other_value] * n
            for row, f in zip(group_rows, flags):
                col[row] = f[name]
            columns[name] = col

    for j in spec.joints:
        anchor_col = columns[j.anchor]
        col = columns.get(j.attribute, [None] * n)
        col = list(col)
        for a_val, row_counts in zip(j.anchor_values, j.counts):
            rows = [i for i, v in enumerate(anchor_col) if v == a_val]
            if j.attribute in columns:
                # reason attribute already fixed for some rows: fill only the rest
                preset = [i for i in rows if col[i] is not None and (spec.reasons is None
                          or columns[cls][i] == spec.reasons.group_value)]
                free = [i for i in rows if i not in set(preset)]
                remaining = dict(zip(j.values, row_counts))
                for i in preset:
                    remaining[col[i]] -= 1
                if any(v < 0 for v in remaining.values()):
                    raise SpecificationError(f"{j.attribute}: preset values exceed pinned counts")
                values = [v for v in j.values for _ in range(remaining[v])]
                rows = free
            else:
                values = [v for v, c in zip(j.values, row_counts) for _ in range(c)]
            perm = _arrangement(f"{j.attribute}|{a_val}", len(rows))
            for pos, i in zip(perm, rows):
                col[i] = values[pos]
        columns[j.attribute] = col

    rng = random.Random(seed)
    for attr, m in spec.marginals.items():
        if attr in columns:
            continue
        values = [v for v, c in m.items() for _ in range(c)]
        rng.shuffle(values)
        columns[attr] = values

    order = [a for a in spec.marginals] + [r for r in (spec.reasons.reasons if spec.reasons else {})
                                           if r not in spec.marginals] + [cls]
    attrs = []
    for name in order:
        if name == cls:
            domain = tuple(spec.class_counts)
        elif name in spec.marginals:
            domain = tuple(spec.marginals[name])
        else:
            domain = (spec.reasons.other_value, spec.reasons.group_value)
        attrs.append(AttributeSpec(name, NOMINAL, domain))
    rows = list(zip(*(columns[name] for name in order)))
    return Dataset(tuple(attrs), tuple(rows), cls)


def header_comment(seed: int) -> str:
    return f"generator={GENERATOR_VERSION} rng={RNG_NAME} seed={seed}"


def _joint(anchor, attribute, anchor_values, values, counts):
    return PinnedJoint(anchor, attribute, tuple(anchor_values), tuple(values),
                       tuple(tuple(r) for r in counts))


def default_spec() -> CohortSpec:
    """Published cohort: N = 220, 183 continuing ("No") and 37 dropouts ("Yes")."""
    marginals = {
        # demographics
        "AGE": {"<18": 70, "18-20": 131, ">20": 19},
        "Category": {"General": 172, "OBC": 45, "SC": 3},
        "MaritalStatus": {"Unmarried": 220},
        "RES": {"Rural": 51, "Urban": 169},
        "MotherTongue": {"Hindi": 209, "Others": 11},
        "Religion": {"Hindu": 204, "Jainism": 7, "Sikh": 7, "Muslim": 2},
        "FTYPE": {"Nuclear": 115, "Joint": 105},
        # parents
        "FAIn": {"Low": 64, "Medium": 100, "High": 37, "VHigh": 19},
        "FEdu": {"UptoHSec": 31, "GradAbove": 189},
        "MEdu": {"UptoHSec": 62, "GradAbove": 158},
        "FOcc": {"GovtService": 86, "PvtService": 31, "Business": 94, "Agriculture": 9},
        "MOcc": {"GovtService": 22, "PvtService": 18, "Business": 5, "HWife": 175},
        # school and admission
        "SSG": {"A": 90, "B": 69, "C": 47, "D": 14},
        "HSG": {"A": 43, "B": 111, "C": 59, "D": 7},
        "SLoc": {"Village": 18, "Town": 53, "City": 149},
        "Med": {"Hindi": 69, "English": 151},
        "HSC_Stream": {"Math": 179, "Bio": 5, "Commerce": 20, "ArtsMath": 8, "Arts": 8},
        "CAdm": {"BCA": 128, "BTech": 92},
        "AType": {"Marks": 128, "Entrance": 92},
        "UExpenses": {"OwnIncome": 206, "BankLoan": 14},
        "SelfStudy": {"2hrs": 136, "4hrs": 84},
        # reactions to the university
        "SAT_LEVEL": {"NotSatisfied": 41, "Satisfied": 122, "VerySatisfied": 57},
        "CSyllabus": {"Difficult": 30, "Lengthy": 68, "Satisfactory": 78, "Balanced": 44},
        "EduU": {"Poor": 8, "Good": 93, "VeryGood": 79, "Excellent": 40},
        "UINF": {"Poor": 18, "Good": 113, "VeryGood": 59, "Excellent": 30},
        "ActU": {"Good": 37, "VeryGood": 102, "Excellent": 81},
        "EntertU": {"Poor": 70, "Good": 82, "VeryGood": 43, "Excellent": 25},
        "PAR_CURR": {"No": 76, "Yes": 144},
        "CopePressure": {"No": 68, "Yes": 152},
        "TSRelation": {"No": 20, "Yes": 200},
        "PlacementStatus": {"Average": 126, "Good": 47, "VeryGood": 39, "Excellent": 8},
        "OwnChoice": {"No": 52, "Yes": 168},
        "LikeUni": {"No": 30, "Yes": 190},
        "STRESS": {"No": 129, "Financial": 48, "illness": 20, "Other": 23},
        "LikeCampus": {"No": 187, "Yes": 33},
        "fmlyProblem": {"No": 160, "Yes": 60},
    }
    course = ("BCA", "BTech")
    drop = ("No", "Yes")
    joints = [
        _joint(CLASS, "CAdm", drop, course, [[97, 86], [31, 6]]),
        _joint(CLASS, "fmlyProblem", drop, ("No", "Yes"), [[142, 41], [18, 19]]),
        _joint(CLASS, "LikeCampus", drop, ("No", "Yes"), [[168, 15], [19, 18]]),
        # course-wise reactions
        _joint("CAdm", "SAT_LEVEL", course, tuple(marginals["SAT_LEVEL"]), [[22, 72, 34], [19, 50, 23]]),
        _joint("CAdm", "CSyllabus", course, tuple(marginals["CSyllabus"]), [[26, 37, 43, 22], [4, 31, 35, 22]]),
        _joint("CAdm", "EduU", course, tuple(marginals["EduU"]), [[1, 45, 49, 33], [7, 48, 30, 7]]),
        _joint("CAdm", "UINF", course, tuple(marginals["UINF"]), [[8, 58, 41, 21], [10, 55, 18, 9]]),
        # invented dependence so stress and participation carry dropout signal
        _joint(CLASS, "STRESS", drop, tuple(marginals["STRESS"]), [[129, 44, 6, 4], [0, 4, 14, 19]]),
        _joint(CLASS, "PAR_CURR", drop, ("No", "Yes"), [[50, 133], [26, 11]]),
    ]
    reasons = ReasonBlock(
        transactions=tuple(factor_transactions()),
        reasons=dict(DROPOUT_REASONS),
    )
    return CohortSpec(
        n=220,
        class_attribute=CLASS,
        class_counts={"No": 183, "Yes": 37},
        marginals=marginals,
        joints=joints,
        reasons=reasons,
    )


def default_codebook(spec: CohortSpec | None = None) -> Codebook:
    """Numeric coding of the default cohort for discriminant analysis.

    Yes/No attributes become 1/0, any family stress is 1, and ordered scales
    are coded by rank in their listed order.
    """
    spec = spec or default_spec()
    mappings = {}
    for name, m in spec.marginals.items():
        values = list(m)
        if name == "STRESS":
            mappings[name] = {v: ("0" if v == "No" else "1") for v in values}
        elif set(values) == {"No", "Yes"}:
            mappings[name] = {"No": "0", "Yes": "1"}
        else:
            mappings[name] = {v: str(k) for k, v in enumerate(values)}
    if spec.reasons is not None:
        for name in spec.reasons.reasons:
            mappings.setdefault(name, {spec.reasons.other_value: "0", spec.reasons.group_value: "1"})
    return Codebook(mappings)
