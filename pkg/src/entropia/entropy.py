"""WMC risk categories and entropy of the resulting class distribution.

Classes are binned by WMC into the NASA-SATC risk bands; the base-2 Shannon
entropy ``H`` of the bin frequencies measures how disordered the design is,
and ``N * H`` (``N`` = number of classes) is the system degradation score.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)

PROB_TOLERANCE = 1e-12


class EntropyError(ValueError):
    pass


class ValueBelowTable(EntropyError):
    pass


class EmptySystem(EntropyError):
    pass


class ThresholdError(EntropyError):
    pass


@dataclass(frozen=True)
class Category:
    label: str
    lower: float
    upper: float | None
    risk: str

    def contains(self, value: float) -> bool:
        return value >= self.lower and (self.upper is None or value <= self.upper)

    def describe(self, lower_open: bool = False, upper_open: bool = False) -> str:
        lo = f"{_num(self.lower)} {'<' if lower_open else '<='} x"
        if self.upper is None:
            return f"x {'>' if lower_open else '>='} {_num(self.lower)}"
        return f"{lo} {'<' if upper_open else '<='} {_num(self.upper)}"


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(v)


@dataclass(frozen=True)
class ThresholdTable:
    """Ordered, gap-free category bands over ``[min, inf)``.

    Neighbouring bands may share an endpoint. ``boundary="lower"`` hands
    a shared endpoint to the earlier (lower-risk) band, ``"upper"`` to the
    later one.
    """

    categories: tuple[Category, ...]
    boundary: str = "lower"

    def __post_init__(self) -> None:
        cats = tuple(self.categories)
        object.__setattr__(self, "categories", cats)
        if len(cats) < 2:
            raise ThresholdError("a threshold table needs at least two categories")
        if self.boundary not in ("lower", "upper"):
            raise ThresholdError(f"unknown boundary rule {self.boundary!r}")
        for prev, cur in zip(cats, cats[1:]):
            if prev.upper is None:
                raise ThresholdError(f"category {prev.label!r} is open-ended but not last")
            # integer-valued bands like [1,20],[21,100] are contiguous for WMC
            if cur.lower != prev.upper and not (
                float(prev.upper).is_integer() and cur.lower == prev.upper + 1
            ):
                raise ThresholdError(
                    f"categories {prev.label!r} and {cur.label!r} leave a gap or overlap"
                )
        for c in cats:
            if c.upper is not None and c.upper < c.lower:
                raise ThresholdError(f"category {c.label!r} has upper < lower")
        if cats[-1].upper is not None:
            raise ThresholdError("last category must be open-ended")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(c.label for c in self.categories)

    @property
    def minimum(self) -> float:
        return self.categories[0].lower

    def index_of(self, value: float) -> int:
        """Category index for ``value``; raises :class:`ValueBelowTable`."""
        hits = [i for i, c in enumerate(self.categories) if c.contains(value)]
        if not hits:
            raise ValueBelowTable(f"value {value} is below the table minimum {self.minimum}")
        return hits[0] if self.boundary == "lower" else hits[-1]

    def describe(self, index: int) -> str:
        """Band ``index`` as an inequality, with shared endpoints resolved."""
        cats = self.categories
        shared_below = index > 0 and cats[index - 1].upper == cats[index].lower
        shared_above = index + 1 < len(cats) and cats[index + 1].lower == cats[index].upper
        if self.boundary == "lower":
            return cats[index].describe(lower_open=shared_below)
        return cats[index].describe(upper_open=shared_above)

    def to_list(self) -> list[dict]:
        return [
            {"label": c.label, "min": c.lower, "max": c.upper, "risk": c.risk}
            for c in self.categories
        ]

    @classmethod
    def from_list(cls, rows: Sequence[dict], boundary: str = "lower") -> ThresholdTable:
        try:
            cats = tuple(Category(r["label"], r["min"], r.get("max"), r["risk"]) for r in rows)
        except (KeyError, TypeError) as exc:
            raise ThresholdError(f"malformed threshold row: {exc}") from exc
        return cls(cats, boundary)

    @classmethod
    def load(cls, path: str | Path) -> ThresholdTable:
        """Read ``[{label, min, max|null, risk}, ...]`` or ``{"categories": [...], "boundary": ...}``."""
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if isinstance(data, dict):
            return cls.from_list(data.get("categories", []), data.get("boundary", "lower"))
        return cls.from_list(data)


NASA_SATC = ThresholdTable(
    (
        Category("S1", 1, 20, "Good values of class complexity."),
        Category("S2", 20, 100, "Moderate high values of complexity."),
        Category("S3", 100, None, "High class complexity, cause for investigation."),
    )
)


@dataclass(frozen=True)
class Distribution:
    """Probabilities ``p_1..p_a`` summing to one."""

    probabilities: tuple[float, ...]

    def __post_init__(self) -> None:
        probs = tuple(float(p) for p in self.probabilities)
        object.__setattr__(self, "probabilities", probs)
        if not probs:
            raise EntropyError("a distribution needs at least one outcome")
        if any(p < 0 or math.isnan(p) for p in probs):
            raise EntropyError("probabilities must be non-negative")
        if abs(math.fsum(probs) - 1.0) > PROB_TOLERANCE:
            raise EntropyError(f"probabilities sum to {math.fsum(probs)!r}, not 1")

    def __len__(self) -> int:
        return len(self.probabilities)

    def __iter__(self):
        return iter(self.probabilities)

    @classmethod
    def from_weights(cls, weights: Iterable[float]) -> Distribution:
        w = [float(x) for x in weights]
        total = math.fsum(w)
        if total <= 0:
            raise EmptySystem("weights sum to zero")
        return cls(tuple(x / total for x in w))


@dataclass(frozen=True)
class CategoryDistribution:
    labels: tuple[str, ...]
    counts: tuple[int, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        object.__setattr__(self, "warnings", tuple(self.warnings))
        if len(self.labels) != len(self.counts):
            raise EntropyError("labels and counts differ in length")
        if any(c < 0 for c in self.counts):
            raise EntropyError("category counts must be non-negative")

    @classmethod
    def from_counts(cls, counts: Sequence[int], labels: Sequence[str] | None = None) -> CategoryDistribution:
        labels = labels or tuple(f"S{i + 1}" for i in range(len(counts)))
        return cls(tuple(labels), tuple(counts))

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def probabilities(self) -> tuple[float, ...]:
        n = self.total
        if n == 0:
            raise EmptySystem("no classes to distribute")
        return tuple(c / n for c in self.counts)

    def distribution(self) -> Distribution:
        return Distribution(self.probabilities)

    def check_total(self, expected: int | None) -> list[str]:
        """Diagnostics when the counts do not add up to a stated class total."""
        if expected is None or expected == self.total:
            return []
        return [f"counts sum {self.total} != N {expected}"]


def categorize(
    values: Iterable[float], table: ThresholdTable = NASA_SATC, strict: bool = False
) -> CategoryDistribution:
    """Count WMC values per category of ``table``.

    Values under the table minimum (a method-less class has WMC 0) go to the
    first category with a warning, or raise :class:`ValueBelowTable` when
    ``strict`` is set.
    """
    counts = [0] * len(table.categories)
    below = []
    for v in values:
        try:
            counts[table.index_of(v)] += 1
        except ValueBelowTable:
            if strict:
                raise
            below.append(v)
            counts[0] += 1
    warnings = []
    if below:
        msg = (
            f"{len(below)} value(s) below table minimum {_num(table.minimum)} "
            f"assigned to {table.categories[0].label}"
        )
        logger.warning(msg)
        warnings.append(msg)
    return CategoryDistribution(table.labels, tuple(counts), tuple(warnings))


def _probs(d: Distribution | Sequence[float]) -> tuple[float, ...]:
    return d.probabilities if isinstance(d, Distribution) else Distribution(tuple(d)).probabilities


def shannon_entropy(d: Distribution | Sequence[float]) -> float:
    """``-sum p log2 p`` in bits; zero-probability outcomes contribute nothing."""
    # 0.0 - x rather than -x so a certain outcome gives +0.0, not -0.0
    return 0.0 - math.fsum(p * math.log2(p) for p in _probs(d) if p > 0)


def renyi_entropy(d: Distribution | Sequence[float], alpha: float) -> float:
    """Rényi entropy of order ``alpha`` in bits; ``alpha == 1`` is Shannon."""
    if not alpha > 0:
        raise EntropyError("Rényi order must be positive")
    probs = _probs(d)
    if alpha == 1:
        return shannon_entropy(Distribution(probs))
    power_sum = math.fsum(p**alpha for p in probs if p > 0)
    return math.log2(power_sum) / (1.0 - alpha)


def degradation_score(c: CategoryDistribution) -> tuple[float, float]:
    """Return ``(H, N * H)`` for a category distribution."""
    n = c.total
    if n == 0:
        raise EmptySystem("cannot score a system with no classes")
    h = shannon_entropy(c.distribution())
    return h, n * h


def product_distribution(d1: Distribution | Sequence[float], d2: Distribution | Sequence[float]) -> Distribution:
    """Joint distribution of two independent experiments, row-major."""
    p, q = _probs(d1), _probs(d2)
    joint = tuple(a * b for a in p for b in q)
    # renormalize away rounding drift so long products still validate
    total = math.fsum(joint)
    return Distribution(tuple(x / total for x in joint))
