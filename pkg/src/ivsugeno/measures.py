"""Interval-valued fuzzy measures on subsets of ``N = {0, ..., n-1}``.

Subsets are bitmasks: element ``i`` belongs to the subset ``A`` when bit ``i``
of ``A`` is set.  Scalar measures are embedded as degenerate intervals.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Mapping

import numpy as np

from .errors import MeasureError
from .intervals import ONE, ZERO, AdmissibleOrder, Interval, compare, format_interval, make_interval

MAX_TABLE_N = 24


def mask_of(elements: Iterable[int]) -> int:
    mask = 0
    for i in elements:
        mask |= 1 << i
    return mask


def members(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def bitstring(mask: int, n: int) -> str:
    """Left-to-right membership string: character ``i`` is element ``i``."""
    return "".join("1" if mask >> i & 1 else "0" for i in range(n))


@dataclass(frozen=True)
class IvFuzzyMeasure:
    """An interval-valued fuzzy measure.

    ``kind`` is ``"cardinality"``, ``"power"`` or ``"table"``.  Closed-form
    families depend only on ``|A|`` and keep one value per cardinality;
    tables store one interval per bitmask.
    """

    n: int
    kind: str
    p: float = 1.0
    table: tuple[Interval, ...] | None = field(default=None, repr=False)
    _by_size: tuple[Interval, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise MeasureError("a fuzzy measure needs n >= 1")
        if self.kind in ("cardinality", "power"):
            if self.p <= 0:
                raise MeasureError("power measure exponent must be positive")
            p = 1.0 if self.kind == "cardinality" else self.p
            sizes = tuple(make_interval(*(2 * [(k / self.n) ** p])) for k in range(self.n + 1))
            object.__setattr__(self, "_by_size", sizes)
        elif self.kind == "table":
            if self.n > MAX_TABLE_N:
                raise MeasureError(f"explicit tables are limited to n <= {MAX_TABLE_N}")
            if self.table is None or len(self.table) != 1 << self.n:
                raise MeasureError("table measure needs exactly 2**n values")
        else:
            raise MeasureError(f"unknown measure kind {self.kind!r}")

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def __call__(self, mask: int) -> Interval:
        if self.table is not None:
            return self.table[mask]
        return self._by_size[mask.bit_count()]

    def of(self, elements: Iterable[int]) -> Interval:
        return self(mask_of(elements))

    @property
    def is_family(self) -> bool:
        return self.kind in ("cardinality", "power")

    @property
    def is_degenerate(self) -> bool:
        if self.is_family:
            return True
        return all(v.lower == v.upper for v in self.table)

    def describe(self) -> str:
        if self.kind == "cardinality":
            return f"cardinality(n={self.n})"
        if self.kind == "power":
            return f"power(n={self.n}, p={self.p:g})"
        return f"table(n={self.n})"


def cardinality_measure(n: int) -> IvFuzzyMeasure:
    """``m(A) = [|A|/n, |A|/n]``."""
    return IvFuzzyMeasure(n, "cardinality")


def power_measure(n: int, p: float) -> IvFuzzyMeasure:
    """``m(A) = [(|A|/n)**p, (|A|/n)**p]``; ``p = 1`` is the cardinality measure."""
    if p == 1:
        return cardinality_measure(n)
    return IvFuzzyMeasure(n, "power", p=float(p))


def table_measure(n: int, values: Mapping[int, Interval] | Iterable[Interval]) -> IvFuzzyMeasure:
    """Explicit measure from ``{mask: Interval}`` or a full list indexed by mask.

    Missing empty-set and full-set entries default to 0 and 1.  Validation of
    boundary and monotonicity conditions is left to :func:`validate` so that
    invalid tables can still be inspected.
    """
    if isinstance(values, Mapping):
        full = (1 << n) - 1
        table = [None] * (1 << n)
        for mask, v in values.items():
            if not 0 <= mask <= full:
                raise MeasureError(f"subset mask {mask} outside 2**{n}")
            table[mask] = v
        table[0] = table[0] if table[0] is not None else ZERO
        table[full] = table[full] if table[full] is not None else ONE
        missing = [bitstring(i, n) for i, v in enumerate(table) if v is None]
        if missing:
            raise MeasureError(f"measure table lacks subsets {missing[:5]}")
        return IvFuzzyMeasure(n, "table", table=tuple(table))
    return IvFuzzyMeasure(n, "table", table=tuple(values))


def scalar_table_measure(n: int, values: Mapping[int, float]) -> IvFuzzyMeasure:
    return table_measure(n, {k: make_interval(v, v) for k, v in values.items()})


def from_scalar(n: int, mu: Callable[[int], float]) -> IvFuzzyMeasure:
    """Embed a scalar set function as degenerate intervals."""
    return table_measure(n, [make_interval(mu(a), mu(a)) for a in range(1 << n)])


def as_table(m: IvFuzzyMeasure) -> IvFuzzyMeasure:
    if m.table is not None:
        return m
    return IvFuzzyMeasure(m.n, "table", table=tuple(m(a) for a in range(1 << m.n)))


# -- validation --------------------------------------------------------------


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    violation: str | None = None  # "boundary" | "monotonicity"
    witness: tuple[int, int] | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def validate(m: IvFuzzyMeasure, order: AdmissibleOrder) -> ValidationResult:
    """Check ``m(empty) = 0``, ``m(N) = 1`` and monotonicity under ``order``.

    Only covering pairs ``A < A | {i}`` are checked; monotonicity along all
    inclusions follows by transitivity.  Never raises.
    """
    if m(0) != ZERO:
        return ValidationResult(False, "boundary", (0, 0), f"m(empty) = {format_interval(m(0))}, expected [0,0]")
    if m(m.full) != ONE:
        return ValidationResult(
            False, "boundary", (m.full, m.full), f"m(N) = {format_interval(m(m.full))}, expected [1,1]"
        )
    if m.is_family:
        return ValidationResult(True)
    for a in range(1 << m.n):
        va = m(a)
        for i in range(m.n):
            bit = 1 << i
            if a & bit:
                continue
            b = a | bit
            if compare(order, va, m(b)) > 0:
                return ValidationResult(
                    False,
                    "monotonicity",
                    (a, b),
                    f"m({bitstring(a, m.n)}) = {format_interval(va)} exceeds "
                    f"m({bitstring(b, m.n)}) = {format_interval(m(b))}",
                )
    return ValidationResult(True)


@dataclass(frozen=True)
class MeasureSymmetryReport:
    symmetric: bool
    witness: tuple[int, int] | None = None

    def __post_init__(self):
        if self.symmetric == (self.witness is not None):
            raise ValueError("witness must be present exactly when the measure is not symmetric")

    def __bool__(self) -> bool:
        return self.symmetric


def is_symmetric(m: IvFuzzyMeasure) -> MeasureSymmetryReport:
    """Does ``m(A)`` depend on ``|A|`` only?  Exhaustive for tables."""
    if m.is_family:
        return MeasureSymmetryReport(True)
    first: dict[int, int] = {}
    for a in range(1 << m.n):
        k = a.bit_count()
        if k not in first:
            first[k] = a
        elif m(a) != m(first[k]):
            return MeasureSymmetryReport(False, (first[k], a))
    return MeasureSymmetryReport(True)


# -- I/O ---------------------------------------------------------------------


def load_measure_csv(path) -> IvFuzzyMeasure:
    """Read a table measure from CSV with columns ``subset,lower,upper``.

    ``subset`` is a bitstring such as ``"101"`` (elements 1 and 3 of n = 3).
    """
    values: dict[int, Interval] = {}
    n = None
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"subset", "lower", "upper"} <= set(reader.fieldnames):
            raise MeasureError("measure CSV needs columns subset,lower,upper")
        for row in reader:
            bits = row["subset"].strip()
            if not bits or set(bits) - {"0", "1"}:
                raise MeasureError(f"bad subset bitstring {bits!r}")
            if n is None:
                n = len(bits)
            elif len(bits) != n:
                raise MeasureError("subset bitstrings have inconsistent lengths")
            mask = mask_of(i for i, ch in enumerate(bits) if ch == "1")
            values[mask] = make_interval(float(row["lower"]), float(row["upper"]))
    if n is None:
        raise MeasureError(f"{path}: no rows")
    return table_measure(n, values)


def write_measure_csv(m: IvFuzzyMeasure, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["subset", "lower", "upper"])
        for a in range(1 << m.n):
            v = m(a)
            w.writerow([bitstring(a, m.n), repr(v.lower), repr(v.upper)])


# -- random measures for property checks -------------------------------------


def _random_monotone(n: int, rng: np.random.Generator) -> np.ndarray:
    """Scalar monotone set function with mu(empty) = 0, mu(N) = 1."""
    mu = np.zeros(1 << n)
    for size in range(1, n):
        for combo in combinations(range(n), size):
            a = mask_of(combo)
            floor = max(mu[a & ~(1 << i)] for i in combo)
            mu[a] = floor + (1.0 - floor) * rng.random() ** 2
    mu[(1 << n) - 1] = 1.0
    return mu


def random_measure(n: int, rng: np.random.Generator, degenerate: bool = False) -> IvFuzzyMeasure:
    """Random IV fuzzy measure, monotone under the standard partial order and
    hence under every admissible order."""
    a = _random_monotone(n, rng)
    if degenerate:
        return table_measure(n, [make_interval(v, v) for v in a])
    b = _random_monotone(n, rng)
    lo, up = np.minimum(a, b), np.maximum(a, b)
    return table_measure(n, [make_interval(float(x), float(y)) for x, y in zip(lo, up)])

