"""Closed subintervals of [0, 1], the K_alpha / lambda_alpha coordinates and
admissible total orders of the ``<=_{alpha,beta}`` family.

All values are immutable; every function here is pure.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import IntervalError, Inverted, OutOfRange

TOL = 1e-12
KEY_DIGITS = 12


@dataclass(frozen=True, slots=True)
class Interval:
    """A closed interval ``[lower, upper]`` with ``0 <= lower <= upper <= 1``.

    The constructor is strict.  Use :func:`make_interval` to absorb rounding
    noise of order 1e-12.
    """

    lower: float
    upper: float

    def __post_init__(self):
        lo, up = self.lower, self.upper
        if not (0.0 <= lo <= 1.0 and 0.0 <= up <= 1.0):
            raise OutOfRange(f"interval endpoints must lie in [0, 1], got [{lo!r}, {up!r}]")
        if lo > up:
            raise Inverted(f"lower bound {lo!r} exceeds upper bound {up!r}")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def is_degenerate(self) -> bool:
        return self.lower == self.upper

    def __str__(self) -> str:
        return format_interval(self)


ZERO = Interval(0.0, 0.0)
ONE = Interval(1.0, 1.0)


def make_interval(lower: float, upper: float, tol: float = TOL) -> Interval:
    """Build an interval, snapping endpoint noise within ``tol``.

    >>> make_interval(0.2, 0.5)
    Interval(lower=0.2, upper=0.5)
    """
    lower = float(lower)
    upper = float(upper)
    if math.isnan(lower) or math.isnan(upper):
        raise OutOfRange("interval endpoints must not be NaN")
    if lower < -tol or lower > 1.0 + tol or upper < -tol or upper > 1.0 + tol:
        raise OutOfRange(f"interval endpoints must lie in [0, 1], got [{lower!r}, {upper!r}]")
    if lower > upper + tol:
        raise Inverted(f"lower bound {lower!r} exceeds upper bound {upper!r}")
    lower = min(max(lower, 0.0), 1.0)
    upper = min(max(upper, 0.0), 1.0)
    if lower > upper:
        # rounding produced a tiny negative width: collapse to a point
        lower = upper = 0.5 * (lower + upper)
    return Interval(lower, upper)


def degenerate(x: float) -> Interval:
    return make_interval(x, x)


def width(x: Interval) -> float:
    return x.upper - x.lower


# -- K_alpha / lambda_alpha coordinates -------------------------------------


def k_alpha(alpha: float, x: Interval) -> float:
    """Convex combination ``(1 - alpha) * lower + alpha * upper``."""
    return (1.0 - alpha) * x.lower + alpha * x.upper


def _ratio_or_one(num: float, den: float) -> float:
    return 1.0 if den == 0.0 else num / den


def d_alpha(alpha: float, c: float) -> float:
    """Largest width an interval with ``K_alpha = c`` can have.

    Division by zero is read as 1.
    """
    return min(_ratio_or_one(c, alpha), _ratio_or_one(1.0 - c, 1.0 - alpha))


def lambda_alpha(alpha: float, x: Interval) -> float:
    """Width of ``x`` relative to the maximal width at its K_alpha; 0/0 is 1."""
    w = x.upper - x.lower
    d = d_alpha(alpha, k_alpha(alpha, x))
    if d == 0.0:
        # d == 0 forces a degenerate interval
        return 1.0
    return min(w / d, 1.0)


def from_k_lambda(alpha: float, c: float, lam: float) -> Interval:
    """Inverse of ``(k_alpha, lambda_alpha)``.

    Returns the interval Y with ``K_alpha(Y) = c`` and
    ``width(Y) = lam * d_alpha(c)``.
    """
    w = lam * d_alpha(alpha, c)
    return make_interval(c - alpha * w, c + (1.0 - alpha) * w)


# -- admissible orders ------------------------------------------------------


@dataclass(frozen=True, slots=True)
class AdmissibleOrder:
    """The admissible order ``<=_{alpha,beta}``.

    Intervals are compared by ``K_alpha`` and ties are broken by ``K_beta``.
    Keys are rounded to 12 decimals so that sorting is reproducible.
    """

    alpha: float
    beta: float
    name: str = "alpha-beta"

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0 and 0.0 <= self.beta <= 1.0):
            raise ValueError("alpha and beta must lie in [0, 1]")
        if self.alpha == self.beta:
            raise ValueError("alpha and beta must differ")

    @classmethod
    def xu_yager(cls) -> AdmissibleOrder:
        return cls(0.5, 1.0, "xy")

    @classmethod
    def lex1(cls) -> AdmissibleOrder:
        return cls(0.0, 1.0, "lex1")

    @classmethod
    def lex2(cls) -> AdmissibleOrder:
        return cls(1.0, 0.0, "lex2")

    @classmethod
    def alpha_beta(cls, alpha: float, beta: float) -> AdmissibleOrder:
        return cls(alpha, beta, "alpha-beta")

    @classmethod
    def alpha_plus(cls, alpha: float) -> AdmissibleOrder:
        # every beta > alpha yields the same order; beta = 1 represents it
        if not 0.0 <= alpha < 1.0:
            raise ValueError("alpha-plus needs alpha in [0, 1)")
        return cls(alpha, 1.0, "alpha-plus")

    @classmethod
    def alpha_minus(cls, alpha: float) -> AdmissibleOrder:
        if not 0.0 < alpha <= 1.0:
            raise ValueError("alpha-minus needs alpha in (0, 1]")
        return cls(alpha, 0.0, "alpha-minus")

    @property
    def is_plus(self) -> bool:
        """True when the order coincides with ``<=_{alpha+}``."""
        return self.beta > self.alpha

    @property
    def is_lexicographic(self) -> bool:
        return self.alpha in (0.0, 1.0)

    def key(self, x: Interval) -> tuple[float, float]:
        a, b = self.alpha, self.beta
        return (
            round((1.0 - a) * x.lower + a * x.upper, KEY_DIGITS),
            round((1.0 - b) * x.lower + b * x.upper, KEY_DIGITS),
        )

    def describe(self) -> str:
        if self.name in ("xy", "lex1", "lex2"):
            return self.name
        if self.name in ("alpha-plus", "alpha-minus"):
            return f"{self.name}:{self.alpha:g}"
        return f"alpha-beta:{self.alpha:g},{self.beta:g}"


def compare(order: AdmissibleOrder, x: Interval, y: Interval) -> int:
    """Three-way comparison: -1, 0 or 1."""
    kx, ky = order.key(x), order.key(y)
    return (kx > ky) - (kx < ky)


def leq(order: AdmissibleOrder, x: Interval, y: Interval) -> bool:
    return order.key(x) <= order.key(y)


def order_min(order: AdmissibleOrder, x: Interval, y: Interval) -> Interval:
    """Lattice meet under the total order; returns one of the arguments."""
    return y if order.key(y) < order.key(x) else x


def order_max(order: AdmissibleOrder, x: Interval, y: Interval) -> Interval:
    return y if order.key(y) > order.key(x) else x


def order_min_all(order: AdmissibleOrder, xs: Iterable[Interval]) -> Interval:
    return min(xs, key=order.key)


def order_max_all(order: AdmissibleOrder, xs: Iterable[Interval]) -> Interval:
    # max() keeps the first of equal keys, like order_max
    return max(xs, key=order.key)


def order_sort(order: AdmissibleOrder, xs: Sequence[Interval]) -> tuple[tuple[Interval, ...], tuple[int, ...]]:
    """Stable ascending sort; returns the sorted values and the 0-based
    permutation ``sigma`` with ``sorted[i] == xs[sigma[i]]``."""
    sigma = tuple(sorted(range(len(xs)), key=lambda i: order.key(xs[i])))
    return tuple(xs[i] for i in sigma), sigma


def spo_leq(x: Interval, y: Interval) -> bool:
    """Standard (componentwise) partial order."""
    return x.lower <= y.lower and x.upper <= y.upper


# -- arithmetic -------------------------------------------------------------


def add(x: Interval, y: Interval) -> tuple[float, float]:
    """Endpoint sum.  May leave [0, 1]; feed the result to :func:`cap_one`."""
    return (x.lower + y.lower, x.upper + y.upper)


def cap_one(pair: tuple[float, float] | Interval) -> Interval:
    if isinstance(pair, Interval):
        return pair
    lo, up = pair
    return make_interval(min(lo, 1.0), min(up, 1.0))


def capped_sum(xs: Iterable[Interval]) -> Interval:
    """``min{1, sum X_i}`` computed endpoint-wise."""
    lo = up = 0.0
    for x in xs:
        lo += x.lower
        up += x.upper
    return cap_one((lo, up))


def mean(xs: Sequence[Interval]) -> Interval:
    if not xs:
        raise ValueError("mean of an empty sequence")
    n = len(xs)
    return make_interval(math.fsum(x.lower for x in xs) / n, math.fsum(x.upper for x in xs) / n)


def mul(x: Interval, y: Interval) -> Interval:
    return make_interval(x.lower * y.lower, x.upper * y.upper)


def complement(x: Interval) -> Interval:
    return make_interval(1.0 - x.upper, 1.0 - x.lower)


def square(x: Interval) -> Interval:
    return make_interval(x.lower * x.lower, x.upper * x.upper)


def sqrt(x: Interval) -> Interval:
    return make_interval(math.sqrt(x.lower), math.sqrt(x.upper))


def scalar_mul(c: float, x: Interval) -> Interval:
    """``c * [lo, up] = [c*lo, c*up]`` for ``c >= 0``."""
    if c < 0:
        raise OutOfRange(f"scalar must be non-negative, got {c!r}")
    if c * x.upper > 1.0 + TOL:
        raise OutOfRange(f"{c!r} * {format_interval(x)} leaves [0, 1]")
    return make_interval(c * x.lower, c * x.upper)


def scalar_min(c: float, x: Interval) -> Interval:
    """Endpoint-wise ``[c ^ lo, c ^ up]``."""
    return make_interval(min(c, x.lower), min(c, x.upper))


# -- text form --------------------------------------------------------------


def format_float(v: float) -> str:
    s = f"{v:.12g}"
    return "0" if s == "-0" else s


def format_interval(x: Interval) -> str:
    return f"[{format_float(x.lower)},{format_float(x.upper)}]"


_INTERVAL_RE = re.compile(r"^\s*\[\s*([^,\]\s]+)\s*,\s*([^,\]\s]+)\s*\]\s*$")


def parse_interval(text: str) -> Interval:
    """Parse ``"[lower,upper]"``; a bare number is a degenerate interval."""
    m = _INTERVAL_RE.match(text)
    try:
        lo, up = (float(m.group(1)), float(m.group(2))) if m else (float(text),) * 2
    except ValueError as exc:
        raise IntervalError(f"cannot parse interval from {text!r}") from exc
    return make_interval(lo, up)


def parse_interval_vector(text: str) -> list[Interval]:
    """Parse whitespace-separated intervals such as ``"[0.1,0.2] [0.5,0.7]"``."""
    tokens = re.findall(r"\[[^\]]*\]|[^\s\[\]]+", text)
    return [parse_interval(t) for t in tokens]
