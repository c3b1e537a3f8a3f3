"""Interval functions built from a pair of scalar functions through the
``(K_alpha, lambda_alpha)`` coordinates.

Given scalar ``M1`` and ``M2`` the interval output ``Y`` of
``M_IV(X_1, ..., X_n)`` is the unique interval with

    K_alpha(Y)      = M1(K_alpha(X_1), ..., K_alpha(X_n))
    lambda_alpha(Y) = M2(lambda_alpha(X_1), ..., lambda_alpha(X_n))

The scalar functions are tagged closed forms rather than callables so that
property verdicts can be predicted from the tags.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from .errors import EmptyInput
from .intervals import (
    ONE,
    ZERO,
    AdmissibleOrder,
    Interval,
    compare,
    format_interval,
    from_k_lambda,
    k_alpha,
    lambda_alpha,
    make_interval,
)

CHECK_TOL = 1e-9


# -- scalar building blocks --------------------------------------------------


@dataclass(frozen=True)
class ScalarOp:
    """Base for tagged scalar functions ``[0,1]^n -> [0,1]``."""

    symmetric = True
    associative = True
    nondecreasing = True
    strictly_increasing = True  # on the points where the value is not 0 or 1
    binary_only = False

    def binary(self, x: float, y: float) -> float:
        raise NotImplementedError

    def __call__(self, *xs: float) -> float:
        if not xs:
            raise EmptyInput("scalar aggregation of no arguments")
        if self.binary_only and len(xs) != 2:
            raise ValueError(f"{self.describe()} is binary only")
        return reduce(self.binary, xs)

    # closed-form facts used to predict property verdicts
    def zero_annihilates(self) -> bool:
        """``M(0, y) = 0`` for every y."""
        return False

    def zero_is_neutral(self) -> bool:
        """``M(0, y) = y``."""
        return False

    def one_is_left_neutral(self) -> bool:
        """``M(1, y) = y``."""
        return False

    def one_is_right_neutral(self) -> bool:
        """``M(x, 1) = x``."""
        return False

    def at_zero(self) -> float:
        return self(0.0, 0.0)

    def at_one(self) -> float:
        return self(1.0, 1.0)

    def describe(self) -> str:
        return type(self).__name__


@dataclass(frozen=True)
class Product(ScalarOp):
    def binary(self, x, y):
        return x * y

    def zero_annihilates(self):
        return True

    def one_is_left_neutral(self):
        return True

    def one_is_right_neutral(self):
        return True

    def describe(self):
        return "product"


@dataclass(frozen=True)
class HamacherProduct(ScalarOp):
    """``xy / (gamma + (1 - gamma)(x + y - xy))``, 0 at ``x = y = 0``."""

    gamma: float = 0.0

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError("Hamacher parameter must be >= 0")

    def binary(self, x, y):
        if x == 0.0 and y == 0.0:
            return 0.0
        g = self.gamma
        den = g + (1.0 - g) * (x + y - x * y)
        if den == 0.0:
            return 0.0
        return min(max(x * y / den, 0.0), 1.0)

    def zero_annihilates(self):
        return True

    def one_is_left_neutral(self):
        return True

    def one_is_right_neutral(self):
        return True

    def describe(self):
        return f"hamacher(gamma={self.gamma:g})"


@dataclass(frozen=True)
class ConvexCombo(ScalarOp):
    """``(1 - a) x + a y``; binary only."""

    a: float = 0.5
    binary_only = True
    associative = False

    def __post_init__(self):
        if not 0.0 <= self.a <= 1.0:
            raise ValueError("convex weight must lie in [0, 1]")

    @property
    def symmetric(self):
        return self.a == 0.5

    @property
    def strictly_increasing(self):
        return 0.0 < self.a < 1.0

    def binary(self, x, y):
        return (1.0 - self.a) * x + self.a * y

    def zero_is_neutral(self):
        return self.a == 1.0

    def one_is_left_neutral(self):
        return self.a == 1.0

    def one_is_right_neutral(self):
        return self.a == 0.0

    def zero_annihilates(self):
        return False

    def describe(self):
        return f"convex(a={self.a:g})"


@dataclass(frozen=True)
class Minimum(ScalarOp):
    """Scalar minimum.  Not strictly increasing, so it is not an admissible M1."""

    strictly_increasing = False

    def binary(self, x, y):
        return min(x, y)

    def zero_annihilates(self):
        return True

    def one_is_left_neutral(self):
        return True

    def one_is_right_neutral(self):
        return True

    def describe(self):
        return "minimum"


# -- the construction --------------------------------------------------------


@dataclass(frozen=True)
class MivSpec:
    alpha: float
    m1: ScalarOp
    m2: ScalarOp
    allow_non_strict: bool = field(default=False, compare=False)

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if not self.allow_non_strict and not self.m1.strictly_increasing:
            raise ValueError(
                f"M1 = {self.m1.describe()} is not strictly increasing; the induced "
                "interval function would not be monotone"
            )

    def describe(self) -> str:
        return f"M_IV(alpha={self.alpha:g}, M1={self.m1.describe()}, M2={self.m2.describe()})"

    def __call__(self, *xs: Interval) -> Interval:
        return miv_apply(self, xs)

    # facts about the induced interval function, derived from the tags
    @property
    def zero_key_forces_zero(self) -> bool:
        """``K_alpha(Y) = 0`` implies ``Y = [0,0]``; fails only at alpha = 0."""
        return self.alpha > 0.0

    @property
    def unit_key_forces_one(self) -> bool:
        """``K_alpha(Y) = 1`` implies ``Y = [1,1]``; fails only at alpha = 1."""
        return self.alpha < 1.0

    def order_compatible(self, order: AdmissibleOrder) -> bool:
        """Is ``order`` one of ``<=_{alpha+}`` / ``<=_{alpha-}`` for this alpha?"""
        return order.alpha == self.alpha


def miv_apply(spec: MivSpec, xs: Sequence[Interval]) -> Interval:
    if not xs:
        raise EmptyInput("M_IV of no arguments")
    a = spec.alpha
    c = spec.m1(*(k_alpha(a, x) for x in xs))
    lam = spec.m2(*(lambda_alpha(a, x) for x in xs))
    return from_k_lambda(a, min(max(c, 0.0), 1.0), min(max(lam, 0.0), 1.0))


# -- catalog -----------------------------------------------------------------

LISTED_PROPERTIES = (
    "well_defined",
    "boundary_zero",
    "boundary_one",
    "monotonicity",
    "aggregation_function",
    "idempotency",
    "internality",
)


@dataclass(frozen=True)
class MivPreset:
    name: str
    spec: MivSpec
    params: dict
    # rows of the summary table this preset is listed under, for G = max
    listed: frozenset


_ALL = frozenset(LISTED_PROPERTIES)
_NO_IDEM = _ALL - {"idempotency", "internality"}
_NO_ZERO = _NO_IDEM - {"boundary_zero", "aggregation_function"}


def make_preset(name: str, alpha: float = 0.5, a1: float = 0.5, a2: float = 0.5, gamma: float = 0.0) -> MivPreset:
    """Build catalog entry ``"(i)"`` .. ``"(v)"`` with the given parameters."""
    if name == "(i)":
        spec, params, rows = MivSpec(alpha, Product(), Product()), {}, _ALL
    elif name == "(ii)":
        spec, params, rows = MivSpec(alpha, Product(), ConvexCombo(a2)), {"a2": a2}, _NO_IDEM
    elif name == "(iii)":
        h = HamacherProduct(gamma)
        spec, params, rows = MivSpec(alpha, h, h), {"gamma": gamma}, _ALL
    elif name == "(iv)":
        spec, params, rows = (
            MivSpec(alpha, HamacherProduct(gamma), ConvexCombo(a2)),
            {"gamma": gamma, "a2": a2},
            _NO_IDEM,
        )
    elif name == "(v)":
        if not 0.0 < a1 < 1.0:
            raise ValueError("preset (v) needs a1 in (0, 1)")
        spec, params, rows = MivSpec(alpha, ConvexCombo(a1), ConvexCombo(a2)), {"a1": a1, "a2": a2}, _NO_ZERO
    else:
        raise KeyError(f"unknown M_IV preset {name!r}; expected one of (i)..(v)")
    return MivPreset(name, spec, {"alpha": alpha, **params}, rows)


def preset_catalog(alpha: float = 0.5, a1: float = 0.5, a2: float = 0.5, gamma: float = 0.0) -> list[MivPreset]:
    return [make_preset(nm, alpha, a1, a2, gamma) for nm in ("(i)", "(ii)", "(iii)", "(iv)", "(v)")]


# -- property checks ---------------------------------------------------------


@dataclass
class ClauseResult:
    clause: str
    description: str
    expected: bool
    observed: bool
    counterexample: str | None = None

    @property
    def consistent(self) -> bool:
        return self.observed or not self.expected


def _close(x: Interval, y: Interval, tol: float = CHECK_TOL) -> bool:
    return abs(x.lower - y.lower) <= tol and abs(x.upper - y.upper) <= tol


def _rand_interval(rng: np.random.Generator) -> Interval:
    u = rng.random(2)
    if rng.random() < 0.1:
        return make_interval(u[0], u[0])
    return make_interval(min(u), max(u))


def _first_failure(samples, predicate, show):
    for s in samples:
        if not predicate(*s):
            return show(*s)
    return None


def miv_property_suite(spec: MivSpec, samples: int = 1000, seed: int = 0) -> list[ClauseResult]:
    """Sampled check of the binary ``M_IV`` properties (i)-(ix).

    Expected verdicts come from the scalar tags.  Boundary clauses (iii) and
    (iv) additionally need ``alpha > 0``, since at ``alpha = 0`` a zero
    ``K_alpha`` no longer forces the zero interval; clause (v) likewise needs
    ``alpha < 1``.
    """
    rng = np.random.default_rng(seed)
    m1, m2 = spec.m1, spec.m2
    f = lambda x, y: miv_apply(spec, (x, y))  # noqa: E731
    pairs = [(_rand_interval(rng), _rand_interval(rng)) for _ in range(samples)]
    triples = [(_rand_interval(rng), _rand_interval(rng), _rand_interval(rng)) for _ in range(samples)]
    results = []

    def record(clause, desc, expected, failure):
        results.append(ClauseResult(clause, desc, expected, failure is None, failure))

    out = f(ZERO, ZERO)
    record("(i)", "M_IV(0,...,0) = 0", m1.at_zero() == 0.0,
           None if out == ZERO else f"M_IV(0,0) = {format_interval(out)}")
    out = f(ONE, ONE)
    record("(ii)", "M_IV(1,...,1) = 1", m1.at_one() == 1.0,
           None if out == ONE else f"M_IV(1,1) = {format_interval(out)}")

    ys = [(y,) for y, _ in pairs] + [(ONE,), (ZERO,)]
    record("(iii)", "M_IV(0,Y) = 0", m1.zero_annihilates() and spec.zero_key_forces_zero,
           _first_failure(ys, lambda y: f(ZERO, y) == ZERO,
                          lambda y: f"Y={format_interval(y)} -> {format_interval(f(ZERO, y))}"))
    record("(iv)", "M_IV(0,Y) = Y", m1.zero_is_neutral() and m2.one_is_left_neutral() and spec.zero_key_forces_zero,
           _first_failure(ys, lambda y: _close(f(ZERO, y), y),
                          lambda y: f"Y={format_interval(y)} -> {format_interval(f(ZERO, y))}"))
    record("(v)", "M_IV(1,Y) = Y", m1.one_is_left_neutral() and m2.one_is_left_neutral() and spec.unit_key_forces_one,
           _first_failure(ys, lambda y: _close(f(ONE, y), y),
                          lambda y: f"Y={format_interval(y)} -> {format_interval(f(ONE, y))}"))
    record("(vi)", "symmetric", m1.symmetric and m2.symmetric,
           _first_failure(pairs, lambda x, y: _close(f(x, y), f(y, x)),
                          lambda x, y: f"X={format_interval(x)}, Y={format_interval(y)}"))
    assoc_ok = not (m1.binary_only or m2.binary_only)
    record("(vii)", "associative", m1.associative and m2.associative and assoc_ok,
           _first_failure(triples, lambda x, y, z: _close(f(f(x, y), z), f(x, f(y, z))),
                          lambda x, y, z: f"X={format_interval(x)}, Y={format_interval(y)}, Z={format_interval(z)}"))

    mono_expected = m1.nondecreasing and m2.nondecreasing and m1.strictly_increasing
    orders = []
    if spec.alpha < 1.0:
        orders.append(AdmissibleOrder.alpha_plus(spec.alpha))
    if spec.alpha > 0.0:
        orders.append(AdmissibleOrder.alpha_minus(spec.alpha))
    per_arg = []
    for k in (0, 1):
        fail = None
        for order in orders:
            fail = _monotone_failure(f, order, k, rng, samples)
            if fail:
                fail = f"{order.describe()}: {fail}"
                break
        per_arg.append(fail)
    record("(viii)", "non-decreasing", mono_expected, per_arg[0] or per_arg[1])
    record("(ix)", "non-decreasing in argument 1", mono_expected, per_arg[0])
    record("(ix)", "non-decreasing in argument 2", mono_expected, per_arg[1])
    return results


def _monotone_failure(f, order, k, rng, samples):
    for _ in range(samples):
        a, b, other = _rand_interval(rng), _rand_interval(rng), _rand_interval(rng)
        if compare(order, a, b) > 0:
            a, b = b, a
        args_a = (a, other) if k == 0 else (other, a)
        args_b = (b, other) if k == 0 else (other, b)
        ya, yb = f(*args_a), f(*args_b)
        if compare(order, ya, yb) > 0:
            return (f"{format_interval(a)} <= {format_interval(b)} but "
                    f"{format_interval(ya)} > {format_interval(yb)}")
    return None
