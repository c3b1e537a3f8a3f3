"""Sugeno-like FG-functionals, scalar and interval-valued.

For an input vector sorted ascending by a permutation ``sigma`` the
functional evaluates

    G(F(X_sigma(1), m(E_1)), ..., F(X_sigma(n), m(E_n)))

with ``E_i = {sigma(i), ..., sigma(n)}``.  ``F(X, Y)`` receives an input and
a measure value; ``G`` folds the resulting terms in sorted order.  With
``F = min`` and ``G = max`` this is the Sugeno integral.

F and G are small tagged objects carrying the structural facts (monotonicity,
neutral elements, homogeneity, ...) needed to decide well-definedness and to
predict which aggregation properties hold.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import intervals as iv
from .errors import EmptyInput, LengthMismatch, NonSymmetricMeasure, WDSViolation
from .intervals import ONE, ZERO, AdmissibleOrder, Interval, format_interval, make_interval
from .measures import IvFuzzyMeasure, is_symmetric, random_measure
from .miv import MivSpec, miv_apply

EQ_TOL = 1e-12


def close(x: Interval, y: Interval, tol: float = EQ_TOL) -> bool:
    return abs(x.lower - y.lower) <= tol and abs(x.upper - y.upper) <= tol


# -- F presets ---------------------------------------------------------------


class FPreset:
    """A binary interval function ``F(X, Y)``; ``Y`` is a measure value.

    The predicate methods describe the function with respect to a given
    admissible order and measure.  They are sufficient facts: ``False`` means
    "not guaranteed", not "fails".
    """

    tag = "F"

    def __call__(self, x: Interval, y: Interval, order: AdmissibleOrder) -> Interval:
        raise NotImplementedError

    def describe(self) -> str:
        return self.tag

    def nondecreasing_second(self, order: AdmissibleOrder) -> bool:
        return False

    def nondecreasing_first(self, order: AdmissibleOrder, m: IvFuzzyMeasure) -> bool:
        return False

    def identity_at_one(self, order: AdmissibleOrder) -> bool:
        """``F(X, 1) = X``."""
        return False

    def zero_absorbing(self, order: AdmissibleOrder) -> bool:
        """``F(0, Y) = 0`` for every ``Y``."""
        return False

    def zero_at_one(self, order: AdmissibleOrder) -> bool:
        """``F(0, 1) = 0``."""
        return self.zero_absorbing(order)

    def one_at_one(self, order: AdmissibleOrder) -> bool:
        """``F(1, 1) = 1``."""
        return False

    def one_absorbing(self, order: AdmissibleOrder) -> bool:
        """``F(1, Y) = 1`` for every ``Y``."""
        return False

    def is_projection(self) -> bool:
        """``F(X, Y) = X``."""
        return False

    def positively_homogeneous(self, order, m) -> bool:
        return False

    def min_homogeneous(self, order, m) -> bool:
        return False

    def comonotone_maxitive(self, order, m) -> bool:
        # in a chain every monotone map preserves joins
        return self.nondecreasing_first(order, m)


class Meet(FPreset):
    """Lattice meet of the admissible order."""

    tag = "meet"

    def __call__(self, x, y, order):
        return iv.order_min(order, x, y)

    def nondecreasing_second(self, order):
        return True

    def nondecreasing_first(self, order, m):
        return True

    def identity_at_one(self, order):
        return True

    def zero_absorbing(self, order):
        return True

    def one_at_one(self, order):
        return True

    def min_homogeneous(self, order, m):
        return True


def _degenerate_lex(order, m) -> bool:
    return order.is_lexicographic and m.is_degenerate


class Sugeno1(FPreset):
    """``F(X, Y) = X^2 Y + X (1 - Y)``.

    The scalar map is non-decreasing in x and non-increasing in y, so the
    interval extension is ``[f(lo X, up Y), f(up X, lo Y)]``.
    """

    tag = "sugeno1"

    @staticmethod
    def scalar(x: float, y: float) -> float:
        return x * x * y + x * (1.0 - y)

    def __call__(self, x, y, order):
        return make_interval(self.scalar(x.lower, y.upper), self.scalar(x.upper, y.lower))

    def nondecreasing_first(self, order, m):
        # x -> f(x, t) is strictly increasing, which lexicographic orders preserve
        return _degenerate_lex(order, m)

    def zero_absorbing(self, order):
        return True

    def one_at_one(self, order):
        return True

    def one_absorbing(self, order):
        return True


class Sugeno2(FPreset):
    """``F(X, Y) = X (1 - Y) = [lo X (1 - up Y), up X (1 - lo Y)]``."""

    tag = "sugeno2"

    def __call__(self, x, y, order):
        return iv.mul(x, iv.complement(y))

    def nondecreasing_first(self, order, m):
        # degenerate measure values give a positive rescaling, which keeps K_alpha order
        return m.is_degenerate

    def zero_absorbing(self, order):
        return True

    def positively_homogeneous(self, order, m):
        return True


class SNA(Sugeno2):
    """``F(X, y) = X (1 - y)`` with a scalar (degenerate) measure value."""

    tag = "sna"

    def __call__(self, x, y, order):
        if y.lower != y.upper:
            raise ValueError("the sna F preset expects degenerate measure values")
        t = 1.0 - y.lower
        return make_interval(x.lower * t, x.upper * t)


@dataclass(frozen=True, eq=False)
class MivF(FPreset):
    """``F(X, Y) = M_IV(X, Y)`` for a binary construction spec."""

    spec: MivSpec
    name: str = ""

    @property
    def tag(self):
        return f"miv{self.name}" if self.name else "miv"

    def __call__(self, x, y, order):
        return miv_apply(self.spec, (x, y))

    def describe(self):
        return f"{self.tag}: {self.spec.describe()}"

    def _monotone(self, order):
        s = self.spec
        return (s.order_compatible(order) and s.m1.strictly_increasing
                and s.m1.nondecreasing and s.m2.nondecreasing)

    def nondecreasing_second(self, order):
        return self._monotone(order)

    def nondecreasing_first(self, order, m):
        return self._monotone(order)

    def identity_at_one(self, order):
        s = self.spec
        return s.unit_key_forces_one and s.m1.one_is_right_neutral() and s.m2.one_is_right_neutral()

    def zero_absorbing(self, order):
        return self.spec.zero_key_forces_zero and self.spec.m1.zero_annihilates()

    def zero_at_one(self, order):
        return self.spec.m1(0.0, 1.0) == 0.0 and self.spec.zero_key_forces_zero

    def one_at_one(self, order):
        return self.spec.m1.at_one() == 1.0


F_PRESETS: dict[str, Callable[[], FPreset]] = {
    "meet": Meet,
    "sugeno1": Sugeno1,
    "sugeno2": Sugeno2,
    "sna": SNA,
}


# -- G presets ---------------------------------------------------------------

_OUTER = {
    "id": lambda x: x,
    "square": iv.square,
    "sqrt": iv.sqrt,
}


class GPreset:
    """An n-ary interval function folding the F-terms (given in sorted order).

    ``kind`` is ``"vee"`` for ``f o max``, ``"proj1"`` for projection on the
    first term, ``"other"`` otherwise.
    """

    tag = "G"
    kind = "other"
    outer = "id"

    def __call__(self, terms: Sequence[Interval], order: AdmissibleOrder) -> Interval:
        raise NotImplementedError

    def describe(self) -> str:
        return self.tag

    # facts about the outer map f (only meaningful for vee / proj1)
    def f_fixes_zero(self) -> bool:
        return True

    def f_fixes_one(self) -> bool:
        return True

    def f_is_identity(self) -> bool:
        return self.outer == "id"

    def f_nondecreasing(self, order) -> bool:
        # endpoint-wise increasing maps preserve only lexicographic orders
        return self.outer == "id" or order.is_lexicographic

    def f_positively_homogeneous(self) -> bool:
        return self.outer == "id"

    def f_min_homogeneous(self) -> bool:
        return self.outer == "id"

    def f_comonotone_maxitive(self, order) -> bool:
        return self.f_nondecreasing(order)

    # facts about G as a whole
    def zero_at_zero(self) -> bool:
        return True

    def one_at_one(self) -> bool:
        return True

    def nondecreasing(self, order) -> bool:
        return False

    def idempotent(self) -> bool:
        return False

    def positively_homogeneous(self) -> bool:
        return False

    def min_homogeneous(self) -> bool:
        return False

    def comonotone_maxitive(self, order) -> bool:
        return False


class OrderMax(GPreset):
    """``f(max X_i)`` under the admissible order, ``f`` in id/square/sqrt."""

    kind = "vee"

    def __init__(self, outer: str = "id"):
        if outer not in _OUTER:
            raise ValueError(f"unknown outer map {outer!r}")
        self.outer = outer
        self.tag = "max" if outer == "id" else f"max-{outer}"

    def __call__(self, terms, order):
        return _OUTER[self.outer](iv.order_max_all(order, terms))

    def nondecreasing(self, order):
        return self.f_nondecreasing(order)

    def idempotent(self):
        return self.f_is_identity()

    def positively_homogeneous(self):
        return self.f_positively_homogeneous()

    def min_homogeneous(self):
        return self.f_min_homogeneous()

    def comonotone_maxitive(self, order):
        return self.f_comonotone_maxitive(order)


class Proj1(GPreset):
    kind = "proj1"
    tag = "proj1"

    def __call__(self, terms, order):
        return terms[0]

    def nondecreasing(self, order):
        return True

    def idempotent(self):
        return True

    def positively_homogeneous(self):
        return True

    def min_homogeneous(self):
        return True

    def comonotone_maxitive(self, order):
        return True


class ArithmeticMean(GPreset):
    tag = "mean"

    def __call__(self, terms, order):
        return iv.mean(terms)

    def nondecreasing(self, order):
        # K_alpha and K_beta are linear, so the mean keeps the lexicographic key order
        return True

    def idempotent(self):
        return True

    def positively_homogeneous(self):
        return True


class CappedSum(GPreset):
    """``min{1, sum X_i}``; admitted with symmetric measures only."""

    tag = "capped-sum"

    def __call__(self, terms, order):
        return iv.capped_sum(terms)


G_PRESETS: dict[str, Callable[[], GPreset]] = {
    "max": OrderMax,
    "max-square": lambda: OrderMax("square"),
    "max-sqrt": lambda: OrderMax("sqrt"),
    "proj1": Proj1,
    "mean": ArithmeticMean,
    "capped-sum": CappedSum,
}


# -- scalar functionals ------------------------------------------------------


def _scalar_mu(mu) -> Callable[[int], float]:
    if isinstance(mu, IvFuzzyMeasure):
        if not mu.is_degenerate:
            raise ValueError("a scalar functional needs a degenerate (scalar) measure")
        return lambda a: mu(a).lower
    return mu


def _tail_masks(sigma: Sequence[int]) -> list[int]:
    """``E_i = {sigma(i), ..., sigma(n)}`` as bitmasks, i = 1..n."""
    masks = [0] * len(sigma)
    acc = 0
    for i in range(len(sigma) - 1, -1, -1):
        acc |= 1 << sigma[i]
        masks[i] = acc
    return masks


def scalar_sugeno(mu, x: Sequence[float]) -> float:
    """Discrete Sugeno integral ``max_i min(x_sigma(i), mu(E_sigma(i)))``.

    ``mu`` is an :class:`IvFuzzyMeasure` with degenerate values or a callable
    on bitmasks.
    """
    if len(x) == 0:
        raise EmptyInput("Sugeno integral of an empty vector")
    mu = _scalar_mu(mu)
    sigma = sorted(range(len(x)), key=lambda i: x[i])
    return max(min(x[s], mu(e)) for s, e in zip(sigma, _tail_masks(sigma)))


def scalar_fg(mu, F: Callable[[float, float], float], G: Callable[[Sequence[float]], float],
              x: Sequence[float], n: int | None = None) -> float:
    """Scalar FG-functional; the measure must be symmetric."""
    if len(x) == 0:
        raise EmptyInput("FG-functional of an empty vector")
    n = len(x) if n is None else n
    if isinstance(mu, IvFuzzyMeasure):
        if not is_symmetric(mu):
            raise NonSymmetricMeasure("the scalar FG-functional needs a symmetric measure")
    else:
        by_size = {}
        for a in range(1 << n):
            v = mu(a)
            if by_size.setdefault(a.bit_count(), v) != v:
                raise NonSymmetricMeasure("the scalar FG-functional needs a symmetric measure")
    mu = _scalar_mu(mu)
    sigma = sorted(range(len(x)), key=lambda i: x[i])
    return G([F(x[s], mu(e)) for s, e in zip(sigma, _tail_masks(sigma))])


# -- the interval-valued functional ------------------------------------------


def _terms(measure, order, F, xs, sigma):
    return [F(xs[s], measure(e), order) for s, e in zip(sigma, _tail_masks(sigma))]


def _evaluate(measure, order, F, G, xs, sigma):
    return G(_terms(measure, order, F, xs, sigma), order)


@dataclass(frozen=True)
class WDSResult:
    passed: bool
    structural: str | None = None  # which sufficient condition applied
    witness: dict | None = None
    probes: int = 0

    def __bool__(self):
        return self.passed

    def describe(self) -> str:
        if self.passed:
            how = f"structural rule {self.structural}" if self.structural else f"{self.probes} tie probes"
            return f"WDS pass ({how})"
        w = self.witness or {}
        if "vector" not in w:
            return f"WDS fail: {w.get('reason', 'unknown')}"
        vec = " ".join(format_interval(v) for v in w["vector"])
        s1 = ",".join(str(i + 1) for i in w["sigma1"])
        s2 = ",".join(str(i + 1) for i in w["sigma2"])
        return (f"WDS fail: X = {vec}; sigma=({s1}) gives {format_interval(w['result1'])}, "
                f"sigma=({s2}) gives {format_interval(w['result2'])}")


def structural_wds(measure: IvFuzzyMeasure, F: FPreset, G: GPreset, order: AdmissibleOrder) -> str | None:
    """Name of the sufficient condition that makes the triple well defined, or None."""
    if is_symmetric(measure):
        return "(i) symmetric measure"
    if G.kind == "proj1":
        return "(ii) G = f o Proj1"
    if G.kind == "vee" and F.nondecreasing_second(order):
        return "(iii) F non-decreasing in the second variable, G = f o max"
    return None


def tie_permutations(order: AdmissibleOrder, xs: Sequence[Interval], limit: int = 5040,
                     rng: np.random.Generator | None = None) -> list[tuple[int, ...]]:
    """All permutations sorting ``xs`` ascending (ties in any order).

    When there are more than ``limit`` of them a random subset of ``limit``
    is returned, always starting with the stable one.
    """
    _, stable = iv.order_sort(order, xs)
    groups = [list(g) for _, g in itertools.groupby(stable, key=lambda i: order.key(xs[i]))]
    total = math.prod(math.factorial(len(g)) for g in groups)
    if total <= limit:
        return [tuple(itertools.chain.from_iterable(p))
                for p in itertools.product(*(itertools.permutations(g) for g in groups))]
    rng = rng or np.random.default_rng(0)
    out = [stable]
    for _ in range(limit - 1):
        out.append(tuple(itertools.chain.from_iterable(rng.permutation(g).tolist() for g in groups)))
    return out


def tie_outcomes(measure, F, G, order, xs) -> list[tuple[tuple[int, ...], Interval]]:
    """Value of the FG composition under every tie-resolving permutation."""
    return [(sigma, _evaluate(measure, order, F, G, xs, sigma)) for sigma in tie_permutations(order, xs)]


def _tie_vector(n, rng):
    k = int(rng.integers(1, n)) if n > 1 else 1
    pool = []
    for _ in range(k):
        u = rng.random(2)
        if rng.random() < 0.3:
            u = np.round(u * 4) / 4  # grid values make measure/input coincidences likely
        pool.append(make_interval(min(u), max(u)))
    if rng.random() < 0.2:
        pool.append(ONE if rng.random() < 0.5 else ZERO)
    return [pool[int(rng.integers(len(pool)))] for _ in range(n)]


def probe_ties(measure, F, G, order, probes: int = 1000, seed: int = 0,
               tol: float = EQ_TOL) -> dict | None:
    """Random search for a tie permutation changing the result.

    Returns a witness dict or None.
    """
    rng = np.random.default_rng(seed)
    n = measure.n
    if n == 1:
        return None
    for _ in range(probes):
        xs = _tie_vector(n, rng)
        outcomes = tie_outcomes(measure, F, G, order, xs)
        s0, r0 = outcomes[0]
        for s, r in outcomes[1:]:
            if not close(r, r0, tol):
                return {"vector": xs, "sigma1": s0, "result1": r0, "sigma2": s, "result2": r}
    return None


def wds_check(measure: IvFuzzyMeasure, F: FPreset, G: GPreset, order: AdmissibleOrder,
              probes: int = 200, seed: int = 0) -> WDSResult:
    """Is the triple well defined (independent of how ties are sorted)?

    Structural sufficient conditions are tried first; otherwise ties are
    probed at random.  A capped sum is rejected with non-symmetric measures.
    """
    rule = structural_wds(measure, F, G, order)
    if rule:
        return WDSResult(True, structural=rule)
    witness = probe_ties(measure, F, G, order, probes, seed)
    if witness is not None:
        return WDSResult(False, witness=witness, probes=probes)
    if isinstance(G, CappedSum):
        return WDSResult(False, witness={"reason": "capped-sum G requires a symmetric measure"}, probes=probes)
    return WDSResult(True, probes=probes)


@dataclass(frozen=True, eq=False)
class FGFunctional:
    """An interval-valued Sugeno-like FG-functional.

    Construction runs :func:`wds_check` and raises :class:`WDSViolation` for
    ill-defined triples unless ``acknowledge_non_wds`` is set, in which case
    evaluation uses the stable sort and ``non_wds`` is True.
    """

    measure: IvFuzzyMeasure
    F: FPreset
    G: GPreset
    order: AdmissibleOrder = field(default_factory=AdmissibleOrder.xu_yager)
    acknowledge_non_wds: bool = False
    wds_probes: int = 200
    wds: WDSResult = field(init=False, repr=False)

    def __post_init__(self):
        result = wds_check(self.measure, self.F, self.G, self.order, self.wds_probes)
        object.__setattr__(self, "wds", result)
        if not result and not self.acknowledge_non_wds:
            raise WDSViolation(result.describe(), result.witness)

    @property
    def n(self) -> int:
        return self.measure.n

    @property
    def non_wds(self) -> bool:
        return not self.wds.passed

    def __call__(self, xs: Sequence[Interval]) -> Interval:
        return iv_sugeno_fg(self, xs)

    def trace(self, xs: Sequence[Interval]) -> dict:
        """Sorting permutation, measure values, F-terms and the result."""
        self._check_len(xs)
        _, sigma = iv.order_sort(self.order, xs)
        masks = _tail_masks(sigma)
        terms = _terms(self.measure, self.order, self.F, xs, sigma)
        return {
            "sigma": sigma,
            "measure": [self.measure(e) for e in masks],
            "terms": terms,
            "result": self.G(terms, self.order),
        }

    def describe(self) -> str:
        return (f"S[{self.measure.describe()}; F={self.F.describe()}; G={self.G.describe()}; "
                f"order={self.order.describe()}]")

    def with_measure(self, measure: IvFuzzyMeasure) -> FGFunctional:
        return FGFunctional(measure, self.F, self.G, self.order, self.acknowledge_non_wds, self.wds_probes)

    def _check_len(self, xs):
        if len(xs) == 0:
            raise EmptyInput("FG-functional of an empty vector")
        if len(xs) != self.measure.n:
            raise LengthMismatch(f"expected {self.measure.n} intervals, got {len(xs)}")


def iv_sugeno_fg(fg: FGFunctional, xs: Sequence[Interval]) -> Interval:
    fg._check_len(xs)
    _, sigma = iv.order_sort(fg.order, xs)
    return _evaluate(fg.measure, fg.order, fg.F, fg.G, xs, sigma)


# -- named presets -----------------------------------------------------------

FUNCTIONAL_PRESETS = {
    # name: (F, G)
    "iv-sugeno1": ("sugeno1", "mean"),
    "iv-sugeno2": ("sugeno2", "mean"),
    "iv-sugeno3": ("meet", "max"),
    "sna": ("sna", "capped-sum"),
}


def make_functional(name: str, measure: IvFuzzyMeasure, order: AdmissibleOrder | None = None,
                    **kwargs) -> FGFunctional:
    """Functional from a preset name (``iv-sugeno1`` .. ``iv-sugeno3``, ``sna``)."""
    f, g = FUNCTIONAL_PRESETS[name]
    return FGFunctional(measure, F_PRESETS[f](), G_PRESETS[g](), order or AdmissibleOrder.xu_yager(), **kwargs)


def random_nonsymmetric_measure(n: int, rng: np.random.Generator) -> IvFuzzyMeasure:
    return random_measure(n, rng)
