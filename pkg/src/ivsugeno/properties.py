"""Sampled verification of aggregation properties of an FG-functional.

Every row carries an *expected* verdict, derived from the structure of
(measure, F, G) through known sufficient conditions, and an *observed*
verdict from sampling.  Expected ``False`` only means no sufficient condition
applies.  A row is a failure when a property is expected but not observed.

The sufficient conditions come in three families, depending on why the
functional is well defined:

* ``vee``: G = f o max and F non-decreasing in its second argument
* ``proj``: G = f o projection on the first term
* ``sym``: the measure is symmetric
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import intervals as iv
from .functional import FGFunctional, close, probe_ties, structural_wds
from .intervals import ONE, ZERO, Interval, format_interval, make_interval
from .measures import is_symmetric

PROPERTIES = (
    "boundary_zero",
    "boundary_one",
    "monotonicity",
    "aggregation_function",
    "idempotency",
    "internality",
    "positive_homogeneity",
    "min_homogeneity",
    "comonotone_maxitivity",
    "giving_back",
    "wds",
)

GIVING_BACK_MAX_N = 10
LOOSE_TOL = 1e-9


@dataclass(frozen=True)
class PropertyResult:
    name: str
    expected: bool
    observed: bool | None  # None when the check was skipped
    counterexample: str | None = None
    justification: str = ""

    @property
    def failed(self) -> bool:
        return self.expected and self.observed is False

    def status(self) -> str:
        exp = "expected" if self.expected else "not expected"
        if self.observed is None:
            return f"{exp}, skipped"
        return f"{exp}, {'observed' if self.observed else 'not observed'}"


def _vec(xs) -> str:
    return "(" + ", ".join(format_interval(x) for x in xs) + ")"


def random_interval(rng: np.random.Generator) -> Interval:
    r = rng.random()
    if r < 0.15:
        v = float(rng.integers(0, 5)) / 4  # grid points make ties likely
        return make_interval(v, v)
    if r < 0.3:
        v = float(rng.random())
        return make_interval(v, v)
    a, b = rng.random(2)
    return make_interval(min(a, b), max(a, b))


def random_vector(n: int, rng: np.random.Generator) -> list[Interval]:
    return [random_interval(rng) for _ in range(n)]


def _dominating(x: Interval, rng: np.random.Generator, order) -> Interval:
    """Random interval above ``x`` in ``order`` (half the time also in the spo)."""
    if rng.random() < 0.5:
        lo = x.lower + rng.random() * (1.0 - x.lower)
        up = max(x.upper + rng.random() * (1.0 - x.upper), lo)
        return make_interval(lo, up)
    y = random_interval(rng)
    return y if iv.leq(order, x, y) else x


# -- expected verdicts --------------------------------------------------------


class _Structure:
    def __init__(self, fg: FGFunctional):
        self.fg = fg
        F, G, o, m = fg.F, fg.G, fg.order, fg.measure
        self.F, self.G, self.o, self.m = F, G, o, m
        self.vee = G.kind == "vee" and F.nondecreasing_second(o)
        self.proj = G.kind == "proj1"
        self.sym = bool(is_symmetric(m))
        self.f_id = G.f_is_identity()

    def pick(self, vee: bool = False, proj: bool = False, sym: bool = False) -> tuple[bool, str]:
        reasons = []
        if self.vee and vee:
            reasons.append("G = f o max with F non-decreasing in its second argument")
        if self.proj and proj:
            reasons.append("G = f o projection")
        if self.sym and sym:
            reasons.append("symmetric measure")
        if reasons:
            return True, "; ".join(reasons)
        return False, "no sufficient condition matched"

    def expected(self, name: str) -> tuple[bool, str]:
        F, G, o, m = self.F, self.G, self.o, self.m
        if name == "boundary_zero":
            return self.pick(
                vee=F.zero_absorbing(o) and G.f_fixes_zero(),
                proj=F.zero_at_one(o) and G.f_fixes_zero(),
                sym=F.zero_absorbing(o) and G.zero_at_zero(),
            )
        if name == "boundary_one":
            return self.pick(
                vee=F.one_at_one(o) and G.f_fixes_one(),
                proj=F.one_at_one(o) and G.f_fixes_one(),
                sym=F.one_absorbing(o) and G.one_at_one(),
            )
        if name == "monotonicity":
            first = F.nondecreasing_first(o, m)
            return self.pick(
                vee=first and G.f_nondecreasing(o),
                proj=first and G.f_nondecreasing(o),
                sym=first and G.nondecreasing(o),
            )
        if name == "aggregation_function":
            parts = [self.expected(p) for p in ("boundary_zero", "boundary_one", "monotonicity")]
            if all(ok for ok, _ in parts):
                return True, "boundary conditions and monotonicity expected"
            return False, "no sufficient condition matched"
        if name in ("idempotency", "internality"):
            cond = self.f_id and F.identity_at_one(o)
            return self.pick(vee=cond, proj=cond, sym=name == "idempotency" and F.is_projection()
                             and G.idempotent())
        if name == "positive_homogeneity":
            cond = F.positively_homogeneous(o, m)
            return self.pick(vee=cond and G.positively_homogeneous(), proj=cond and G.positively_homogeneous(),
                             sym=cond and G.positively_homogeneous())
        if name == "min_homogeneity":
            cond = F.min_homogeneous(o, m) and G.min_homogeneous()
            return self.pick(vee=cond, proj=cond, sym=cond)
        if name == "comonotone_maxitivity":
            cond = F.comonotone_maxitive(o, m)
            return self.pick(vee=cond and G.f_comonotone_maxitive(o), proj=cond,
                             sym=cond and G.comonotone_maxitive(o))
        if name == "giving_back":
            return self.pick(vee=self.f_id and F.zero_at_one(o))
        if name == "wds":
            rule = structural_wds(m, F, G, o)
            return (True, rule) if rule else (False, "no structural rule applies")
        raise KeyError(name)


# -- observed verdicts --------------------------------------------------------


def _search(samples: int, gen: Callable, check: Callable) -> str | None:
    for _ in range(samples):
        case = gen()
        msg = check(*case)
        if msg:
            return msg
    return None


class _Observer:
    def __init__(self, fg: FGFunctional, samples: int, seed: int):
        self.fg = fg
        self.n = fg.n
        self.o = fg.order
        self.samples = samples
        self.seed = seed

    def rng(self, name: str) -> np.random.Generator:
        # one stream per property so that rows are independent of each other
        return np.random.default_rng([self.seed, PROPERTIES.index(name)])

    def boundary_zero(self):
        s = self.fg([ZERO] * self.n)
        return None if s == ZERO else f"S{_vec([ZERO] * self.n)} = {format_interval(s)}"

    def boundary_one(self):
        s = self.fg([ONE] * self.n)
        return None if s == ONE else f"S{_vec([ONE] * self.n)} = {format_interval(s)}"

    def monotonicity(self):
        rng, fg, o = self.rng("monotonicity"), self.fg, self.o

        def gen():
            x = random_vector(self.n, rng)
            return x, [_dominating(v, rng, o) for v in x]

        def check(x, y):
            sx, sy = fg(x), fg(y)
            if iv.compare(o, sx, sy) > 0 and not close(sx, sy, LOOSE_TOL):
                return f"X = {_vec(x)} <= Y = {_vec(y)} but S(X) = {format_interval(sx)} > S(Y) = {format_interval(sy)}"
            return None

        return _search(self.samples, gen, check)

    def idempotency(self):
        rng, fg = self.rng("idempotency"), self.fg
        fixed = [make_interval(0.5, 0.5), make_interval(0.2, 0.6), ZERO, ONE]
        probes = iter(fixed)

        def gen():
            c = next(probes, None) or random_interval(rng)
            return (c,)

        def check(c):
            s = fg([c] * self.n)
            if not close(s, c, LOOSE_TOL):
                return f"S{_vec([c] * self.n)} = {format_interval(s)} != {format_interval(c)}"
            return None

        return _search(self.samples, gen, check)

    def internality(self):
        rng, fg, o = self.rng("internality"), self.fg, self.o

        def check(x):
            s = fg(x)
            lo, hi = iv.order_min_all(o, x), iv.order_max_all(o, x)
            if (iv.compare(o, s, lo) < 0 and not close(s, lo, LOOSE_TOL)) or (
                iv.compare(o, s, hi) > 0 and not close(s, hi, LOOSE_TOL)
            ):
                return f"S{_vec(x)} = {format_interval(s)} outside [{format_interval(lo)}, {format_interval(hi)}]"
            return None

        return _search(self.samples, lambda: (random_vector(self.n, rng),), check)

    def positive_homogeneity(self):
        rng, fg = self.rng("positive_homogeneity"), self.fg

        def gen():
            x = random_vector(self.n, rng)
            top = max(v.upper for v in x)
            cmax = 1.0 / top if top > 0 else 2.0
            return x, float(rng.random() * min(cmax, 2.0))

        def check(x, c):
            lhs = fg([iv.scalar_mul(c, v) for v in x])
            rhs = iv.scalar_mul(c, fg(x)) if c * fg(x).upper <= 1.0 + iv.TOL else None
            if rhs is None or not close(lhs, rhs, LOOSE_TOL):
                shown = format_interval(rhs) if rhs else "out of range"
                return f"c = {iv.format_float(c)}, X = {_vec(x)}: S(cX) = {format_interval(lhs)}, c S(X) = {shown}"
            return None

        return _search(self.samples, gen, check)

    def min_homogeneity(self):
        # c ^ X is the order meet of [c,c] and X
        rng, fg, o = self.rng("min_homogeneity"), self.fg, self.o

        def gen():
            return random_vector(self.n, rng), float(rng.integers(0, 5)) / 4 if rng.random() < 0.2 else float(rng.random())

        def check(x, c):
            cc = make_interval(c, c)
            lhs = fg([iv.order_min(o, cc, v) for v in x])
            rhs = iv.order_min(o, cc, fg(x))
            if not close(lhs, rhs):
                return f"c = {iv.format_float(c)}, X = {_vec(x)}: S(c^X) = {format_interval(lhs)}, c^S(X) = {format_interval(rhs)}"
            return None

        return _search(self.samples, gen, check)

    def comonotone_maxitivity(self):
        rng, fg, o = self.rng("comonotone_maxitivity"), self.fg, self.o

        def gen():
            sigma = rng.permutation(self.n)
            xs = sorted(random_vector(self.n, rng), key=o.key)
            ys = sorted(random_vector(self.n, rng), key=o.key)
            x, y = [None] * self.n, [None] * self.n
            for rank, i in enumerate(sigma):
                x[i], y[i] = xs[rank], ys[rank]
            return x, y

        def check(x, y):
            z = [iv.order_max(o, a, b) for a, b in zip(x, y)]
            lhs, rhs = fg(z), iv.order_max(o, fg(x), fg(y))
            if not close(lhs, rhs):
                return f"X = {_vec(x)}, Y = {_vec(y)}: S(X v Y) = {format_interval(lhs)}, S(X) v S(Y) = {format_interval(rhs)}"
            return None

        return _search(self.samples, gen, check)

    def giving_back(self):
        fg = self.fg
        for e in range(1 << self.n):
            ind = [ONE if e >> i & 1 else ZERO for i in range(self.n)]
            s = fg(ind)
            want = fg.F(ONE, fg.measure(e), fg.order)
            if not close(s, want):
                return f"S{_vec(ind)} = {format_interval(s)}, F(1, m(E)) = {format_interval(want)}"
        return None


def property_suite(fg: FGFunctional, samples: int = 1000, seed: int = 0,
                   wds_probes: int | None = None) -> list[PropertyResult]:
    """Expected vs observed verdict for each property in :data:`PROPERTIES`."""
    st = _Structure(fg)
    ob = _Observer(fg, samples, seed)
    rows: dict[str, PropertyResult] = {}
    for name in PROPERTIES:
        expected, why = st.expected(name)
        if name == "aggregation_function":
            parts = [rows[p] for p in ("boundary_zero", "boundary_one", "monotonicity")]
            observed = all(p.observed for p in parts)
            cex = next((p.counterexample for p in parts if p.counterexample), None)
        elif name == "giving_back" and fg.n > GIVING_BACK_MAX_N:
            observed, cex = None, None
            why += f"; skipped for n > {GIVING_BACK_MAX_N}"
        elif name == "wds":
            witness = probe_ties(fg.measure, fg.F, fg.G, fg.order, wds_probes or samples, seed)
            observed = witness is None
            cex = None if observed else _vec(witness["vector"]) + (
                f": {format_interval(witness['result1'])} vs {format_interval(witness['result2'])}")
        else:
            cex = getattr(ob, name)()
            observed = cex is None
        rows[name] = PropertyResult(name, expected, observed, cex, why)
    return [rows[p] for p in PROPERTIES]
