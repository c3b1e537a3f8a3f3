"""Interval-valued affinity centralities on weighted digraphs.

Directed affinities (best friend, best common friend) are turned into a
symmetric interval ``[min, max]`` per pair of actors.  An actor's
relationships are aggregated with an FG-functional whose arity equals the
number of relationships; the width of the aggregate is the centrality.
"""
from __future__ import annotations

import csv
import logging
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DataError
from .functional import SNA, CappedSum, FGFunctional
from .intervals import ZERO, AdmissibleOrder, Interval, make_interval
from .measures import cardinality_measure

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Sparse non-negative adjacency ``C(x, y)``; actors are kept sorted."""

    actors: tuple[str, ...]
    rows: Mapping[str, Mapping[str, float]]

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str, float]], actors: Iterable[str] = ()) -> WeightedGraph:
        """Build from (src, dst, weight) triples; repeated edges add up."""
        rows: dict[str, dict[str, float]] = defaultdict(dict)
        names = set(actors)
        for src, dst, w in edges:
            w = float(w)
            if not w >= 0.0:
                raise DataError(f"edge {src}->{dst} has negative or invalid weight {w!r}")
            names.update((src, dst))
            if w > 0.0:
                rows[src][dst] = rows[src].get(dst, 0.0) + w
        return cls(tuple(sorted(names)), {k: dict(v) for k, v in rows.items()})

    def weight(self, x: str, y: str) -> float:
        return self.rows.get(x, {}).get(y, 0.0)

    def out(self, x: str) -> Mapping[str, float]:
        return self.rows.get(x, {})

    def row_sum(self, x: str) -> float:
        return sum(self.out(x).values())

    def edges(self) -> list[tuple[str, str, float]]:
        return [(x, y, self.rows[x][y]) for x in sorted(self.rows) for y in sorted(self.rows[x])]

    def scaled(self, c: float) -> WeightedGraph:
        return WeightedGraph(self.actors, {x: {y: c * w for y, w in r.items()} for x, r in self.rows.items()})


def load_edges_csv(path) -> WeightedGraph:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if not {"src", "dst", "weight"} <= set(reader.fieldnames or ()):
            raise DataError(f"{path}: edge list needs columns src,dst,weight")
        try:
            return WeightedGraph.from_edges((r["src"], r["dst"], float(r["weight"])) for r in reader)
        except ValueError as exc:
            if isinstance(exc, DataError):
                raise
            raise DataError(f"{path}: {exc}") from exc


def load_tokens(path) -> list[str]:
    """Pre-tokenized text: tokens separated by whitespace or newlines."""
    with open(path) as fh:
        return fh.read().split()


def cooccurrence_graph(tokens: Sequence[str], k: int = 10) -> WeightedGraph:
    """Symmetric counts of distinct-token pairs at distance at most ``k``."""
    if k < 1:
        raise ValueError("window must be at least 1")
    counts: dict[tuple[str, str], int] = defaultdict(int)
    for i, u in enumerate(tokens):
        for v in tokens[i + 1: i + 1 + k]:
            if u != v:
                counts[u, v] += 1
                counts[v, u] += 1
    return WeightedGraph.from_edges(((u, v, c) for (u, v), c in counts.items()), tokens)


# -- affinities --------------------------------------------------------------

_warned_isolated: set[str] = set()


def _denominator(g: WeightedGraph, x: str) -> float:
    total = g.row_sum(x)
    if total == 0.0 and x not in _warned_isolated:
        _warned_isolated.add(x)
        log.info("actor %s has no outgoing weight; its affinities are 0", x)
    return total


def bf_affinity(g: WeightedGraph, x: str, y: str) -> float:
    """Best friend affinity ``C(x, y) / sum_a C(x, a)``."""
    total = _denominator(g, x)
    return g.weight(x, y) / total if total else 0.0


def bcf_affinity(g: WeightedGraph, x: str, y: str) -> float:
    """Best common friend affinity ``max_a min(C(x, a), C(y, a)) / sum_a C(x, a)``."""
    total = _denominator(g, x)
    if not total:
        return 0.0
    ox, oy = g.out(x), g.out(y)
    best = max((min(w, oy[a]) for a, w in ox.items() if a in oy), default=0.0)
    return best / total


def affinity_matrix(g: WeightedGraph, kind: str = "bf") -> dict[str, dict[str, float]]:
    """Non-zero directed affinities ``F_C(x, y)`` as a sparse mapping."""
    out: dict[str, dict[str, float]] = {}
    if kind == "bf":
        for x in g.actors:
            total = _denominator(g, x)
            if total:
                out[x] = {y: w / total for y, w in g.out(x).items()}
        return out
    if kind != "bcf":
        raise ValueError(f"unknown affinity {kind!r}")
    # pairs sharing a neighbour a, found through the in-lists of a
    incoming: dict[str, list[tuple[str, float]]] = defaultdict(list)
    for x in g.actors:
        for a, w in g.out(x).items():
            incoming[a].append((x, w))
    best: dict[str, dict[str, float]] = defaultdict(dict)
    for a in sorted(incoming):
        srcs = incoming[a]
        for x, wx in srcs:
            bx = best[x]
            for y, wy in srcs:
                m = min(wx, wy)
                if m > bx.get(y, 0.0):
                    bx[y] = m
    for x, row in best.items():
        total = _denominator(g, x)
        out[x] = {y: v / total for y, v in row.items()}
    return out


def iv_affinity(fc: Mapping[str, Mapping[str, float]], x: str, y: str) -> Interval:
    """``[min, max]`` of the two directed affinities of a pair."""
    a = fc.get(x, {}).get(y, 0.0)
    b = fc.get(y, {}).get(x, 0.0)
    return make_interval(min(a, b), max(a, b))


def iv_affinity_matrix(fc: Mapping[str, Mapping[str, float]]) -> dict[str, dict[str, Interval]]:
    """Symmetric mapping x -> y -> IV-affinity over pairs with a non-zero affinity (x != y)."""
    out: dict[str, dict[str, Interval]] = defaultdict(dict)
    for x, row in fc.items():
        for y in row:
            if x != y and y not in out[x]:
                v = iv_affinity(fc, x, y)
                if v != ZERO:
                    out[x][y] = v
                    out[y][x] = v
    return {x: dict(r) for x, r in out.items()}


# -- centralities ------------------------------------------------------------


@dataclass(frozen=True)
class CentralityRow:
    actor: str
    asymmetry: float
    altruism: float
    egoism: float
    generosity: float


@dataclass(frozen=True)
class CentralityReport:
    rows: tuple[CentralityRow, ...]
    affinity: str

    def __getitem__(self, actor: str) -> CentralityRow:
        for r in self.rows:
            if r.actor == actor:
                return r
        raise KeyError(actor)

    def as_dict(self) -> dict[str, CentralityRow]:
        return {r.actor: r for r in self.rows}


FunctionalFactory = Callable[[int], FGFunctional]


def default_functional(order: AdmissibleOrder | None = None) -> FunctionalFactory:
    """The capped sum of ``X (1 - y)`` terms with the cardinality measure."""
    order = order or AdmissibleOrder.xu_yager()
    cache: dict[int, FGFunctional] = {}

    def make(k: int) -> FGFunctional:
        if k not in cache:
            cache[k] = FGFunctional(cardinality_measure(k), SNA(), CappedSum(), order)
        return cache[k]

    return make


def _width_of(make: FunctionalFactory, xs: list[Interval]) -> float:
    if not xs:
        return 0.0
    s = make(len(xs))(xs)
    return s.upper - s.lower


def centralities(g: WeightedGraph, affinity: str = "bf", functional: FunctionalFactory | None = None,
                 workers: int = 1) -> CentralityReport:
    """Asymmetry, altruism, egoism and generosity for every actor.

    The relationships of ``x`` are the actors with a non-zero IV-affinity to
    ``x``.  Altruism aggregates those where ``x`` is at least as committed
    (``F_C(y, x) <= F_C(x, y)``), egoism those where it is at most as
    committed; equal affinities count for both.  Empty sets give 0.
    """
    make = functional or default_functional()
    fc = affinity_matrix(g, affinity)
    ivm = iv_affinity_matrix(fc)
    # functionals are cached per arity; build them before any threads start
    for k in range(1, max((len(r) for r in ivm.values()), default=0) + 1):
        make(k)

    def one(x: str) -> CentralityRow:
        rel = ivm.get(x, {})
        ys = sorted(rel)
        fx = fc.get(x, {})
        out_aff = {y: fx.get(y, 0.0) for y in ys}
        in_aff = {y: fc.get(y, {}).get(x, 0.0) for y in ys}
        a = _width_of(make, [rel[y] for y in ys])
        l = _width_of(make, [rel[y] for y in ys if in_aff[y] <= out_aff[y]])
        e = _width_of(make, [rel[y] for y in ys if out_aff[y] <= in_aff[y]])
        return CentralityRow(x, a, l, e, l - e)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = tuple(pool.map(one, g.actors))
    else:
        rows = tuple(one(x) for x in g.actors)
    return CentralityReport(rows, affinity)
