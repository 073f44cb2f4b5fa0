"""Chain structure at finite resolution.

Interval maps are discretised by a :class:`BoxPartition` and shifts by
``k``-block graphs; either way the chain relation becomes a finite
:class:`TransitionGraph`. Box graphs come in two flavours that bracket the
true point-level relation:

* ``outer``: ``i -> j`` when ``dist(f(B_i), B_j) < eps``. Every genuine
  ``eps``-step between points of the boxes shows up, so a missing path is a
  refutation.
* ``inner``: ``i -> j`` when ``|f(r_i) - r_j| < eps - diam`` for the box
  midpoints ``r``. Paths are genuine ``eps``-chains among midpoints, so they
  are positive witnesses.

Block graphs and graphs over explicit finite point sets are ``exact``: the
edge relation *is* the chain relation and one graph decides both ways.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import graphs
from .errors import (
    ModeError,
    NoPathError,
    ParameterError,
    PreconditionError,
    ResolutionError,
    SizeError,
)
from .numeric import Interval, PLMap, format_rational
from .pseudo_orbit import PseudoOrbit, is_eps_pseudo_orbit
from .symbolic import BlockGraph, ShiftPresentation, eps_for_depth, restrict_blocks

MODES = ("inner", "outer", "exact")


@dataclass(frozen=True)
class BoxPartition:
    """Closed boxes ``[cuts[i], cuts[i+1]]`` covering ``[cuts[0], cuts[-1]]``."""

    cuts: tuple

    def __post_init__(self):
        cuts = tuple(Fraction(c) for c in self.cuts)
        if len(cuts) < 2 or any(a >= b for a, b in zip(cuts, cuts[1:])):
            raise ParameterError("cut points must be strictly ascending, at least two")
        object.__setattr__(self, "cuts", cuts)

    @classmethod
    def uniform(cls, domain: Interval, n: int) -> "BoxPartition":
        if n < 1:
            raise ParameterError("need at least one box")
        w = domain.diameter / n
        return cls(tuple(domain.lo + i * w for i in range(n)) + (domain.hi,))

    @classmethod
    def for_eps(cls, domain: Interval, eps, ratio: int = 4) -> "BoxPartition":
        """Uniform partition with box diameter at most ``eps / ratio``."""
        eps = Fraction(eps)
        n = math.ceil(domain.diameter * ratio / eps)
        return cls.uniform(domain, n)

    @property
    def n(self) -> int:
        return len(self.cuts) - 1

    @property
    def domain(self) -> Interval:
        return Interval(self.cuts[0], self.cuts[-1])

    @property
    def diam(self) -> Fraction:
        return max(b - a for a, b in zip(self.cuts, self.cuts[1:]))

    def box(self, i: int) -> Interval:
        return Interval(self.cuts[i], self.cuts[i + 1])

    def rep(self, i: int) -> Fraction:
        return (self.cuts[i] + self.cuts[i + 1]) / 2

    def locate(self, x) -> int:
        """Index of the box holding ``x``; a shared cut goes to the lower box."""
        x = Fraction(x)
        if not self.cuts[0] <= x <= self.cuts[-1]:
            raise ParameterError(f"{x} outside the partitioned domain")
        return max(0, bisect_left(self.cuts, x) - 1)

    def meeting(self, lo, hi) -> range:
        """Indices of boxes whose closed span meets the open interval ``(lo, hi)``."""
        first = max(0, bisect_right(self.cuts, lo) - 1)
        if first < self.n and self.cuts[first + 1] <= lo:
            first += 1
        last = min(self.n - 1, bisect_left(self.cuts, hi) - 1)
        return range(first, last + 1)

    def boxes_of(self, points: Iterable) -> frozenset:
        return frozenset(self.locate(p) for p in points)


@dataclass(frozen=True, eq=False)
class TransitionGraph:
    system: object
    mode: str
    eps: Fraction
    vertices: tuple
    adj: dict = field(repr=False)
    reps: dict = field(repr=False)
    slack: Fraction = Fraction(0)
    partition: BoxPartition | None = None
    k: int | None = None

    def edges(self) -> list:
        return [(u, v) for u in self.vertices for v in self.adj[u]]

    def has_edge(self, u, v) -> bool:
        return v in self.adj[u]

    def induced(self, S=None) -> dict:
        if S is None:
            return self.adj
        return graphs.induced(self.adj, S)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "epsilon": format_rational(self.eps),
            "vertices": [_label(v) for v in self.vertices],
            "edges": [[_label(u), _label(v)] for u, v in self.edges()],
        }

    def to_dot(self, S=None) -> str:
        keep = set(self.vertices if S is None else S)
        lines = [f'digraph "{self.mode} eps={format_rational(self.eps)}" {{']
        for v in self.vertices:
            if v in keep:
                lines.append(f'  "{_label(v)}";')
        for u, v in self.edges():
            if u in keep and v in keep:
                lines.append(f'  "{_label(u)}" -> "{_label(v)}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _label(v):
    return v if isinstance(v, (str, int)) else str(v)


def build_eps_graph(system, resolution, eps=None, mode: str = "outer") -> TransitionGraph:
    """Finite ``eps``-step graph of ``system`` at the given resolution.

    ``resolution`` is a :class:`BoxPartition` for PL maps, and a block depth
    or a prebuilt :class:`BlockGraph` for shifts. Shift graphs are always
    ``exact`` with tolerance :func:`eps_for_depth`; an ``eps`` that disagrees
    with it is rejected.
    """
    if mode not in MODES:
        raise ParameterError(f"mode must be one of {MODES}")
    if isinstance(system, ShiftPresentation):
        bg = resolution if isinstance(resolution, BlockGraph) else system.block_graph(int(resolution))
        tol = eps_for_depth(bg.k)
        if eps is not None and Fraction(eps) != tol:
            raise ResolutionError(f"depth-{bg.k} block graphs decide chains at eps={tol}, not {eps}")
        adj = {u: tuple(vs) for u, vs in bg.adjacency().items()}
        return TransitionGraph(system, "exact", tol, bg.vertices, adj, {v: v for v in bg.vertices}, k=bg.k)

    if not isinstance(system, PLMap) or not isinstance(resolution, BoxPartition):
        raise ParameterError("PL maps need a BoxPartition resolution")
    if mode == "exact":
        raise ModeError("box graphs are inner or outer; use point_graph for exact finite sets")
    eps = Fraction(eps)
    if eps <= 0:
        raise ParameterError("epsilon must be positive")
    part = resolution
    if not system.domain.contains_interval(part.domain):
        raise ParameterError("partition extends past the map's domain")
    diam = part.diam
    reps = {i: part.rep(i) for i in range(part.n)}
    adj = {}
    if mode == "outer":
        for i in range(part.n):
            img = system.image_interval(part.box(i))
            adj[i] = tuple(part.meeting(img.lo - eps, img.hi + eps))
    else:
        if eps <= diam:
            raise ResolutionError(f"inner graph is vacuous: eps={eps} <= box diameter {diam}")
        slack = eps - diam
        mids = [reps[i] for i in range(part.n)]
        for i in range(part.n):
            y = system.eval(reps[i])
            lo = bisect_right(mids, y - slack)
            hi = bisect_left(mids, y + slack)
            adj[i] = tuple(range(lo, hi))
    return TransitionGraph(system, mode, eps, tuple(range(part.n)), adj, reps, slack=diam, partition=part)


def point_graph(f: PLMap, points: Iterable, eps) -> TransitionGraph:
    """Exact ``eps``-step graph on a finite set of rationals (``p -> q`` iff ``|f(p) - q| < eps``)."""
    eps = Fraction(eps)
    pts = tuple(sorted({Fraction(p) for p in points}))
    adj = {}
    for p in pts:
        y = f.eval(p)
        adj[p] = tuple(q for q in pts if abs(y - q) < eps)
    return TransitionGraph(f, "exact", eps, pts, adj, {p: p for p in pts})


def _chain_transitive(adj: dict) -> bool:
    # strong connectivity plus a cycle through every vertex (covers x = y, m > 0)
    return graphs.is_strongly_connected(adj) and len(graphs.on_cycle(adj)) == len(adj)


@dataclass(frozen=True)
class ICTVerdict:
    verdict: str  # "yes" | "no" | "unknown"
    graph: TransitionGraph = field(repr=False)
    S: frozenset = field(repr=False)
    reason: str = ""
    components: tuple = ()

    @property
    def eps(self) -> Fraction:
        return self.graph.eps

    def chain(self, u, v) -> "ChainCertificate":
        if self.verdict != "yes":
            raise ModeError("chains are only issued for certified sets")
        return chain(self.graph, u, v, self.S)

    def to_json(self, certificates: Sequence = ()) -> dict:
        out = {
            "verdict": self.verdict,
            "epsilon": format_rational(self.graph.eps),
            "mode": self.graph.mode,
            "size": len(self.S),
            "reason": self.reason,
            "certificates": [c.to_json() for c in certificates],
        }
        if self.components:
            out["components"] = [[_label(v) for v in comp] for comp in self.components]
        return out


def is_ict(graph: TransitionGraph, S=None, outer: TransitionGraph | None = None) -> ICTVerdict:
    """Two-sided chain-transitivity verdict for the vertex set ``S``.

    ``graph`` supplies positive evidence and must be inner or exact. An
    optional outer graph over the same vertices can refute.
    """
    if graph.mode == "outer":
        raise ModeError("a positive verdict needs an inner or exact graph; pass outer graphs as outer=")
    if outer is not None and outer.mode != "outer":
        raise ModeError(f"outer= expects an outer graph, got {outer.mode}")
    S = frozenset(graph.vertices if S is None else S)
    if not S:
        raise ParameterError("the candidate set must be nonempty")
    unknown = S - set(graph.vertices)
    if unknown:
        raise ParameterError(f"vertices not in graph: {sorted(map(str, unknown))[:5]}")
    sub = graph.induced(S)
    if _chain_transitive(sub):
        return ICTVerdict("yes", graph, S, "induced graph strongly connected, every vertex on a cycle")
    refuter = graph if graph.mode == "exact" else outer
    if refuter is not None:
        rsub = refuter.induced(S)
        if not _chain_transitive(rsub):
            comps = tuple(tuple(sorted(c, key=str)) for c in graphs.tarjan_scc(rsub))
            return ICTVerdict(
                "no", refuter, S,
                f"{refuter.mode} graph has {len(comps)} components inside the set", comps,
            )
    return ICTVerdict("unknown", graph, S, "inner graph not chain transitive, no refutation available")


@dataclass(frozen=True)
class ChainCertificate:
    eps: Fraction
    states: tuple
    vertices: tuple

    def to_json(self) -> dict:
        states = [s if isinstance(s, str) else format_rational(s) for s in self.states]
        return {"epsilon": format_rational(self.eps), "states": states,
                "vertices": [_label(v) for v in self.vertices]}


def _block_states(graph: TransitionGraph, path: list) -> list[str]:
    # each state is the (k+1)-block of its edge; the last borrows any successor
    states = [u + v[-1] for u, v in zip(path, path[1:])]
    succ = graph.adj[path[-1]]
    if succ:
        states.append(path[-1] + succ[0][-1])
    else:
        states.append(graph.system.extend(path[-1], 1))
    return states


def chain(graph: TransitionGraph, u, v, S=None) -> ChainCertificate:
    """Shortest chain from ``u`` to ``v`` (at least one step) inside ``S``."""
    if graph.mode == "outer":
        raise ModeError("outer graphs over-approximate; chains need an inner or exact graph")
    adj = graph.induced(S)
    if u not in adj or v not in adj:
        raise NoPathError(f"{u!r} or {v!r} not in the vertex set")
    path = graphs.shortest_path(adj, u, v, min_len=1)
    if path is None:
        raise NoPathError(f"no path from {_label(u)} to {_label(v)}")
    if isinstance(graph.system, ShiftPresentation):
        states = _block_states(graph, path)
    else:
        states = [graph.reps[w] for w in path]
    po = PseudoOrbit(graph.system, tuple(states))
    if not is_eps_pseudo_orbit(po, graph.eps):
        raise AssertionError("internal error: emitted chain fails its own tolerance")
    return ChainCertificate(graph.eps, po.states, tuple(path))


# -- finite models -----------------------------------------------------------

WI_GUARD = 20


@dataclass(frozen=True)
class FiniteModel:
    """A finite metric space ``{0, ..., n-1}`` with a self-map."""

    fmap: tuple
    metric: tuple

    def __post_init__(self):
        n = len(self.fmap)
        if n == 0:
            raise ParameterError("empty model")
        if any(not 0 <= y < n for y in self.fmap):
            raise ParameterError("map leaves the point set")
        d = tuple(tuple(Fraction(x) for x in row) for row in self.metric)
        if len(d) != n or any(len(row) != n for row in d):
            raise ParameterError("metric table has the wrong shape")
        for i in range(n):
            for j in range(n):
                if (d[i][j] == 0) != (i == j) or d[i][j] < 0 or d[i][j] != d[j][i]:
                    raise ParameterError(f"metric axioms fail at ({i}, {j})")
        for i, j, k in itertools.product(range(n), repeat=3):
            if d[i][k] > d[i][j] + d[j][k]:
                raise ParameterError(f"triangle inequality fails at ({i}, {j}, {k})")
        object.__setattr__(self, "fmap", tuple(self.fmap))
        object.__setattr__(self, "metric", d)

    @property
    def n(self) -> int:
        return len(self.fmap)

    def min_distance(self) -> Fraction | None:
        pos = [x for row in self.metric for x in row if x > 0]
        return min(pos) if pos else None

    def to_json(self) -> dict:
        return {"map": list(self.fmap), "metric": [[format_rational(x) for x in row] for row in self.metric]}


def random_model(n: int, rng) -> FiniteModel:
    """Random self-map with an L1 metric on distinct random lattice points."""
    pts = set()
    while len(pts) < n:
        pts.add((rng.randrange(4 * n), rng.randrange(4 * n)))
    pts = list(pts)
    d = [[Fraction(abs(a[0] - b[0]) + abs(a[1] - b[1])) for b in pts] for a in pts]
    return FiniteModel(tuple(rng.randrange(n) for _ in range(n)), tuple(map(tuple, d)))


def _subset(model: FiniteModel, lam) -> list[int]:
    lam = sorted(set(lam))
    if not lam:
        raise ParameterError("the candidate set must be nonempty")
    if any(not 0 <= x < model.n for x in lam):
        raise ParameterError("candidate set leaves the model")
    if len(lam) > WI_GUARD:
        raise SizeError(f"|set| = {len(lam)} exceeds the enumeration guard {WI_GUARD}")
    return lam


def wi_bruteforce(model: FiniteModel, lam) -> bool:
    """Every nonempty proper ``M`` of ``lam`` meets ``f(lam \\ M)`` (closures are trivial here)."""
    pts = _subset(model, lam)
    m = len(pts)
    img = [model.fmap[p] for p in pts]
    pos = {p: i for i, p in enumerate(pts)}
    # bit i of img_mask[i] marks f(pts[i]) when it lies inside lam
    img_bit = [1 << pos[y] if y in pos else 0 for y in img]
    full = (1 << m) - 1
    for M in range(1, full):
        hit = 0
        rest = full & ~M
        while rest:
            low = rest & -rest
            hit |= img_bit[low.bit_length() - 1]
            rest ^= low
        if not hit & M:
            return False
    return True


def ict_finite(model: FiniteModel, lam) -> bool:
    """Chain transitivity below the model's smallest positive distance.

    At such ``eps`` a chain inside ``lam`` is an exact orbit segment, so this
    is strong connectivity of ``x -> f(x)`` restricted to ``lam`` with every
    point on a cycle.
    """
    pts = _subset(model, lam)
    keep = set(pts)
    adj = {p: [model.fmap[p]] if model.fmap[p] in keep else [] for p in pts}
    return _chain_transitive(adj)


def invariance_check(obj, S) -> bool:
    """``f(S) = S`` on a finite model; on a graph, the in/out-edge necessary condition."""
    S = set(S)
    if isinstance(obj, FiniteModel):
        return {obj.fmap[x] for x in S} == S
    sub = obj.induced(S)
    has_in = {v for vs in sub.values() for v in vs}
    return all(sub[u] for u in S) and S <= has_in


def attractor_free_check(graph: TransitionGraph, S=None) -> bool:
    """No nonempty proper subset of ``S`` is absorbing in the induced graph."""
    if graph.mode == "inner":
        raise ModeError("absorbing subsets must be read off an outer or exact graph")
    S = frozenset(graph.vertices if S is None else S)
    if not S:
        raise ParameterError("the candidate set must be nonempty")
    terminal = graphs.terminal_components(graph.induced(S))
    return all(c == S for c in terminal)


def chain_recurrent_vertices(graph: TransitionGraph, S=None) -> set:
    return graphs.on_cycle(graph.induced(S))


def has_incoming_from_complement(adj: dict) -> bool:
    """Brute force: every nonempty proper vertex subset is entered from outside it."""
    verts = list(adj)
    n = len(verts)
    if n > WI_GUARD:
        raise SizeError("graph too large for subset enumeration")
    idx = {v: i for i, v in enumerate(verts)}
    pred = [0] * n
    for u in verts:
        for v in adj[u]:
            pred[idx[v]] |= 1 << idx[u]
    full = (1 << n) - 1
    for T in range(1, full):
        outside = full & ~T
        rest = T
        while rest:
            low = rest & -rest
            if pred[low.bit_length() - 1] & outside:
                break
            rest ^= low
        else:
            return False
    return True


# -- asymptotic pseudo-orbits --------------------------------------------------


@dataclass(frozen=True)
class AsymptoticPrefix:
    """Finite prefix of an asymptotic pseudo-orbit built from stage tours.

    Stage ``k`` occupies ``states[stage_starts[k-1]:stage_starts[k]]`` and its
    steps (including the hand-off into stage ``k+1``) obey ``stage_eps[k-1]``.
    """

    orbit: PseudoOrbit
    schedule: tuple
    stage_starts: tuple
    stage_eps: tuple
    resolutions: tuple
    targets: tuple

    @property
    def states(self):
        return self.orbit.states

    def to_json(self) -> dict:
        out = self.orbit.to_json(system_ref="inline")
        out["schedule"] = [format_rational(s) for s in self.schedule]
        out["stage_starts"] = list(self.stage_starts)
        return out


def dyadic(k: int) -> Fraction:
    return Fraction(1, 2**k)


def _tour(adj: dict, start, targets) -> list:
    """Walk from ``start`` through every vertex of ``targets`` (sorted order)."""
    walk = [start]
    seen = {start}
    for t in sorted(targets, key=str):
        if t in seen:
            continue
        path = graphs.shortest_path(adj, walk[-1], t, min_len=1)
        if path is None:
            raise PreconditionError(f"no chain to {_label(t)} although the set was certified")
        walk.extend(path[1:])
        seen.update(path)
    return walk


def build_asymptotic_pseudo_orbit(system, lam=None, K: int = 6, resolution=None) -> AsymptoticPrefix:
    """Concatenate ``2**-k``-chain tours of ``lam`` for ``k = 1..K``.

    For a PL map, ``lam`` is a finite set of rationals and ``resolution(k)``
    returns the partition used at stage ``k`` (default: uniform, box diameter
    ``2**-k / 4``). For a shift, ``lam`` is a sub-presentation (default: the
    whole shift) and stage ``k`` walks its ``(k+1)``-block graph.
    Raises :class:`PreconditionError` unless every stage is certified.
    """
    if K < 1:
        raise ParameterError("need at least one stage")
    if isinstance(system, ShiftPresentation):
        return _asymptotic_shift(system, system if lam is None else lam, K)
    return _asymptotic_interval(system, lam, K, resolution)


def _asymptotic_interval(f: PLMap, lam, K, resolution):
    pts = sorted({Fraction(p) for p in lam})
    if not pts:
        raise ParameterError("the candidate set must be nonempty")
    if resolution is None:
        def resolution(k):
            return BoxPartition.for_eps(f.domain, dyadic(k))
    states, sched, starts, epss, parts, targets = [], [], [], [], [], []
    for k in range(1, K + 1):
        eps = dyadic(k)
        part = resolution(k)
        inner = build_eps_graph(f, part, eps, "inner")
        S = part.boxes_of(pts)
        verdict = is_ict(inner, S)
        if verdict.verdict != "yes":
            outer = build_eps_graph(f, part, eps, "outer")
            verdict = is_ict(inner, S, outer=outer)
            raise PreconditionError(f"stage {k} (eps={eps}): set not certified, verdict {verdict.verdict}")
        adj = inner.induced(S)
        if not states:
            start = min(S)
        else:
            y = f.eval(states[-1])
            start = min(S, key=lambda v: (abs(y - part.rep(v)), v))
            sched.append(epss[-1])
        starts.append(len(states))
        walk = _tour(adj, start, S)
        states.extend(part.rep(v) for v in walk)
        sched.extend([eps] * (len(walk) - 1))
        epss.append(eps)
        parts.append(part)
        targets.append(S)
    return AsymptoticPrefix(PseudoOrbit(f, tuple(states)), tuple(sched), tuple(starts),
                            tuple(epss), tuple(parts), tuple(targets))


def _asymptotic_shift(p: ShiftPresentation, lam: ShiftPresentation, K):
    states, sched, starts, epss, depths, targets = [], [], [], [], [], []
    pending = None
    for k in range(1, K + 1):
        eps = dyadic(k)
        d = k + 1
        bg = restrict_blocks(p, lam, d)
        g = build_eps_graph(lam, bg)
        verdict = is_ict(g)
        if verdict.verdict != "yes":
            raise PreconditionError(f"stage {k} (depth {d}): subshift not certified, verdict {verdict.verdict}")
        start = bg.vertices[0] if pending is None else pending
        if pending is not None:
            sched.append(epss[-1])
        starts.append(len(states))
        walk = _tour(g.adj, start, bg.vertices)
        states.extend(u + v[-1] for u, v in zip(walk, walk[1:]))
        # last state: extend inside lam and hand the overlap to the next stage
        ext = lam.extend(walk[-1], 2)
        states.append(ext[: d + 1])
        pending = ext[1:]
        sched.extend([eps] * (len(walk) - 1))
        epss.append(eps)
        depths.append(k)
        targets.append(lam.allowed_blocks(k))
    return AsymptoticPrefix(PseudoOrbit(lam, tuple(states)), tuple(sched), tuple(starts),
                            tuple(epss), tuple(depths), tuple(targets))
