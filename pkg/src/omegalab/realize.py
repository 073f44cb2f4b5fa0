"""Realising chain transitive sets as omega-limit sets, and sampling omega-limits.

Two constructions are provided. For a subshift of finite type the point is a
symbol stream that tours every allowed block over and over. For an
expanding PL map and a finite set ``S`` the point is delivered as a nest of
rational intervals: stage ``k`` commits the orbit to an h-shadow of a
``2**-k`` chain tour of ``S``, and because the shadow hits the tour's last
point exactly, the next stage starts where the previous one stopped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import graphs
from .chains import BoxPartition, _tour, build_eps_graph, dyadic, is_ict, point_graph
from .errors import ParameterError, PrecisionError, PreconditionError
from .numeric import Interval, PLMap, check_budget, exact_map, format_rational, h_set, tent
from .shadowing import delta_for_eps, pullback_nest
from .symbolic import (
    ShiftPresentation,
    golden_mean,
    restrict_blocks,
    sofic_example,
    sofic_example_lambda,
    word_constraint_empty,
)


def _cell(resolution, state):
    if isinstance(resolution, BoxPartition):
        return resolution.locate(state)
    k = int(resolution)
    if len(state) < k:
        raise ParameterError(f"state {state!r} shorter than block depth {k}")
    return state[:k]


def omega_of_sequence(states, resolution, burn: int = 0) -> frozenset:
    """Boxes (or depth-``k`` blocks) visited by ``states[burn:]``."""
    return frozenset(_cell(resolution, s) for s in list(states)[burn:])


def omega_approx(system, x, burn: int, keep: int, resolution, budget_bits: int | None = None) -> frozenset:
    """Cells hit by ``f^n(x)`` for ``burn <= n < burn + keep``.

    A finite window can both miss parts of the true omega-limit set (slow
    recurrence) and include transients that have not died out yet; treat the
    result as a sample, not a bound.
    """
    if burn < 0 or keep < 1:
        raise ParameterError("need burn >= 0 and keep >= 1")
    if isinstance(system, ShiftPresentation):
        k = int(resolution)
        need = burn + keep - 1 + k
        word = x.prefix(need) if isinstance(x, SymbolStream) else x
        if len(word) < need:
            raise ParameterError(f"need a prefix of length {need}, got {len(word)}")
        return frozenset(word[n:n + k] for n in range(burn, burn + keep))
    y = Fraction(x)
    cells = set()
    for n in range(burn + keep):
        if n >= burn:
            cells.add(resolution.locate(y))
        y = check_budget(system.eval(y), budget_bits)
    return frozenset(cells)


# -- symbol streams ------------------------------------------------------------


@dataclass
class ScheduleEntry:
    k: int
    n_k: int
    gap_bound: int

    def to_json(self):
        return {"k": self.k, "N_k": self.n_k, "gap_bound": self.gap_bound}


class SymbolStream:
    """A lazily extended point of a subshift of finite type.

    The stream walks the depth-``D`` block graph of ``lam`` and, in rounds,
    visits every ``k``-block for ``k = 1, ..., k_max``. Each block reappears
    in every round, so all of them recur forever.
    """

    def __init__(self, lam: ShiftPresentation, k_max: int):
        self.lam = lam
        self.k_max = k_max
        self.depth = max(k_max, lam.memory)
        bg = lam.block_graph(self.depth)
        self._adj = bg.adjacency()
        self._targets = [sorted(lam.allowed_blocks(k)) for k in range(1, k_max + 1)]
        self._word = bg.vertices[0]
        self._vertex = bg.vertices[0]
        self._round_lengths = []
        n_vertices = len(bg.vertices)
        # each target is reached by a shortest path, so at most |V| symbols
        self.round_bound = sum(len(t) for t in self._targets) * n_vertices
        self.schedule = []
        self._run_round(record=True)

    def _goto(self, block: str):
        path = graphs.nearest_matching(self._adj, self._vertex, lambda v: v.startswith(block), min_len=1)
        if path is None:
            raise PreconditionError(f"block {block!r} unreachable; set is not chain transitive")
        self._word += "".join(v[-1] for v in path[1:])
        self._vertex = path[-1]

    def _run_round(self, record=False):
        start = len(self._word)
        for k, blocks in enumerate(self._targets, start=1):
            for b in blocks:
                self._goto(b)
            if record:
                self.schedule.append(ScheduleEntry(k, len(self._word), 2 * self.round_bound + self.depth))
        self._round_lengths.append(len(self._word) - start)

    def prefix(self, n: int) -> str:
        while len(self._word) < n:
            self._run_round()
        return self._word[:n]

    def __len__(self):
        return len(self._word)

    def to_json(self, n: int) -> dict:
        return {"kind": "stream", "prefix": self.prefix(n),
                "schedule": [e.to_json() for e in self.schedule]}


def realize_sft(lam: ShiftPresentation, k_max: int, ambient: ShiftPresentation | None = None) -> SymbolStream:
    """A point whose omega-limit set is ``lam`` at every depth up to ``k_max``.

    ``lam``'s block graphs must be certified chain transitive at every depth
    ``<= k_max`` (inside ``ambient`` when given).
    """
    if k_max < 1:
        raise ParameterError("k_max must be at least 1")
    amb = lam if ambient is None else ambient
    for k in range(1, k_max + 1):
        g = build_eps_graph(lam, restrict_blocks(amb, lam, k))
        verdict = is_ict(g)
        if verdict.verdict != "yes":
            raise PreconditionError(f"depth {k}: chain transitivity verdict is {verdict.verdict}")
    if not lam.is_sft:
        raise PreconditionError("stream construction needs a shift of finite type")
    return SymbolStream(lam, k_max)


# -- interval nests ------------------------------------------------------------


@dataclass
class Stage:
    k: int
    eps: Fraction
    delta: Fraction
    start: int
    end: int


class IntervalNest:
    """Starting points whose orbits follow every committed stage.

    ``nest[k]`` is the interval after ``k`` stages; ``nest[0]`` only pins the
    first point to within ``2**-1``.
    """

    def __init__(self, f: PLMap, S: Iterable):
        self.f = f
        self.S = tuple(sorted({Fraction(s) for s in S}))
        if not self.S:
            raise ParameterError("the set to realise must be nonempty")
        if not all(s in f.domain for s in self.S):
            raise ParameterError("set leaves the domain")
        self.xs = [self.S[0]]
        self.stages: list[Stage] = []
        self.nest = [Interval.ball(self.S[0], dyadic(1)).intersect(f.domain)]

    def radii(self, upto: int) -> list[Fraction]:
        r = []
        for st in self.stages[:upto]:
            r.extend([st.eps] * (st.end - st.start))
        r.append(dyadic(upto + 1))
        return r

    def extend(self) -> Interval:
        """Commit one more stage and return the refined interval."""
        k = len(self.stages) + 1
        eps = dyadic(k)
        delta = delta_for_eps(self.f, eps)
        g = point_graph(self.f, self.S, delta)
        verdict = is_ict(g)
        if verdict.verdict != "yes":
            raise PreconditionError(
                f"stage {k}: no {delta}-chains inside the set (verdict {verdict.verdict})")
        walk = _tour(g.adj, self.xs[-1], self.S)
        if len(walk) == 1:
            walk = graphs.shortest_path(g.adj, walk[0], walk[0], min_len=1)
        start = len(self.xs) - 1
        self.xs.extend(walk[1:])
        self.stages.append(Stage(k, eps, delta, start, len(self.xs) - 1))
        nest = pullback_nest(self.f, self.xs, self.radii(k))
        self.nest.append(nest[0])
        return nest[0]

    @property
    def core(self) -> Interval:
        return self.nest[-1]

    def verify(self) -> dict:
        """Re-check nesting, contraction and every stage's visits by forward iteration."""
        E0 = self.nest[0]
        nested = all(b.lo >= a.lo and b.hi <= a.hi and b != a for a, b in zip(self.nest, self.nest[1:]))
        contraction = all(E.diameter <= E0.diameter / 2**k for k, E in enumerate(self.nest))
        images = [self.core]
        for _ in range(len(self.xs) - 1):
            images.append(self.f.image_interval(images[-1]))
        visits = {}
        for st in self.stages:
            ok = True
            for s in self.S:
                ok &= any(
                    self.xs[i] == s and abs(images[i].lo - s) < st.eps and abs(images[i].hi - s) < st.eps
                    for i in range(st.start, st.end + 1)
                )
            visits[st.k] = ok
        return {"nested": nested, "contraction": contraction, "visits": visits,
                "nonempty": all(E.diameter >= 0 for E in self.nest)}

    def to_json(self) -> dict:
        return {
            "kind": "nest",
            "intervals": [E.to_json() for E in self.nest],
            "committed": [format_rational(x) for x in self.xs],
            "schedule": [{"k": st.k, "N_k": st.start, "gap_bound": st.end - st.start,
                          "epsilon": format_rational(st.eps)} for st in self.stages],
        }


def realize_tent2(S: Iterable, K: int, precision=None, f: PLMap | None = None) -> IntervalNest:
    """Interval nest of starting points whose orbits visit ``S`` at every scale ``2**-k``, ``k <= K``."""
    if K < 1:
        raise ParameterError("need at least one stage")
    nest = IntervalNest(tent(2) if f is None else f, S)
    for _ in range(K):
        nest.extend()
    if precision is not None and nest.core.diameter > Fraction(precision):
        raise PrecisionError(f"diameter {nest.core.diameter} above target {precision} after {K} stages")
    return nest


# -- obstructions --------------------------------------------------------------


@dataclass
class RealizabilityReport:
    example: str
    verdict: str  # "NotRealizable" | "Realizable"
    checks: dict = field(default_factory=dict)
    obstruction: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"example": self.example, "verdict": self.verdict,
                "checks": self.checks, "obstruction": self.obstruction}


def nonrealizability_report(example: str, max_depth: int = 6, truncation: int = 20) -> RealizabilityReport:
    if example == "sofic_ICT":
        X, lam = sofic_example(), sofic_example_lambda()
        checks = {}
        for k in range(1, max_depth + 1):
            g = build_eps_graph(lam, restrict_blocks(X, lam, k))
            checks[f"ict_depth_{k}"] = is_ict(g).verdict == "yes"
        cert = word_constraint_empty(X, {"b", "c"}, {"d"})
        checks["bc_without_d_unsat"] = not cert.sat
        verdict = "NotRealizable" if all(checks.values()) else "Inconclusive"
        return RealizabilityReport(example, verdict, checks, {
            "kind": "word-constraint",
            "statement": "every word of X containing both b and c contains d",
            "certificate": cert.to_json(),
        })
    if example == "exact_map_H":
        f = exact_map()
        left = f.image_interval(Interval(0, Fraction(7, 4)))
        right = f.image_interval(Interval(Fraction(7, 4), 2))
        H = h_set(truncation)
        checks = {
            "image_0_7/4": left == Interval(0, 2),
            "image_7/4_2": right == Interval(-2, 0),
            "H_misses_(7/4,2]": not any(Fraction(7, 4) < h <= 2 for h in H),
        }
        verdict = "NotRealizable" if all(checks.values()) else "Inconclusive"
        return RealizabilityReport(example, verdict, checks, {
            "kind": "forced-visit",
            "statement": "orbits moving from (0,2] to [-2,0) pass through (7/4,2], which misses H",
            "images": {"[0,7/4]": left.to_json(), "[7/4,2]": right.to_json()},
        })
    if example == "golden_mean":
        stream = realize_sft(golden_mean(), max_depth)
        return RealizabilityReport(example, "Realizable", {"realize_sft": True},
                                   {"schedule": [e.to_json() for e in stream.schedule]})
    raise ParameterError(f"unknown example {example!r}")
