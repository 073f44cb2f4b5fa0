"""One-sided shift spaces given by forbidden words or labeled graphs.

Both kinds are normalised to a labeled directed graph. Only forward paths
matter for one-sided shifts, so vertices with no outgoing edge are pruned
until every remaining path extends forever; the language is then exactly
the set of path labels.

Symbols are single characters and words are plain strings.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable

from .errors import NotSubsystemError, ParameterError, ParseError, ResourceError

DEFAULT_BLOCK_CAP = 1 << 20


def cylinder_distance(x: str, y: str) -> tuple[Fraction, bool]:
    """Distance ``2**-i`` with ``i`` the first index where ``x`` and ``y`` differ.

    Only the common prefix is known, so when the words agree on all of it the
    returned value is an upper bound and the flag is ``False``.
    """
    n = min(len(x), len(y))
    for i in range(n):
        if x[i] != y[i]:
            return Fraction(1, 2**i), True
    return Fraction(1, 2**n), False


def eps_for_depth(k: int) -> Fraction:
    """Chain tolerance matched exactly by ``k``-block paths.

    A sequence of points is a ``2**-(k-1)``-pseudo-orbit iff consecutive
    points agree on ``k`` symbols after shifting, i.e. iff their
    ``(k+1)``-prefixes walk the ``k``-block graph.
    """
    if k < 1:
        raise ParameterError("block depth must be at least 1")
    return Fraction(1, 2 ** (k - 1))


def depth_for_eps(eps) -> int:
    """Smallest block depth whose paths are ``eps``-pseudo-orbits."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ParameterError("epsilon must be positive")
    k = 1
    while eps_for_depth(k) > eps:
        k += 1
    return k


class ShiftPresentation:
    """Labeled-graph presentation of a one-sided shift.

    ``edges`` holds ``(source, target, label)`` triples. Use :func:`sft` or
    :func:`sofic` rather than calling this directly.
    """

    def __init__(self, kind, alphabet, vertices, edges, forbidden=(), block_cap=DEFAULT_BLOCK_CAP):
        self.kind = kind
        self.alphabet = tuple(alphabet)
        self.forbidden = tuple(forbidden)
        self.block_cap = block_cap
        if not self.alphabet:
            raise ParameterError("alphabet must be nonempty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ParameterError("alphabet symbols must be distinct")
        if any(len(s) != 1 for s in self.alphabet):
            raise ParameterError("symbols must be single characters")
        alpha = set(self.alphabet)
        edges = [(u, v, a) for u, v, a in edges]
        for u, v, a in edges:
            if a not in alpha:
                raise ParameterError(f"edge label {a!r} not in alphabet")
        verts = set(vertices)
        # drop vertices with no way forward, repeatedly
        while True:
            live = {u for u, v, _ in edges if v in verts and u in verts}
            if live == verts:
                break
            verts = live
        if not verts:
            raise ParameterError("presentation is empty after pruning stranded vertices")
        self.vertices = tuple(sorted(verts))
        self.edges = tuple(sorted((u, v, a) for u, v, a in edges if u in verts and v in verts))
        self._out: dict = {u: [] for u in self.vertices}
        for u, v, a in self.edges:
            self._out[u].append((a, v))
        for u in self._out:
            self._out[u].sort()
        self._blocks: dict[int, frozenset] = {}

    @property
    def is_sft(self) -> bool:
        return self.kind == "sft"

    @property
    def memory(self) -> int:
        """Longest forbidden word length minus one (SFTs only)."""
        return max((len(w) for w in self.forbidden), default=1) - 1

    def out_edges(self, u):
        return self._out[u]

    def _check_cap(self, k):
        if len(self.alphabet) ** k > self.block_cap:
            raise ResourceError(f"|alphabet|^{k} exceeds block cap {self.block_cap}")

    def allowed_blocks(self, k: int) -> frozenset:
        if k < 1:
            raise ParameterError("block length must be at least 1")
        if k in self._blocks:
            return self._blocks[k]
        self._check_cap(k)
        # word -> set of vertices where a path reading it may end
        frontier = {"": set(self.vertices)}
        for _ in range(k):
            nxt: dict[str, set] = {}
            for w, ends in frontier.items():
                for u in ends:
                    for a, v in self._out[u]:
                        nxt.setdefault(w + a, set()).add(v)
            frontier = nxt
        blocks = frozenset(frontier)
        self._blocks[k] = blocks
        return blocks

    def is_allowed(self, w: str) -> bool:
        return w == "" or w in self.allowed_blocks(len(w))

    def extend(self, w: str, n: int) -> str:
        """Append ``n`` symbols to an allowed word, greedily smallest-first."""
        ends = self._end_vertices(w)
        if not ends:
            raise NotSubsystemError(f"{w!r} is not in the language")
        for _ in range(n):
            a = min(a for u in ends for a, _ in self._out[u])
            ends = {v for u in ends for b, v in self._out[u] if b == a}
            w += a
        return w

    def _end_vertices(self, w: str) -> set:
        ends = set(self.vertices)
        for a in w:
            ends = {v for u in ends for b, v in self._out[u] if b == a}
            if not ends:
                break
        return ends

    def block_graph(self, k: int) -> "BlockGraph":
        return BlockGraph.from_language(k, self.allowed_blocks(k), self.allowed_blocks(k + 1))

    def to_json(self) -> dict:
        if self.kind == "sft":
            return {"kind": "sft", "alphabet": list(self.alphabet), "forbidden": list(self.forbidden)}
        return {
            "kind": "sofic",
            "alphabet": list(self.alphabet),
            "vertices": list(self.vertices),
            "edges": [{"from": u, "to": v, "label": a} for u, v, a in self.edges],
        }

    def __repr__(self):
        return f"ShiftPresentation(kind={self.kind!r}, alphabet={''.join(self.alphabet)!r})"


def sft(alphabet: Iterable[str], forbidden: Iterable[str] = (), **kw) -> ShiftPresentation:
    """Shift of finite type avoiding every word in ``forbidden``."""
    alphabet = tuple(alphabet)
    forbidden = tuple(forbidden)
    alpha = set(alphabet)
    for w in forbidden:
        if not w or set(w) - alpha:
            raise ParameterError(f"forbidden word {w!r} uses symbols outside the alphabet")
    m = max(1, max((len(w) for w in forbidden), default=1) - 1)

    def clean(word):
        return not any(f in word for f in forbidden)

    verts = ["".join(t) for t in product(alphabet, repeat=m) if clean("".join(t))]
    edges = []
    for u in verts:
        for a in alphabet:
            w = u + a
            if clean(w):
                edges.append((u, w[1:], u[0]))
    return ShiftPresentation("sft", alphabet, verts, edges, forbidden=forbidden, **kw)


def full_shift(alphabet: Iterable[str], **kw) -> ShiftPresentation:
    return sft(alphabet, (), **kw)


def sofic(edges: Iterable[tuple], alphabet: Iterable[str] | None = None, vertices=None, **kw) -> ShiftPresentation:
    edges = [tuple(e) for e in edges]
    if alphabet is None:
        alphabet = sorted({a for _, _, a in edges})
    if vertices is None:
        vertices = sorted({u for u, _, _ in edges} | {v for _, v, _ in edges})
    return ShiftPresentation("sofic", alphabet, vertices, edges, **kw)


def union(p: ShiftPresentation, q: ShiftPresentation) -> ShiftPresentation:
    """Sofic presentation of the union of two shifts (disjoint graph sum)."""
    edges = [(f"L.{u}", f"L.{v}", a) for u, v, a in p.edges]
    edges += [(f"R.{u}", f"R.{v}", a) for u, v, a in q.edges]
    alphabet = sorted(set(p.alphabet) | set(q.alphabet))
    return sofic(edges, alphabet=alphabet)


def golden_mean() -> ShiftPresentation:
    return sft("01", ["11"])


def sofic_example() -> ShiftPresentation:
    """Two loops sharing ``a``: vertex A carries a, b; vertex B carries a, c; d links them."""
    return sofic(
        [("A", "A", "a"), ("A", "A", "b"), ("B", "B", "a"), ("B", "B", "c"),
         ("A", "B", "d"), ("B", "A", "d")],
        alphabet="abcd",
    )


def sofic_example_lambda() -> ShiftPresentation:
    """{a,b}^N union {a,c}^N, the chain transitive subshift of the sofic example."""
    return union(full_shift("ab"), full_shift("ac"))


@dataclass(frozen=True)
class BlockGraph:
    """Vertices are allowed ``k``-blocks; ``u -> v`` when the merged ``(k+1)``-block is allowed."""

    k: int
    vertices: tuple
    edges: frozenset = field(repr=False)

    @classmethod
    def from_language(cls, k, blocks, longer):
        verts = tuple(sorted(blocks))
        index = set(verts)
        edges = set()
        for w in longer:
            u, v = w[:-1], w[1:]
            if u in index and v in index:
                edges.add((u, v))
        return cls(k, verts, frozenset(edges))

    def successors(self, u):
        return sorted(v for a, v in self.edges if a == u)

    def adjacency(self) -> dict:
        adj = {u: [] for u in self.vertices}
        for u, v in sorted(self.edges):
            adj[u].append(v)
        return adj


def restrict_blocks(p: ShiftPresentation, lam, k: int) -> BlockGraph:
    """Block graph of a subsystem ``lam`` of ``p`` at depth ``k``.

    ``lam`` is either a presentation or an explicit iterable of ``k``-blocks.
    """
    if isinstance(lam, ShiftPresentation):
        blocks = lam.allowed_blocks(k)
        longer = lam.allowed_blocks(k + 1)
    else:
        blocks = frozenset(lam)
        if any(len(b) != k for b in blocks):
            raise ParameterError(f"explicit blocks must all have length {k}")
        longer = {u + v[-1] for u in blocks for v in blocks if u[1:] == v[:-1]}
        longer = {w for w in longer if p.is_allowed(w)}
    bad = sorted(w for w in blocks if not p.is_allowed(w))
    if bad:
        raise NotSubsystemError(f"words not allowed in the ambient shift: {bad[:5]}")
    bad = sorted(w for w in longer if not p.is_allowed(w))
    if bad:
        raise NotSubsystemError(f"words not allowed in the ambient shift: {bad[:5]}")
    return BlockGraph.from_language(k, blocks, longer)


def periodic_orbits(words: Iterable[str], alphabet: Iterable[str] | None = None) -> ShiftPresentation:
    """Finite union of periodic orbits ``w w w ...``, one labeled cycle per word."""
    edges = []
    for j, w in enumerate(words):
        if not w:
            raise ParameterError("periodic words must be nonempty")
        n = len(w)
        edges += [(f"P{j}.{i}", f"P{j}.{(i + 1) % n}", w[i]) for i in range(n)]
    if not edges:
        raise ParameterError("need at least one periodic word")
    return sofic(edges, alphabet=alphabet)


@dataclass(frozen=True)
class ConstraintCertificate:
    """Outcome of :func:`word_constraint_empty`.

    On SAT, ``witness`` is a shortest (then lexicographically least) word.
    On UNSAT, ``table`` lists every reachable ``(vertex, seen-symbols)`` state.
    """

    sat: bool
    witness: str | None
    table: tuple

    def to_json(self) -> dict:
        out = {"verdict": "SAT" if self.sat else "UNSAT"}
        if self.sat:
            out["witness"] = self.witness
        else:
            out["reachable"] = [[str(v), "".join(sorted(s))] for v, s in self.table]
        return out


def word_constraint_empty(p: ShiftPresentation, must_contain, must_avoid=()) -> ConstraintCertificate:
    """Is there an allowed word using every symbol of ``must_contain`` and none of ``must_avoid``?"""
    need = frozenset(must_contain)
    avoid = frozenset(must_avoid)
    alpha = set(p.alphabet)
    if not need <= alpha or not avoid <= alpha:
        raise ParameterError("constraint symbols must come from the alphabet")
    if need & avoid:
        return ConstraintCertificate(False, None, ())
    starts = [(v, frozenset()) for v in p.vertices]
    if not need:
        return ConstraintCertificate(True, "", ())
    seen = {s: "" for s in starts}
    layer = starts
    # layers are kept in word order so the first hit is also lexicographically least
    while layer:
        nxt_layer = []
        for state in sorted(layer, key=lambda s: seen[s]):
            u, got = state
            word = seen[state]
            for a, v in p.out_edges(u):
                if a in avoid:
                    continue
                nxt = (v, got | ({a} & need))
                if nxt in seen:
                    continue
                seen[nxt] = word + a
                if nxt[1] == need:
                    return ConstraintCertificate(True, word + a, ())
                nxt_layer.append(nxt)
        layer = nxt_layer
    table = tuple(sorted(seen, key=lambda s: (str(s[0]), sorted(s[1]))))
    return ConstraintCertificate(False, None, table)


def presentation_from_json(obj: dict) -> ShiftPresentation:
    kind = obj.get("kind")
    if kind == "sft":
        return sft(obj["alphabet"], obj.get("forbidden", []))
    if kind == "sofic":
        edges = [(e["from"], e["to"], e["label"]) for e in obj["edges"]]
        return sofic(edges, alphabet=obj.get("alphabet"), vertices=obj.get("vertices"))
    raise ParseError(f"unknown presentation kind {kind!r}")
