"""Constructive shadowing with an exact final hit.

Interval maps are handled by pulling the last state back through inverse
branches; shifts of finite type by splicing overlapping blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (
    EmptyNestError,
    LapError,
    NotExpandingError,
    OverlapError,
    ParameterError,
    PreconditionError,
    SoficError,
)
from .numeric import Interval, PLMap, format_rational, tent
from .pseudo_orbit import PseudoOrbit, is_shift, verify_h_shadow
from .symbolic import ShiftPresentation

#: reverse tracking for the slope-2 tent map is guaranteed for delta below this
TENT2_LAMBDA = Fraction(1, 4)


@dataclass(frozen=True)
class ShadowResult:
    z: object
    eps: Fraction
    exact_hit: bool
    branches: tuple = ()
    orbit: tuple = field(default=(), repr=False)

    def to_json(self) -> dict:
        z = self.z if isinstance(self.z, str) else format_rational(self.z)
        return {"z": z, "epsilon": format_rational(self.eps), "exact_hit": self.exact_hit,
                "branches": list(self.branches)}


def delta_for_eps(f: PLMap, eps) -> Fraction:
    """``eps * (mu - 1) / mu`` for the smallest slope modulus ``mu``."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ParameterError("epsilon must be positive")
    mu = f.slope_bounds()[0]
    if mu <= 1:
        raise NotExpandingError(f"minimum slope modulus {mu} is not above 1")
    return eps * (mu - 1) / mu


def reverse_track_tent2(x, y, n: int, delta) -> ShadowResult:
    """Point ``z`` with ``T^n(z) = y`` whose orbit stays within ``2*delta`` of ``x``'s.

    Pulls ``y`` back one step at a time, always taking the preimage nearest
    the matching point of ``x``'s orbit (the smaller one on ties).
    """
    T = tent(2)
    x, y, delta = Fraction(x), Fraction(y), Fraction(delta)
    if n < 1:
        raise ParameterError("n must be positive")
    if not (0 <= x <= 1 and 0 <= y <= 1):
        raise PreconditionError("x and y must lie in [0, 1]")
    if not 0 < delta < TENT2_LAMBDA:
        raise PreconditionError(f"delta must lie in (0, {TENT2_LAMBDA})")
    xs = T.iterate(x, n)
    if abs(xs[n] - y) >= delta:
        raise PreconditionError(f"|T^n(x) - y| = {abs(xs[n] - y)} is not below delta")
    if xs[n] == y:
        return ShadowResult(x, 2 * delta, True, (), tuple(xs))
    ys = [y]
    branches = []
    for i in range(n - 1, -1, -1):
        pre = T.preimages(ys[-1])
        best = min(pre, key=lambda p: (abs(p - xs[i]), p))
        branches.append(T.lap_index(best))
        ys.append(best)
    ys.reverse()
    branches.reverse()
    if T.iterate(ys[0], n) != ys:
        raise AssertionError("internal error: preimage chain is not an orbit")
    if any(abs(a - b) >= 2 * delta for a, b in zip(xs[1:], ys[1:])):
        raise AssertionError("internal error: tracking bound violated")
    return ShadowResult(ys[0], 2 * delta, True, tuple(branches), tuple(ys))


def _pullback_laps(f: PLMap, x, y_next):
    """Laps containing ``x`` whose image holds ``y_next``."""
    return [i for i in f.laps_containing(x) if y_next in f.lap_image(i)]


def h_shadow_expanding(f: PLMap, po: PseudoOrbit, eps) -> ShadowResult:
    """h-shadow a pseudo-orbit of an expanding PL map.

    Starting from ``y_m = x_m`` each ``y_i`` is the preimage of ``y_{i+1}``
    on a lap containing ``x_i``; expansion keeps ``|y_i - x_i| < eps``
    whenever the gaps are below :func:`delta_for_eps`.
    """
    eps = Fraction(eps)
    delta_for_eps(f, eps)  # rejects non-expanding maps
    xs = po.states
    m = len(xs) - 1
    ys = [xs[m]]
    branches = []
    for i in range(m - 1, -1, -1):
        laps = _pullback_laps(f, xs[i], ys[-1])
        if not laps:
            raise LapError(f"no lap through x_{i} = {xs[i]} covers {ys[-1]}")
        cands = [(abs(f.inverse_on_lap(j, ys[-1]) - xs[i]), j) for j in laps]
        dist, j = min(cands)
        if dist >= eps:
            raise EmptyNestError(f"pull-back left the {eps}-ball at step {i}; gaps exceed delta?")
        ys.append(f.inverse_on_lap(j, ys[-1]))
        branches.append(j)
    ys.reverse()
    branches.reverse()
    result = ShadowResult(ys[0], eps, True, tuple(branches), tuple(ys))
    if not verify_h_shadow(po, result.z, eps):
        raise AssertionError("internal error: shadow fails verification")
    return result


def pullback_nest(f: PLMap, xs: Sequence, radii: Sequence, laps: Sequence | None = None) -> list[Interval]:
    """Backward nest of intervals for a committed pseudo-orbit.

    ``E_m`` is the closed ``radii[m]``-ball around ``x_m``, and
    ``E_i = g_i(E_{i+1}) ∩ ball(x_i, radii[i])`` with ``g_i`` the inverse of
    lap ``laps[i]`` (default: the lap holding ``x_i``). Returns
    ``[E_0, ..., E_m]``.
    """
    m = len(xs) - 1
    dom = f.domain
    E = Interval.ball(xs[m], radii[m]).intersect(dom)
    nest = [E]
    for i in range(m - 1, -1, -1):
        j = f.lap_index(xs[i]) if laps is None else laps[i]
        pulled = f.inverse_interval_on_lap(j, E)
        if pulled is None:
            raise LapError(f"lap {j} at step {i} does not cover the next nest interval")
        E = pulled.intersect(Interval.ball(xs[i], radii[i]))
        if E is None:
            raise EmptyNestError(f"nest empties at step {i}")
        nest.append(E)
    nest.reverse()
    return nest


def sft_h_shadow(p: ShiftPresentation, blocks: Sequence[str], k: int) -> ShadowResult:
    """Splice overlapping ``k``-blocks into one word that tracks them all.

    The word's ``i``-th shift begins with ``blocks[i]``; it is padded by ``k``
    allowed symbols so every shift is a proper prefix of a point.
    """
    if not p.is_sft:
        raise SoficError("only shifts of finite type are spliced; strictly sofic shifts lack h-shadowing")
    if p.memory > k:
        raise PreconditionError(f"block length {k} is below the SFT memory {p.memory}")
    if not blocks:
        raise ParameterError("need at least one block")
    for b in blocks:
        if len(b) != k:
            raise ParameterError(f"block {b!r} is not of length {k}")
        if not p.is_allowed(b):
            raise OverlapError(f"block {b!r} is not allowed")
    for i, (u, v) in enumerate(zip(blocks, blocks[1:])):
        if u[1:] != v[:-1] or not p.is_allowed(u + v[-1]):
            raise OverlapError(f"blocks {i} and {i + 1} ({u!r}, {v!r}) do not overlap")
    word = blocks[0] + "".join(b[-1] for b in blocks[1:])
    word = p.extend(word, k)
    eps = Fraction(1, 2 ** (k - 1))
    po = PseudoOrbit(p, tuple(blocks))
    if not verify_h_shadow(po, word, eps):
        raise AssertionError("internal error: spliced word fails verification")
    return ShadowResult(word, eps, True, (), tuple(word[i:] for i in range(len(blocks))))


@dataclass(frozen=True)
class NegativeCertificate:
    verdict: str  # "impossible" | "inconclusive"
    reason: str
    reachable: Interval | None = None

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "reason": self.reason}
        if self.reachable is not None:
            out["range"] = self.reachable.to_json()
        return out


def negative_h_shadow_cert(f: PLMap, po: PseudoOrbit, eps=None) -> NegativeCertificate:
    """Certify that no point hits ``x_m`` exactly after ``m`` steps.

    Uses the exact range of ``f^m``; when ``x_m`` lies inside it nothing is
    claimed.
    """
    if is_shift(f):
        raise ParameterError("negative certificates are for interval maps")
    m = len(po) - 1
    R = f.domain
    for _ in range(m):
        R = f.image_interval(R)
    xm = po.states[m]
    if xm not in R:
        return NegativeCertificate(
            "impossible", f"x_m = {xm} lies outside the range {R} of f^{m}", R)
    return NegativeCertificate("inconclusive", f"x_m = {xm} lies in the range {R} of f^{m}", R)
