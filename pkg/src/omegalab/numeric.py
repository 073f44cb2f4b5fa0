"""Exact rationals, rational intervals and continuous piecewise-linear maps.

Scalars are :class:`fractions.Fraction` throughout: always in lowest terms
with a positive denominator, and exact under + - * / and comparison.
Nothing in this module touches floating point.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BudgetExceeded, DomainError, ParameterError, ParseError

Q = Fraction

DEFAULT_BUDGET_BITS = 4096


def default_budget_bits() -> int:
    raw = os.environ.get("OMEGALAB_BUDGET_BITS")
    if raw is None:
        return DEFAULT_BUDGET_BITS
    try:
        bits = int(raw)
    except ValueError:
        raise ParseError(f"OMEGALAB_BUDGET_BITS must be an integer, got {raw!r}")
    if bits <= 0:
        raise ParseError("OMEGALAB_BUDGET_BITS must be positive")
    return bits


def check_budget(x: Fraction, budget_bits: int | None) -> Fraction:
    """Return ``x`` unchanged, or raise if its denominator is too wide."""
    if budget_bits is not None and x.denominator.bit_length() > budget_bits:
        raise BudgetExceeded(
            f"denominator of {x.denominator.bit_length()} bits exceeds budget of {budget_bits}"
        )
    return x


def parse_rational(text) -> Fraction:
    """Parse a canonical ``"p/q"`` (or bare integer) string.

    Decimal notation is rejected on purpose: values crossing the text
    boundary must be exact.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"expected a 'p/q' string, got {type(text).__name__}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ParseError(f"malformed rational {text!r}")
    if q == 0:
        raise ParseError(f"zero denominator in {text!r}")
    if q < 0:
        raise ParseError(f"denominator must be positive in {text!r}")
    return Fraction(p, q)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise DomainError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def hull(cls, points: Iterable[Fraction]) -> "Interval":
        pts = list(points)
        return cls(min(pts), max(pts))

    @classmethod
    def ball(cls, center: Fraction, radius: Fraction) -> "Interval":
        return cls(center - radius, center + radius)

    @property
    def diameter(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersect(self, other: "Interval") -> "Interval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi)

    def distance(self, other: "Interval") -> Fraction:
        """Gap between two closed intervals (0 when they meet)."""
        return max(Fraction(0), other.lo - self.hi, self.lo - other.hi)

    def distance_to_point(self, x: Fraction) -> Fraction:
        return max(Fraction(0), self.lo - x, x - self.hi)

    def to_json(self) -> list[str]:
        return [format_rational(self.lo), format_rational(self.hi)]

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


class PLMap:
    """Continuous piecewise-linear self-map of ``[c_0, c_m]``.

    The map is determined by its graph's vertices ``(c_i, v_i)`` and is
    linear on each lap ``[c_{i-1}, c_i]``. Laps are indexed from 0, so lap
    ``i`` spans ``breakpoints[i]..breakpoints[i+1]``.
    """

    __slots__ = ("breakpoints", "values", "slopes", "domain")

    def __init__(self, breakpoints: Sequence, values: Sequence):
        bps = tuple(parse_rational(b) for b in breakpoints)
        vals = tuple(parse_rational(v) for v in values)
        if len(bps) < 2:
            raise ParameterError("a PL map needs at least two breakpoints")
        if len(bps) != len(vals):
            raise ParameterError("breakpoints and values differ in length")
        if any(a >= b for a, b in zip(bps, bps[1:])):
            raise ParameterError("breakpoints must be strictly ascending")
        lo, hi = bps[0], bps[-1]
        if any(not lo <= v <= hi for v in vals):
            raise ParameterError("values leave the domain; not a self-map")
        self.breakpoints = bps
        self.values = vals
        self.slopes = tuple(
            (vals[i + 1] - vals[i]) / (bps[i + 1] - bps[i]) for i in range(len(bps) - 1)
        )
        self.domain = Interval(lo, hi)

    def __repr__(self):
        pts = ", ".join(f"({c}, {v})" for c, v in zip(self.breakpoints, self.values))
        return f"PLMap({pts})"

    def __eq__(self, other):
        return (
            isinstance(other, PLMap)
            and self.breakpoints == other.breakpoints
            and self.values == other.values
        )

    def __hash__(self):
        return hash((self.breakpoints, self.values))

    @property
    def n_laps(self) -> int:
        return len(self.slopes)

    def lap(self, i: int) -> Interval:
        return Interval(self.breakpoints[i], self.breakpoints[i + 1])

    def lap_image(self, i: int) -> Interval:
        return Interval.hull((self.values[i], self.values[i + 1]))

    def laps_containing(self, x: Fraction) -> list[int]:
        """Indices of every lap whose closed span contains ``x``."""
        self._check_domain(x)
        return [i for i in range(self.n_laps) if self.breakpoints[i] <= x <= self.breakpoints[i + 1]]

    def lap_index(self, x: Fraction) -> int:
        """The lap containing ``x``; a shared breakpoint goes to the lower lap."""
        return self.laps_containing(x)[0]

    def critical_points(self) -> list[Fraction]:
        """Interior breakpoints where the slope changes sign."""
        return [
            self.breakpoints[i + 1]
            for i in range(self.n_laps - 1)
            if (self.slopes[i] > 0) != (self.slopes[i + 1] > 0)
        ]

    def _check_domain(self, x):
        if not self.domain.lo <= x <= self.domain.hi:
            raise DomainError(f"{x} outside domain {self.domain}")

    def eval_on_lap(self, i: int, x: Fraction) -> Fraction:
        return self.values[i] + self.slopes[i] * (x - self.breakpoints[i])

    def eval(self, x, budget_bits: int | None = None) -> Fraction:
        x = Fraction(x)
        i = self.lap_index(x)
        return check_budget(self.eval_on_lap(i, x), budget_bits)

    __call__ = eval

    def iterate(self, x, n: int, budget_bits: int | None = None) -> list[Fraction]:
        """Orbit ``[x, f(x), ..., f^n(x)]``."""
        orbit = [Fraction(x)]
        for _ in range(n):
            orbit.append(self.eval(orbit[-1], budget_bits))
        return orbit

    def image_interval(self, J: Interval) -> Interval:
        if not self.domain.contains_interval(J):
            raise DomainError(f"{J} not inside domain {self.domain}")
        pts = [J.lo, J.hi] + [c for c in self.breakpoints if J.lo < c < J.hi]
        return Interval.hull(self.eval(p) for p in pts)

    def inverse_on_lap(self, i: int, y: Fraction) -> Fraction:
        """The unique point of lap ``i`` mapped to ``y``; ``y`` must lie in its image."""
        s = self.slopes[i]
        if s == 0:
            raise ParameterError(f"lap {i} is flat; no inverse branch")
        if y not in self.lap_image(i):
            raise DomainError(f"{y} not in the image of lap {i}")
        return self.breakpoints[i] + (y - self.values[i]) / s

    def inverse_interval_on_lap(self, i: int, J: Interval) -> Interval | None:
        """Pull back ``J`` through lap ``i``'s inverse branch (``None`` if disjoint)."""
        K = J.intersect(self.lap_image(i))
        if K is None:
            return None
        return Interval.hull((self.inverse_on_lap(i, K.lo), self.inverse_on_lap(i, K.hi)))

    def preimages(self, y) -> list[Fraction]:
        y = Fraction(y)
        found = set()
        for i in range(self.n_laps):
            if y in self.lap_image(i):
                found.add(self.inverse_on_lap(i, y))
        return sorted(found)

    def slope_bounds(self) -> tuple[Fraction, Fraction]:
        mags = [abs(s) for s in self.slopes]
        return min(mags), max(mags)

    def is_expanding(self) -> bool:
        return self.slope_bounds()[0] > 1

    def range(self) -> Interval:
        return Interval.hull(self.values)

    def to_json(self) -> dict:
        return {
            "breakpoints": [format_rational(c) for c in self.breakpoints],
            "values": [format_rational(v) for v in self.values],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PLMap":
        try:
            return cls(obj["breakpoints"], obj["values"])
        except KeyError as exc:
            raise ParseError(f"PL map JSON missing field {exc}")


def tent(slope=2) -> PLMap:
    """Symmetric tent map on [0, 1] with apex at 1/2 and the given slope."""
    lam = parse_rational(slope)
    if not 1 < lam <= 2:
        raise ParameterError(f"tent slope must lie in (1, 2], got {lam}")
    return PLMap([0, Fraction(1, 2), 1], [0, lam / 2, 0])


EXACT_MAP_POINTS = (
    (Q(-2), Q(2)),
    (Q(-3, 2), Q(-2)),
    (Q(-1), Q(0)),
    (Q(-1, 2), Q(-2)),
    (Q(1, 2), Q(2)),
    (Q(1), Q(0)),
    (Q(3, 2), Q(2)),
    (Q(2), Q(-2)),
)


def exact_map() -> PLMap:
    """The topologically exact seven-lap map of [-2, 2] with H = {0, +-4^-n}."""
    return PLMap([c for c, _ in EXACT_MAP_POINTS], [v for _, v in EXACT_MAP_POINTS])


def validate_uniform_pl(f: PLMap) -> bool:
    """Equal slope modulus > 1 on every lap, and every local extremum valued at an endpoint."""
    mags = {abs(s) for s in f.slopes}
    if len(mags) != 1 or mags.pop() <= 1:
        return False
    extrema = [f.values[0], f.values[-1]]
    extrema += [f.values[i + 1] for i in range(f.n_laps - 1) if (f.slopes[i] > 0) != (f.slopes[i + 1] > 0)]
    ends = (f.domain.lo, f.domain.hi)
    return all(v in ends for v in extrema)


def h_set(n: int = 20) -> list[Fraction]:
    """Truncation ``{0} U {+-4^-j : 0 <= j <= n}`` of the exact map's invariant set H."""
    pts = {Fraction(0)}
    for j in range(n + 1):
        pts.add(Fraction(1, 4**j))
        pts.add(Fraction(-1, 4**j))
    return sorted(pts)
