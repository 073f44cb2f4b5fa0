"""Finite pseudo-orbits and the checks run against them.

A phase space is either a :class:`~omegalab.numeric.PLMap` (states are
rationals) or a :class:`~omegalab.symbolic.ShiftPresentation` (states are
finite word prefixes, the map is the left shift). Distances between word
prefixes are only known up to their common depth; see
:func:`~omegalab.symbolic.cylinder_distance`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, ParameterError
from .numeric import check_budget, format_rational, parse_rational
from .symbolic import ShiftPresentation, cylinder_distance


def is_shift(system) -> bool:
    return isinstance(system, ShiftPresentation)


def step(system, x):
    if is_shift(system):
        return x[1:]
    return system.eval(x)


def distance(system, x, y) -> Fraction:
    """Exact distance for rationals, cylinder upper bound for words."""
    if is_shift(system):
        return cylinder_distance(x, y)[0]
    return abs(Fraction(x) - Fraction(y))


def check_state(system, x):
    if is_shift(system):
        if not isinstance(x, str) or not x:
            raise DomainError(f"shift states are nonempty words, got {x!r}")
        if not system.is_allowed(x):
            raise DomainError(f"word {x!r} is not in the shift's language")
        return x
    x = Fraction(x)
    if x not in system.domain:
        raise DomainError(f"{x} outside domain {system.domain}")
    return x


@dataclass(frozen=True)
class PseudoOrbit:
    system: object
    states: tuple

    def __post_init__(self):
        if not self.states:
            raise ParameterError("a pseudo-orbit needs at least one state")
        object.__setattr__(self, "states", tuple(check_state(self.system, x) for x in self.states))

    def __len__(self):
        return len(self.states)

    def to_json(self, system_ref=None) -> dict:
        if is_shift(self.system):
            states = list(self.states)
        else:
            states = [format_rational(x) for x in self.states]
        return {"system": system_ref if system_ref is not None else self.system.to_json(), "states": states}

    @classmethod
    def from_json(cls, system, obj: dict) -> "PseudoOrbit":
        raw = obj["states"]
        if is_shift(system):
            return cls(system, tuple(raw))
        return cls(system, tuple(parse_rational(s) for s in raw))


def defect(po: PseudoOrbit) -> list[Fraction]:
    """Gaps ``d(f(x_n), x_{n+1})``; shift gaps are cylinder upper bounds."""
    f = po.system
    return [distance(f, step(f, a), b) for a, b in zip(po.states, po.states[1:])]


def is_eps_pseudo_orbit(po: PseudoOrbit, eps) -> bool:
    eps = Fraction(eps)
    if eps <= 0:
        raise ParameterError("epsilon must be positive")
    return all(g < eps for g in defect(po))


def orbit(system, y, n: int, budget_bits: int | None = None) -> list:
    """``[y, f(y), ..., f^n(y)]``."""
    pts = [check_state(system, y)]
    for _ in range(n):
        nxt = step(system, pts[-1])
        if not is_shift(system):
            check_budget(nxt, budget_bits)
        pts.append(nxt)
    return pts


def shadowing_distance(po: PseudoOrbit, y, budget_bits: int | None = None) -> Fraction:
    ys = orbit(po.system, y, len(po) - 1, budget_bits)
    return max(distance(po.system, a, b) for a, b in zip(ys, po.states))


def verify_h_shadow(po: PseudoOrbit, y, eps) -> bool:
    """Strict ``eps``-closeness before the last state, exact equality at it.

    For words, "exact" means ``sigma^m(y)`` begins with the whole of ``x_m``.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ParameterError("epsilon must be positive")
    f = po.system
    m = len(po) - 1
    ys = orbit(f, y, m)
    if any(distance(f, a, b) >= eps for a, b in zip(ys[:m], po.states[:m])):
        return False
    if is_shift(f):
        return ys[m].startswith(po.states[m])
    return ys[m] == po.states[m]


def is_asymptotic_prefix(po: PseudoOrbit, schedule: Sequence) -> bool:
    """Finite-prefix check ``gaps[n] <= schedule[n]``.

    This certifies the prefix only. Whether the infinite sequence is an
    asymptotic pseudo-orbit is a property of whatever generated it.
    """
    sched = [Fraction(s) for s in schedule]
    gaps = defect(po)
    if len(sched) < len(gaps):
        raise ParameterError("schedule shorter than the gap sequence")
    if any(s <= 0 for s in sched):
        raise ParameterError("schedule must be strictly positive")
    if any(b > a for a, b in zip(sched, sched[1:])):
        raise ParameterError("schedule must be nonincreasing")
    return all(g <= s for g, s in zip(gaps, sched))
