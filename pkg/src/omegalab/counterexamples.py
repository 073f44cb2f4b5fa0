"""Three worked examples packaged as certified regression fixtures.

Each bundle is a list of claims. A claim runs to a boolean plus a JSON
certificate built only from public operations, so anyone holding the report
can re-check it. A claim that raises is recorded as failed with the error in
its certificate; :func:`run_example` itself never raises for a known id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache
from fractions import Fraction
from typing import Callable

from .chains import BoxPartition, build_eps_graph, is_ict
from .errors import OmegaLabError, ParameterError
from .numeric import Interval, exact_map, format_rational, h_set, tent
from .pseudo_orbit import PseudoOrbit, defect, is_eps_pseudo_orbit
from .realize import nonrealizability_report
from .shadowing import negative_h_shadow_cert
from .symbolic import (
    restrict_blocks,
    sofic_example,
    sofic_example_lambda,
    word_constraint_empty,
)

EXAMPLE_IDS = ("sofic_ICT", "tent_no_hshadow", "exact_map_H")


@dataclass(frozen=True)
class Claim:
    name: str
    anchor: str
    check: Callable[[], tuple[bool, dict]] = field(repr=False)

    def run(self) -> dict:
        try:
            ok, cert = self.check()
        except OmegaLabError as exc:
            ok, cert = False, {"error": type(exc).__name__, "message": str(exc)}
        return {"claim": self.name, "anchor": self.anchor,
                "verdict": "pass" if ok else "fail", "certificate": cert}


@dataclass(frozen=True)
class ExampleBundle:
    id: str
    system: dict
    claims: tuple
    params: dict = field(default_factory=dict)

    def run(self) -> dict:
        entries = [c.run() for c in self.claims]
        return {"id": self.id, "system": self.system, "params": self.params,
                "passed": all(e["verdict"] == "pass" for e in entries), "claims": entries}


# -- sofic shift ---------------------------------------------------------------


def _sofic_bundle(max_depth: int = 6) -> ExampleBundle:
    X, lam = sofic_example(), sofic_example_lambda()

    def ict_at(k):
        def check():
            v = is_ict(build_eps_graph(lam, restrict_blocks(X, lam, k)))
            return v.verdict == "yes", v.to_json()
        return check

    def obstruction():
        cert = word_constraint_empty(X, {"b", "c"}, {"d"})
        return not cert.sat, cert.to_json()

    def verdict():
        r = nonrealizability_report("sofic_ICT", max_depth=max_depth)
        return r.verdict == "NotRealizable", r.to_json()

    claims = [Claim(f"lambda block graph chain transitive at depth {k}",
                    "so Lambda is also internally chain transitive", ict_at(k))
              for k in range(1, max_depth + 1)]
    claims += [
        Claim("no word of X holds b and c without d", "must contain infinitely many symbols d", obstruction),
        Claim("lambda is not an omega-limit set", "must contain infinitely many symbols d", verdict),
    ]
    return ExampleBundle("sofic_ICT", {"X": X.to_json(), "lambda": lam.to_json()}, tuple(claims),
                         {"max_depth": max_depth})


# -- tent map without h-shadowing ------------------------------------------------


def tent_no_hshadow_orbit(delta=Fraction(1, 8)) -> PseudoOrbit:
    """Pre-image path ``1/3 -> 1/2 -> 3/4`` of the slope-3/2 tent map, last point nudged up by ``delta/2``."""
    T = tent(Fraction(3, 2))
    c = Fraction(1, 2)
    path = [Fraction(1, 3), c, T(c)]
    path[-1] += Fraction(delta) / 2
    return PseudoOrbit(T, tuple(path))


def _tent_bundle(delta=Fraction(1, 8)) -> ExampleBundle:
    T = tent(Fraction(3, 2))
    delta = Fraction(delta)

    @cache
    def orbit():
        # built lazily so a bad delta fails the claims instead of the bundle
        return tent_no_hshadow_orbit(delta)

    def preimage_path():
        po = orbit()
        ok = T(po.states[0]) == po.states[1] and T(po.states[1]) == T(Fraction(1, 2))
        return ok, {"path": [format_rational(x) for x in po.states[:2]],
                    "critical_value": format_rational(T(Fraction(1, 2)))}

    def delta_range():
        ok = 0 < delta < 1 - T(Fraction(1, 2))
        return ok, {"delta": format_rational(delta), "upper": format_rational(1 - T(Fraction(1, 2)))}

    def is_pseudo():
        po = orbit()
        return is_eps_pseudo_orbit(po, delta), {
            "states": [format_rational(x) for x in po.states],
            "gaps": [format_rational(g) for g in defect(po)], "delta": format_rational(delta)}

    def impossible():
        cert = negative_h_shadow_cert(T, orbit())
        ok = cert.verdict == "impossible" and T.range() == Interval(0, Fraction(3, 4))
        return ok, cert.to_json()

    claims = (
        Claim("states form a pre-image path ending at the critical value", "Take any pre-image path", preimage_path),
        Claim("delta lies in (0, 1 - T(c))", "0<delta<1-T(c)", delta_range),
        Claim("nudged path is a delta-pseudo-orbit", "consider the delta-pseudo-orbit", is_pseudo),
        Claim("no orbit hits the last state exactly",
              "no point which eps-shadows this pseudo-orbit with exact hit", impossible),
    )
    return ExampleBundle("tent_no_hshadow", {"map": T.to_json()}, claims, {"delta": format_rational(delta)})


# -- exact map and H -------------------------------------------------------------

#: intervals whose images are iterated until they cover the whole domain
EXACTNESS_SEEDS = (
    Interval(0, Fraction(1, 64)),
    Interval(Fraction(-1, 3), Fraction(-1, 4)),
    Interval(Fraction(7, 4), Fraction(7, 4) + Fraction(1, 100)),
)


def _exact_bundle(truncation: int = 20, eps_list=(Fraction(1, 16), Fraction(1, 64))) -> ExampleBundle:
    f = exact_map()
    H = h_set(truncation)

    def identities():
        bad = [x for x in (1, -1) if f(x) != 0]
        for n in range(truncation + 1):
            for s in (1, -1):
                if f(Fraction(s, 4 ** (n + 1))) != Fraction(s, 4 ** n):
                    bad.append(Fraction(s, 4 ** (n + 1)))
        return not bad, {"checked_n": truncation, "failures": [format_rational(x) for x in bad]}

    def image(J, expected):
        def check():
            got = f.image_interval(J)
            return got == expected, {"interval": J.to_json(), "image": got.to_json()}
        return check

    def ict_at(eps):
        def check():
            part = BoxPartition.for_eps(f.domain, eps)
            g = build_eps_graph(f, part, eps, "inner")
            S = part.boxes_of(H)
            v = is_ict(g, S)
            certs = []
            if v.verdict == "yes":
                lo, hi = part.locate(H[0]), part.locate(H[-1])
                certs = [v.chain(lo, hi), v.chain(hi, lo)]
            out = v.to_json(certs)
            out["boxes"] = part.n
            return v.verdict == "yes", out
        return check

    def exactness():
        runs = []
        for J in EXACTNESS_SEEDS:
            K, n = J, 0
            while K != f.domain and n < 12:
                K, n = f.image_interval(K), n + 1
            runs.append({"seed": J.to_json(), "iterations": n, "covers": K == f.domain})
        return all(r["covers"] for r in runs), {"seeds": runs}

    def verdict():
        r = nonrealizability_report("exact_map_H", truncation=truncation)
        return r.verdict == "NotRealizable", r.to_json()

    q = Fraction(7, 4)
    claims = [
        Claim("f(+-1) = 0 and f(+-4^-(n+1)) = +-4^-n", "because f(+-1)=0 and f(+-1/4^(n+1))=+-1/4^n", identities),
        Claim("f([0,7/4]) = [0,2]", "f([0,7/4])=[0,2]", image(Interval(0, q), Interval(0, 2))),
        Claim("f([7/4,2]) = [-2,0]", "f([7/4,2])=[-2,0]", image(Interval(q, 2), Interval(-2, 0))),
    ]
    claims += [Claim(f"truncated H chain transitive at eps = {format_rational(e)}",
                     "closed, invariant and internally chain transitive", ict_at(e)) for e in eps_list]
    claims += [
        Claim("sampled seed intervals expand onto [-2,2]", "the function f is topologically exact", exactness),
        Claim("H is not an omega-limit set", "H is not the omega-limit set of any point", verdict),
    ]
    return ExampleBundle("exact_map_H", {"map": f.to_json()}, tuple(claims),
                         {"truncation": truncation, "eps": [format_rational(e) for e in eps_list]})


def bundle(example_id: str, **params) -> ExampleBundle:
    if example_id == "sofic_ICT":
        return _sofic_bundle(**params)
    if example_id == "tent_no_hshadow":
        return _tent_bundle(**params)
    if example_id == "exact_map_H":
        return _exact_bundle(**params)
    raise ParameterError(f"unknown example {example_id!r}; choose from {EXAMPLE_IDS}")


def run_example(example_id: str, **params) -> dict:
    return bundle(example_id, **params).run()


def run_all() -> dict:
    reports = [run_example(i) for i in EXAMPLE_IDS]
    return {"passed": sum(r["passed"] for r in reports), "total": len(reports), "reports": reports}
