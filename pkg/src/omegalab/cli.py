"""Command-line front end.

stdout carries one JSON document per run and nothing else; diagnostics go
to stderr. Verdict commands exit 0 (yes), 1 (no) or 2 (unknown); errors exit
3 (bad input), 4 (failed precondition) or 5 (budget or size guard).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import asdict, dataclass, fields
from fractions import Fraction
from pathlib import Path

from . import counterexamples
from .chains import (
    WI_GUARD,
    BoxPartition,
    build_eps_graph,
    ict_finite,
    invariance_check,
    is_ict,
    random_model,
    wi_bruteforce,
)
from .errors import (
    BudgetExceeded,
    DomainError,
    EmptyNestError,
    LapError,
    OmegaLabError,
    ParameterError,
    ParseError,
    ResourceError,
    SizeError,
)
from .numeric import PLMap, check_budget, default_budget_bits, exact_map, format_rational, h_set, parse_rational, tent
from .pseudo_orbit import PseudoOrbit, defect
from .realize import nonrealizability_report, realize_sft, realize_tent2
from .shadowing import delta_for_eps, h_shadow_expanding, negative_h_shadow_cert, sft_h_shadow
from .symbolic import (
    ShiftPresentation,
    depth_for_eps,
    golden_mean,
    periodic_orbits,
    presentation_from_json,
    restrict_blocks,
    sofic_example,
    sofic_example_lambda,
)

EXIT_YES, EXIT_NO, EXIT_UNKNOWN = 0, 1, 2
EXIT_INPUT, EXIT_PRECONDITION, EXIT_GUARD = 3, 4, 5

BUILTIN_SYSTEMS = {
    "tent2": lambda: tent(2),
    "tent3/2": lambda: tent(Fraction(3, 2)),
    "exact_map": exact_map,
    "goldenmean": golden_mean,
    "sofic": sofic_example,
}


@dataclass
class RunConfig:
    """Everything needed to replay a run; embedded in every report."""

    command: str = ""
    system: str | None = None
    set: str | None = None
    eps: str | None = None
    k: int | None = None
    partition: int | None = None
    depth: int | None = None
    precision: str | None = None
    states: str | None = None
    orbit: str | None = None
    prefix: int = 256
    example: str | None = None
    n: int = 10
    trials: int = 500
    seed: int = 0
    budget_bits: int | None = None
    dot: str | None = None
    out: str | None = None

    def validate(self):
        if self.eps is not None and parse_rational(self.eps) <= 0:
            raise ParameterError("--eps must be positive")
        if self.precision is not None and parse_rational(self.precision) <= 0:
            raise ParameterError("--precision must be positive")
        for name in ("k", "partition", "depth", "budget_bits"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ParameterError(f"--{name.replace('_', '-')} must be positive")
        if self.trials <= 0 or self.n <= 0 or self.prefix <= 0:
            raise ParameterError("--n, --trials and --prefix must be positive")
        return self

    @property
    def budget(self) -> int:
        return self.budget_bits if self.budget_bits is not None else default_budget_bits()

    def to_json(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_json(cls, obj: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        extra = set(obj) - known
        if extra:
            raise ParseError(f"unknown config keys: {sorted(extra)}")
        return cls(**obj)


# -- loading -----------------------------------------------------------------------


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}")


def load_system(spec: str | None):
    if spec is None:
        raise ParameterError("--system is required")
    if spec in BUILTIN_SYSTEMS:
        return BUILTIN_SYSTEMS[spec]()
    if spec.startswith("tent:"):
        return tent(parse_rational(spec[5:]))
    obj = _read_json(spec)
    if "breakpoints" in obj:
        return PLMap.from_json(obj)
    return presentation_from_json(obj)


def _parse_points(text: str) -> list[Fraction]:
    return [parse_rational(t) for t in text.split(",") if t.strip()]


def load_set(system, spec: str | None):
    """Interval maps: point list (``H<n>``, ``p/q,...`` or a JSON file). Shifts: a presentation."""
    if isinstance(system, ShiftPresentation):
        if spec in (None, "all", "full"):
            return system
        if spec == "lambda":
            return sofic_example_lambda()
        if spec.endswith(".json"):
            return presentation_from_json(_read_json(spec))
        words = []
        for tok in spec.split("+"):
            for prefix in ("fixed", "cycle"):
                if tok.startswith(prefix) and tok[len(prefix):]:
                    words.append(tok[len(prefix):])
                    break
            else:
                raise ParseError(f"bad set token {tok!r}; expected fixedW or cycleW")
        return periodic_orbits(words, system.alphabet)
    if spec is None or spec == "all":
        return None
    if spec.startswith("H") and spec[1:].isdigit():
        return h_set(int(spec[1:]))
    if spec.endswith(".json"):
        return [parse_rational(x) for x in _read_json(spec)]
    return _parse_points(spec)


def _depth(cfg: RunConfig) -> int:
    if cfg.k is not None:
        return cfg.k
    if cfg.eps is not None:
        return depth_for_eps(parse_rational(cfg.eps))
    raise ParameterError("shifts need --k or --eps")


def _require_eps(cfg: RunConfig) -> Fraction:
    if cfg.eps is None:
        raise ParameterError("--eps is required")
    return parse_rational(cfg.eps)


def _write_dot(cfg: RunConfig, text: str):
    if cfg.dot:
        try:
            Path(cfg.dot).write_text(text)
        except OSError as exc:
            raise ParseError(f"cannot write {cfg.dot}: {exc.strerror}")


# -- commands ----------------------------------------------------------------------

_VERDICT_EXIT = {"yes": EXIT_YES, "no": EXIT_NO, "unknown": EXIT_UNKNOWN}


def cmd_ict_check(cfg: RunConfig):
    system = load_system(cfg.system)
    lam = load_set(system, cfg.set)
    if isinstance(system, ShiftPresentation):
        k = _depth(cfg)
        g = build_eps_graph(system, restrict_blocks(system, lam, k))
        v = is_ict(g)
        S = sorted(g.vertices)
    else:
        eps = _require_eps(cfg)
        if cfg.partition is not None:
            part = BoxPartition.uniform(system.domain, cfg.partition)
        else:
            part = BoxPartition.for_eps(system.domain, eps)
        g = build_eps_graph(system, part, eps, "inner")
        outer = build_eps_graph(system, part, eps, "outer")
        S = sorted(part.boxes_of(lam)) if lam is not None else list(range(part.n))
        v = is_ict(g, S, outer=outer)
    certs = [v.chain(S[0], S[-1]), v.chain(S[-1], S[0])] if v.verdict == "yes" else []
    _write_dot(cfg, v.graph.to_dot(v.S))
    return v.to_json(certs), _VERDICT_EXIT[v.verdict]


def _load_orbit(cfg: RunConfig, system) -> PseudoOrbit:
    if cfg.orbit:
        return PseudoOrbit.from_json(system, _read_json(cfg.orbit))
    if cfg.states:
        raw = [t.strip() for t in cfg.states.split(",")]
        if isinstance(system, ShiftPresentation):
            return PseudoOrbit(system, tuple(raw))
        return PseudoOrbit(system, tuple(parse_rational(t) for t in raw))
    raise ParameterError("give the pseudo-orbit via --orbit FILE or --states")


def cmd_shadow(cfg: RunConfig):
    system = load_system(cfg.system)
    po = _load_orbit(cfg, system)
    if isinstance(system, ShiftPresentation):
        res = sft_h_shadow(system, po.states, len(po.states[0]))
        return {"result": "shadowed", "shadow": res.to_json()}, EXIT_YES
    eps = _require_eps(cfg)
    gaps = defect(po)
    out = {"delta": format_rational(delta_for_eps(system, eps)),
           "max_gap": format_rational(max(gaps, default=Fraction(0)))}
    try:
        res = h_shadow_expanding(system, po, eps)
    except (LapError, EmptyNestError) as exc:
        cert = negative_h_shadow_cert(system, po)
        out.update(result=cert.verdict, reason=str(exc), certificate=cert.to_json())
        return out, EXIT_NO if cert.verdict == "impossible" else EXIT_UNKNOWN
    check_budget(res.z, cfg.budget)
    out.update(result="shadowed", shadow=res.to_json())
    return out, EXIT_YES


def cmd_realize(cfg: RunConfig):
    system = load_system(cfg.system)
    K = cfg.depth or 6
    if system == exact_map() and (cfg.set or "").startswith("H"):
        n = int(cfg.set[1:] or 20)
        r = nonrealizability_report("exact_map_H", truncation=n)
        return r.to_json(), EXIT_NO if r.verdict == "NotRealizable" else EXIT_UNKNOWN
    if isinstance(system, ShiftPresentation):
        lam = load_set(system, cfg.set)
        if not lam.is_sft:
            if cfg.set == "lambda" and system.edges == sofic_example().edges:
                r = nonrealizability_report("sofic_ICT", max_depth=K)
                return r.to_json(), EXIT_NO if r.verdict == "NotRealizable" else EXIT_UNKNOWN
        stream = realize_sft(lam, K, ambient=system)
        return {"verdict": "Realizable", "point": stream.to_json(cfg.prefix)}, EXIT_YES
    S = load_set(system, cfg.set)
    if S is None:
        raise ParameterError("interval realisation needs a finite --set")
    nest = realize_tent2(S, K, cfg.precision and parse_rational(cfg.precision), f=system)
    for E in nest.nest:
        check_budget(E.lo, cfg.budget)
        check_budget(E.hi, cfg.budget)
    checks = nest.verify()
    ok = checks["nested"] and checks["contraction"] and checks["nonempty"] and all(checks["visits"].values())
    return {"verdict": "Realizable" if ok else "Unverified", "point": nest.to_json(), "checks": checks}, (
        EXIT_YES if ok else EXIT_UNKNOWN)


def cmd_examples(cfg: RunConfig):
    if cfg.example and cfg.example != "all":
        r = counterexamples.run_example(cfg.example)
        return r, EXIT_YES if r["passed"] else EXIT_NO
    r = counterexamples.run_all()
    return r, EXIT_YES if r["passed"] == r["total"] else EXIT_NO


def _random_subset(rng, n):
    size = rng.randint(1, n)
    return sorted(rng.sample(range(n), size))


def cmd_oracle(cfg: RunConfig):
    if cfg.n > WI_GUARD:
        raise SizeError(f"--n {cfg.n} exceeds the enumeration guard {WI_GUARD}")
    rng = random.Random(cfg.seed)
    mismatches, ict_true, invariance_fail = [], 0, 0
    for t in range(cfg.trials):
        model = random_model(cfg.n, rng)
        lam = _random_subset(rng, cfg.n)
        wi, ict = wi_bruteforce(model, lam), ict_finite(model, lam)
        if ict:
            ict_true += 1
            invariance_fail += not invariance_check(model, lam)
        if wi != ict:
            mismatches.append({"trial": t, "model": model.to_json(), "set": lam, "wi": wi, "ict": ict})
    out = {"n": cfg.n, "trials": cfg.trials, "seed": cfg.seed, "mismatches": len(mismatches),
           "ict_true": ict_true, "invariance_failures": invariance_fail}
    if mismatches:
        out["first_mismatch"] = mismatches[0]
        print(f"mismatches: {len(mismatches)}", file=sys.stderr)
        return out, EXIT_NO
    print("mismatches: 0", file=sys.stderr)
    return out, EXIT_YES


# -- argument parsing ----------------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="RunConfig JSON; explicit flags override it")
    p.add_argument("--system", help="builtin name (" + ", ".join(BUILTIN_SYSTEMS) + ", tent:p/q) or JSON file")
    p.add_argument("--set", help="H<n>, p/q list, fixedW+cycleW, lambda, all, or a JSON file")
    p.add_argument("--eps", help="tolerance as p/q")
    p.add_argument("--k", type=int, help="block depth for shifts")
    p.add_argument("--partition", type=int, help="number of uniform boxes")
    p.add_argument("--depth", type=int, help="number of realisation stages")
    p.add_argument("--precision", help="target nest diameter as p/q")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--budget-bits", type=int, dest="budget_bits")
    p.add_argument("--dot", help="also write the transition graph as DOT")
    p.add_argument("--out", help="write the JSON report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="omegalab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("ict-check", help="certify chain transitivity of a set"))
    p = sub.add_parser("shadow", help="h-shadow a finite pseudo-orbit")
    _common(p)
    p.add_argument("--orbit", help="pseudo-orbit JSON file {\"states\": [...]}")
    p.add_argument("--states", help="comma-separated states")
    p = sub.add_parser("realize", help="build a point whose omega-limit set is the given set")
    _common(p)
    p.add_argument("--prefix", type=int, help="symbols of the realising point to emit")
    p = sub.add_parser("examples", help="run the certified example bundles")
    _common(p)
    p.add_argument("action", choices=["run-all", "run"])
    p.add_argument("example", nargs="?", choices=counterexamples.EXAMPLE_IDS)
    p = sub.add_parser("oracle", help="randomised cross-checks")
    _common(p)
    p.add_argument("check", choices=["wi-ict"])
    p.add_argument("--n", type=int, help="points per random model")
    return parser


COMMANDS = {
    "ict-check": cmd_ict_check,
    "shadow": cmd_shadow,
    "realize": cmd_realize,
    "examples": cmd_examples,
    "oracle": cmd_oracle,
}

_CONFIG_FIELDS = {f.name for f in fields(RunConfig)}


def make_config(args: argparse.Namespace) -> RunConfig:
    base = RunConfig.from_json(_read_json(args.config)) if args.config else RunConfig()
    for key, value in vars(args).items():
        if key in _CONFIG_FIELDS and value is not None:
            setattr(base, key, value)
    if args.command == "examples" and args.action == "run" and not args.example:
        raise ParameterError("examples run needs an example id")
    return base.validate()


def _exit_for(exc: Exception) -> int:
    if isinstance(exc, (BudgetExceeded, ResourceError, SizeError)):
        return EXIT_GUARD
    if isinstance(exc, (ParseError, ParameterError, DomainError)):
        return EXIT_INPUT
    return EXIT_PRECONDITION


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = make_config(args)
        payload, code = COMMANDS[cfg.command](cfg)
    except OmegaLabError as exc:
        print(f"omegalab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return _exit_for(exc)
    report = {"config": cfg.to_json(), "report": payload}
    text = json.dumps(report, indent=2, sort_keys=True)
    if cfg.out:
        try:
            Path(cfg.out).write_text(text + "\n")
        except OSError as exc:
            print(f"omegalab: cannot write {cfg.out}: {exc.strerror}", file=sys.stderr)
            return EXIT_INPUT
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
