"""Acceptance criteria 1 to 11.

Each check returns ``(ok, detail)``. Under pytest the results are also
printed as one line per criterion in the terminal summary; running this file
directly prints the same lines without pytest.
"""

import random
import sys
import time
from fractions import Fraction as F

from omegalab import graphs
from omegalab.chains import (
    build_asymptotic_pseudo_orbit,
    dyadic,
    has_incoming_from_complement,
    ict_finite,
    invariance_check,
    random_model,
    wi_bruteforce,
)
from omegalab.counterexamples import run_example
from omegalab.numeric import exact_map, h_set, tent
from omegalab.pseudo_orbit import PseudoOrbit, is_asymptotic_prefix, is_eps_pseudo_orbit, verify_h_shadow
from omegalab.realize import omega_of_sequence, realize_sft, realize_tent2
from omegalab.shadowing import delta_for_eps, h_shadow_expanding, reverse_track_tent2
from omegalab.symbolic import depth_for_eps, golden_mean

T2 = tent(2)
_WI_RUN = {}


def _finite_trials():
    """500 random (model, set) pairs shared by criteria 1 and 3."""
    if not _WI_RUN:
        rng = random.Random(20240611)
        rows = []
        for _ in range(500):
            n = rng.randint(1, 12)
            model = random_model(n, rng)
            lam = sorted(rng.sample(range(n), rng.randint(1, n)))
            rows.append((model, lam, wi_bruteforce(model, lam), ict_finite(model, lam)))
        _WI_RUN["rows"] = rows
    return _WI_RUN["rows"]


def criterion_1():
    rows = _finite_trials()
    bad = [(m, lam, wi, ict) for m, lam, wi, ict in rows if wi != ict]
    singles = sum(len(lam) == 1 and m.fmap[lam[0]] != lam[0] for m, lam, _, _ in bad)
    detail = f"{len(rows) - len(bad)}/{len(rows)} agree"
    if bad:
        detail += f"; all {len(bad)} mismatches are one-point sets with f(x) != x" if singles == len(bad) else (
            f"; {len(bad)} mismatches, {singles} of them one-point sets")
    return not bad, detail


def criterion_2():
    rng = random.Random(7)
    agree = strong = 0
    for _ in range(500):
        n = rng.randint(1, 12)
        adj = {i: tuple(sorted(set(rng.sample(range(n), rng.randint(1, min(n, 3)))))) for i in range(n)}
        sc = graphs.is_strongly_connected(adj)
        strong += sc
        agree += sc == has_incoming_from_complement(adj)
    return agree == 500, f"{agree}/500 digraphs agree ({strong} strongly connected)"


def criterion_3():
    rows = [(m, lam) for m, lam, _, ict in _finite_trials() if ict]
    fails = sum(not invariance_check(m, lam) for m, lam in rows)
    return fails == 0, f"{len(rows)} chain transitive sets, {fails} not invariant"


def criterion_4():
    rng = random.Random(4)
    fails = 0
    for _ in range(1000):
        x = F(rng.randrange(2**16 + 1), 2**16)
        n = rng.randint(1, 30)
        delta = F(rng.randrange(1, 2**14), 2**16)
        xs = T2.iterate(x, n)
        y = min(max(xs[-1] + delta * F(rng.randrange(-2**16 + 1, 2**16), 2**16), F(0)), F(1))
        r = reverse_track_tent2(x, y, n, delta)
        ok = T2.iterate(r.z, n)[-1] == y and all(abs(a - b) < 2 * delta for a, b in zip(xs[1:], r.orbit[1:]))
        fails += not ok
    return fails == 0, f"1000 instances, {fails} failures"


def criterion_5():
    rng = random.Random(5)
    fails = 0
    for i in range(1000):
        eps = F(1, 8) if i % 2 else F(1, 32)
        delta = delta_for_eps(T2, eps)
        den = 2**12
        xs = [F(rng.randrange(den + 1), den)]
        for _ in range(rng.randint(1, 49)):
            u = F(rng.randrange(-den + 1, den), den) * delta
            xs.append(min(max(T2(xs[-1]) + u, F(0)), F(1)))
        po = PseudoOrbit(T2, tuple(xs))
        assert is_eps_pseudo_orbit(po, delta)
        r = h_shadow_expanding(T2, po, eps)
        fails += not (r.exact_hit and verify_h_shadow(po, r.z, eps))
    return fails == 0, f"1000 pseudo-orbits at eps in {{1/8, 1/32}}, {fails} failures"


def criterion_6():
    rep = run_example("tent_no_hshadow")
    cert = rep["claims"][-1]["certificate"]
    return rep["passed"], f"verdict {cert.get('verdict')}, range {cert.get('range')}"


def criterion_7():
    g = golden_mean()
    w = realize_sft(g, 6).prefix(10**5)
    tail = w[5 * 10**4:]
    missing = [b for b in g.allowed_blocks(6) if b not in tail]
    forbidden = "11" in w
    return not missing and not forbidden, f"{21 - len(missing)}/21 six-blocks recur, forbidden factor {forbidden}"


def criterion_8():
    rep = run_example("sofic_ICT")
    return rep["passed"], f"{sum(c['verdict'] == 'pass' for c in rep['claims'])}/{len(rep['claims'])} claims"


def criterion_9():
    t = time.perf_counter()
    rep = run_example("exact_map_H")
    dt = time.perf_counter() - t
    ok = rep["passed"] and dt < 10
    return ok, f"{sum(c['verdict'] == 'pass' for c in rep['claims'])}/{len(rep['claims'])} claims in {dt:.2f}s"


def criterion_10():
    out = []
    a = build_asymptotic_pseudo_orbit(exact_map(), h_set(20), K=6)
    part = a.resolutions[-1]
    ok_h = (is_asymptotic_prefix(a.orbit, a.schedule)
            and omega_of_sequence(a.states, part, a.stage_starts[-1]) == part.boxes_of(h_set(20)))
    out.append(f"H {ok_h}")
    g = golden_mean()
    b = build_asymptotic_pseudo_orbit(g, None, K=6)
    k = depth_for_eps(dyadic(6))
    ok_g = is_asymptotic_prefix(b.orbit, b.schedule) and omega_of_sequence(b.states, k, b.stage_starts[-1]) == (
        g.allowed_blocks(k))
    out.append(f"golden mean {ok_g} (depth {k})")
    return ok_h and ok_g, ", ".join(out)


def criterion_11():
    nest = realize_tent2([F(2, 7), F(4, 7), F(6, 7)], 8)
    c = nest.verify()
    ok = c["nested"] and c["contraction"] and c["nonempty"] and all(c["visits"].values())
    return ok, f"core diameter {nest.core.diameter}, stages {len(nest.stages)}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


def _run(number):
    from conftest import record
    ok, detail = CRITERIA[number - 1]()
    record(number, ok, detail)
    assert ok, detail


def test_criterion_01_wi_equals_ict():
    _run(1)


def test_criterion_02_graph_wi_analog():
    _run(2)


def test_criterion_03_ict_implies_invariance():
    _run(3)


def test_criterion_04_reverse_tracking():
    _run(4)


def test_criterion_05_tent2_h_shadowing():
    _run(5)


def test_criterion_06_negative_h_shadowing():
    _run(6)


def test_criterion_07_sft_realization():
    _run(7)


def test_criterion_08_sofic_counterexample():
    _run(8)


def test_criterion_09_exact_map_bundle():
    _run(9)


def test_criterion_10_asymptotic_closed_loop():
    _run(10)


def test_criterion_11_nest_contraction():
    _run(11)


if __name__ == "__main__":
    failed = 0
    for i, crit in enumerate(CRITERIA, start=1):
        t = time.perf_counter()
        ok, detail = crit()
        failed += not ok
        print(f"criterion {i:2d}: {'PASS' if ok else 'FAIL'}  {detail}  ({time.perf_counter() - t:.1f}s)")
    sys.exit(1 if failed else 0)
