from fractions import Fraction as F

import pytest

from omegalab.chains import BoxPartition
from omegalab.errors import ParameterError, PrecisionError, PreconditionError
from omegalab.numeric import exact_map, h_set, tent
from omegalab.realize import (
    SymbolStream,
    nonrealizability_report,
    omega_approx,
    omega_of_sequence,
    realize_sft,
    realize_tent2,
)
from omegalab.symbolic import full_shift, golden_mean, periodic_orbits, sft, sofic_example_lambda

T2 = tent(2)
CYCLE = [F(2, 7), F(4, 7), F(6, 7)]


def test_omega_approx_periodic_point():
    part = BoxPartition.uniform(T2.domain, 16)
    assert omega_approx(T2, F(2, 7), 0, 30, part) == part.boxes_of(CYCLE)
    # 1/7 falls onto the cycle after one step
    assert omega_approx(T2, F(1, 7), 1, 30, part) == part.boxes_of(CYCLE)


def test_omega_approx_shift_word():
    word = "1" + "01" * 50
    assert omega_approx(golden_mean(), word, 1, 40, 2) == {"01", "10"}
    with pytest.raises(ParameterError):
        omega_approx(golden_mean(), "0101", 0, 10, 2)


def test_stream_recurs_every_block():
    g = golden_mean()
    s = realize_sft(g, 4)
    w = s.prefix(5000)
    assert "11" not in w
    for b in g.allowed_blocks(4):
        assert w.count(b) >= 10
    assert [e.k for e in s.schedule] == [1, 2, 3, 4]


def test_stream_on_subshift():
    lam = sft("01", ["11", "000"])
    s = realize_sft(lam, 5)
    w = s.prefix(4000)
    assert omega_approx(lam, w, 2000, 1500, 5) == lam.allowed_blocks(5)


def test_stream_prefix_is_stable():
    s = SymbolStream(full_shift("01"), 3)
    a = s.prefix(300)
    assert s.prefix(900)[:300] == a


def test_realize_sft_refuses():
    lam = periodic_orbits(["0", "01"], "01")
    with pytest.raises(PreconditionError):
        realize_sft(lam, 3, ambient=golden_mean())
    with pytest.raises(PreconditionError):
        realize_sft(sofic_example_lambda(), 2)  # chain transitive but not of finite type


def test_nest_on_three_cycle():
    nest = realize_tent2(CYCLE, 6)
    checks = nest.verify()
    assert checks["nested"] and checks["contraction"] and checks["nonempty"]
    assert all(checks["visits"].values())
    # the core's orbit really comes near every cycle point in the last stage
    z = nest.core.midpoint
    last = nest.stages[-1]
    orbit = T2.iterate(z, last.end)
    for s in CYCLE:
        assert min(abs(orbit[i] - s) for i in range(last.start, last.end + 1)) < last.eps


def test_nest_fixed_point():
    nest = realize_tent2([F(2, 3)], 5, precision=F(1, 2**9))
    assert F(2, 3) in nest.core and nest.verify()["nested"]
    with pytest.raises(PrecisionError):
        realize_tent2([F(2, 3)], 3, precision=F(1, 2**20))


def test_nest_refuses_disconnected_set():
    with pytest.raises(PreconditionError, match="stage 3"):
        realize_tent2(CYCLE + [F(2, 3)], 4)


def test_nest_json():
    out = realize_tent2(CYCLE, 2).to_json()
    assert out["kind"] == "nest" and len(out["intervals"]) == 3
    assert all("/" in x for E in out["intervals"] for x in E)


def test_omega_of_sequence():
    assert omega_of_sequence(["0101", "1010", "0101"], 2, 1) == {"10", "01"}


def test_reports():
    r = nonrealizability_report("exact_map_H")
    assert r.verdict == "NotRealizable" and r.passed
    assert nonrealizability_report("golden_mean", max_depth=3).verdict == "Realizable"
    with pytest.raises(ParameterError):
        nonrealizability_report("nope")


def test_h_truncation_never_reaches_the_gap():
    f = exact_map()
    assert all(not F(7, 4) < f(h) <= 2 for h in h_set(20))
