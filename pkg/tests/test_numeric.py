from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from omegalab.errors import BudgetExceeded, DomainError, ParameterError, ParseError
from omegalab.numeric import (
    Interval,
    PLMap,
    check_budget,
    exact_map,
    format_rational,
    h_set,
    parse_rational,
    tent,
    validate_uniform_pl,
)

rationals01 = st.fractions(min_value=0, max_value=1, max_denominator=10**6)


@pytest.mark.parametrize("text,value", [("3/4", F(3, 4)), ("-2", F(-2)), (" 6/8 ", F(3, 4)), (5, F(5))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["1/0", "0.5", "1/-2", "abc", "", 1.5])
def test_parse_rational_rejects(text):
    with pytest.raises(ParseError):
        parse_rational(text)


@given(st.fractions(max_denominator=10**9))
def test_format_parse_round_trip(x):
    s = format_rational(x)
    assert parse_rational(s) == x
    p, q = s.split("/")
    assert int(q) > 0


def test_interval_basics():
    J = Interval(F(1, 4), F(3, 4))
    assert J.diameter == F(1, 2) and J.midpoint == F(1, 2)
    assert F(1, 4) in J and F(4, 5) not in J
    assert J.intersect(Interval(1, 2)) is None
    assert J.intersect(Interval(F(1, 2), 2)) == Interval(F(1, 2), F(3, 4))
    assert J.distance(Interval(1, 2)) == F(1, 4)
    assert J.distance_to_point(0) == F(1, 4)
    with pytest.raises(DomainError):
        Interval(1, 0)


def test_tent_values():
    T = tent(2)
    assert T(F(1, 2)) == 1 and T(F(1, 3)) == F(2, 3) and T(F(2, 3)) == F(2, 3)
    assert tent(F(3, 2)).range() == Interval(0, F(3, 4))
    for bad in (1, F(5, 2)):
        with pytest.raises(ParameterError):
            tent(bad)


def test_exact_map_structure():
    f = exact_map()
    assert f.slope_bounds() == (4, 8)
    assert f.n_laps == 7
    assert f.domain == Interval(-2, 2)
    assert f(1) == 0 and f(-1) == 0
    assert f.image_interval(Interval(0, F(7, 4))) == Interval(0, 2)
    assert f.image_interval(Interval(F(7, 4), 2)) == Interval(-2, 0)


def test_shared_breakpoint_owned_by_both_laps():
    f = exact_map()
    assert f.laps_containing(F(1, 2)) == [3, 4]
    assert f.lap_index(F(1, 2)) == 3
    assert f.eval_on_lap(3, F(1, 2)) == f.eval_on_lap(4, F(1, 2))


def test_preimages_deduplicate():
    T = tent(2)
    assert T.preimages(1) == [F(1, 2)]
    assert T.preimages(F(1, 2)) == [F(1, 4), F(3, 4)]
    assert T.preimages(0) == [0, 1]


@given(rationals01, rationals01)
def test_image_interval_holds_point_images(a, b):
    T = tent(F(3, 2))
    J = Interval(min(a, b), max(a, b))
    img = T.image_interval(J)
    for x in (J.lo, J.hi, J.midpoint):
        assert T(x) in img
    if J.lo <= F(1, 2) <= J.hi:
        assert img.hi == F(3, 4)


@given(rationals01)
def test_inverse_branches_invert(y):
    T = tent(2)
    for i in range(T.n_laps):
        x = T.inverse_on_lap(i, y)
        assert x in T.lap(i) and T(x) == y


def test_budget_guard():
    x = F(1, 2**100)
    assert check_budget(x, 101) == x
    with pytest.raises(BudgetExceeded):
        check_budget(x, 64)
    with pytest.raises(BudgetExceeded):
        tent(2).iterate(F(1, 3**50), 3, budget_bits=8)


def test_budget_env(monkeypatch):
    from omegalab.numeric import default_budget_bits
    monkeypatch.setenv("OMEGALAB_BUDGET_BITS", "128")
    assert default_budget_bits() == 128
    monkeypatch.setenv("OMEGALAB_BUDGET_BITS", "lots")
    with pytest.raises(ParseError):
        default_budget_bits()


def test_plmap_validation_and_json():
    with pytest.raises(ParameterError):
        PLMap([0, 1], [0, 2])
    with pytest.raises(ParameterError):
        PLMap([0, 0, 1], [0, 0, 1])
    f = exact_map()
    assert PLMap.from_json(f.to_json()) == f
    with pytest.raises(ParseError):
        PLMap.from_json({"values": ["0/1"]})


def test_uniform_pl_validation():
    assert validate_uniform_pl(tent(2))
    assert not validate_uniform_pl(tent(F(3, 2)))  # apex value 3/4 is interior
    assert not validate_uniform_pl(exact_map())  # slopes 4 and 8


def test_h_set():
    H = h_set(20)
    assert len(H) == 43 and H[0] == -1 and H[-1] == 1 and 0 in H
    assert F(1, 4**20) in H
    f = exact_map()
    assert all(f(h) in H for h in H if abs(h) > F(1, 4**20))
