from math import gcd, prod
from functools import reduce

import pytest
from hypothesis import given
from hypothesis import strategies as st

from torofiber.errors import DisconnectedCover, NotProper, NotReduced, TargetNotSmooth
from torofiber.fans import is_complete, make_fan
from torofiber.fiber_space import (
    ChartModel,
    chart_fiber_space,
    chart_model,
    check_proper,
    check_reduced,
    generic_fiber_fan,
    kummer_base_change,
    make_fiber_space,
    product_fiber_space,
    reduction_degrees,
)
from torofiber.fixtures import FIXTURES, monomial, nonred
from torofiber.toric_cohomology import h_vector

FLAGS = {
    "A1": dict(toroidal=True, equidimensional=True, reduced=True, proper=False),
    "NONRED": dict(toroidal=True, equidimensional=True, reduced=False, proper=True),
    "QUAD": dict(toroidal=True, equidimensional=True, reduced=True, proper=False),
    "CHAIN2": dict(toroidal=True, equidimensional=True, reduced=True, proper=True),
    "CHAIN2xCHAIN2": dict(toroidal=True, equidimensional=True, reduced=True, proper=True),
    "CHAIN2xP1": dict(toroidal=True, equidimensional=True, reduced=True, proper=True),
}


@pytest.mark.parametrize("name", sorted(FLAGS))
def test_fixture_flags(name):
    assert FIXTURES[name]().flags() == FLAGS[name]


@pytest.mark.parametrize("name,h", [("CHAIN2", [1, 1]), ("CHAIN2xCHAIN2", [1, 2, 1]), ("CHAIN2xP1", [1, 2, 1])])
def test_generic_fiber(name, h):
    fan = generic_fiber_fan(FIXTURES[name]())
    assert is_complete(fan)
    assert h_vector(fan) == h


def test_generic_fiber_needs_proper_and_reduced():
    with pytest.raises(NotProper):
        generic_fiber_fan(FIXTURES["A1"]())
    with pytest.raises(NotReduced):
        generic_fiber_fan(nonred())


def test_nonred_reduction():
    res = kummer_base_change(nonred())
    assert res.degrees == (2,)
    assert res.components == 2
    assert res.space.phi == ((1,),)
    assert check_reduced(res.space)


def test_x1sq_x2cube_reduction():
    fs = monomial([2, 3])
    assert reduction_degrees(fs) == (6,)
    res = kummer_base_change(fs)
    assert res.source_index == 6 and res.components == 1
    assert check_reduced(res.space)


def test_x1sq_x2sq_cover_has_two_components():
    res = kummer_base_change(monomial([2, 2]))
    assert res.components == 2 and res.source_index == 1
    with pytest.raises(DisconnectedCover):
        kummer_base_change(monomial([2, 2]), strict=True)


def test_singular_target_rejected():
    src = make_fan(2, [(1, 0), (0, 1)], [(0, 1)])
    tgt = make_fan(2, [(1, 0), (1, 2)], [(0, 1)])
    fs = make_fiber_space(src, tgt, [[1, 1], [0, 2]])
    with pytest.raises(TargetNotSmooth):
        kummer_base_change(fs)


exponents = st.lists(st.integers(1, 6), min_size=1, max_size=3)


@given(exponents, exponents)
def test_kummer_makes_fibers_reduced(l1, l2):
    fs = product_fiber_space(monomial(l1), monomial(l2))
    res = kummer_base_change(fs)
    assert check_reduced(res.space)
    assert prod(res.degrees) % res.source_index == 0
    # one cover component per element of Z^m / (D Z^m + phi Z^n)
    expected = gcd(res.degrees[0], reduce(gcd, l1)) * gcd(res.degrees[1], reduce(gcd, l2))
    assert res.components == expected


@given(exponents)
def test_reduction_degree_is_lcm(l):
    from math import lcm

    assert reduction_degrees(monomial(l)) == (lcm(*l),)


@given(st.lists(st.lists(st.integers(1, 3), min_size=1, max_size=2), min_size=1, max_size=2),
       st.integers(0, 2))
def test_chart_roundtrip(blocks, horizontal):
    starts = [0]
    for b in blocks:
        starts.append(starts[-1] + len(b))
    n1 = starts[-1] + horizontal
    ch = ChartModel(n1 + 1, len(blocks) + 1, n1, len(blocks), tuple(starts), tuple(x for b in blocks for x in b))
    assert ch.problems() == []
    fs = chart_fiber_space(ch)
    back = chart_model(fs, tuple(range(n1)))
    assert back == ch


def test_proper_detects_missing_cone():
    src = make_fan(2, [(1, 0), (0, 1), (-1, 1)], [(0, 1)])
    fs = make_fiber_space(src, make_fan(1, [(1,)], [(0,)]), [[0, 1]])
    assert not check_proper(fs)
