from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from torofiber.errors import NotComplete
from torofiber.fans import make_fan, product_fan
from torofiber.fixtures import chain2
from torofiber.toric_cohomology import (
    CohClass,
    betti_numbers,
    cup,
    divisor_class,
    gysin,
    h_vector,
    restrict,
    sr_ring,
)
from strategies import P1, complete_fans

P2 = make_fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


def test_p1_ring():
    R = sr_ring(P1)
    assert R.dims() == [1, 1]
    assert divisor_class(R, 0) == divisor_class(R, 1)


def test_p2_ring():
    R = sr_ring(P2)
    assert R.dims() == [1, 1, 1]
    h = divisor_class(R, 0)
    assert not cup(h, h).is_zero()


def test_p1xp1_h_vector():
    assert h_vector(product_fan(P1, P1)) == [1, 2, 1]
    assert betti_numbers(P2) == [1, 0, 1, 0, 1]


def test_incomplete_fan_has_no_h_vector():
    with pytest.raises(NotComplete):
        h_vector(chain2().source)


@given(complete_fans())
def test_poincare_duality(fan):
    h = h_vector(fan)
    assert h == h[::-1]
    assert sum(h) == len(fan.max_cones)


@given(complete_fans())
def test_ring_dims_match_h_vector(fan):
    assert sr_ring(fan).dims() == h_vector(fan)


def random_class(draw, ring, d):
    coeffs = draw(st.lists(st.integers(-3, 3), min_size=len(ring.basis[d]), max_size=len(ring.basis[d])))
    return CohClass(ring, {d: tuple(Fraction(c) for c in coeffs)})


@given(complete_fans(), st.data())
def test_restriction_is_a_ring_map(fan, data):
    R = sr_ring(fan)
    ray = data.draw(st.integers(0, len(fan.rays) - 1))
    da = data.draw(st.integers(0, 1))
    db = data.draw(st.integers(0, R.dim - da))
    a, b = random_class(data.draw, R, da), random_class(data.draw, R, db)
    assert restrict(cup(a, b), (ray,)) == cup(restrict(a, (ray,)), restrict(b, (ray,)))


@given(complete_fans(), st.data())
def test_restrict_after_gysin_is_euler_class(fan, data):
    R = sr_ring(fan)
    ray = data.draw(st.integers(0, len(fan.rays) - 1))
    S = R.family.ring((ray,))
    d = data.draw(st.integers(0, S.dim))
    a = random_class(data.draw, S, d)
    lhs = restrict(gysin(a), (ray,))
    assert lhs == cup(a, divisor_class(S, ray))


@given(complete_fans(), st.data())
def test_projection_formula(fan, data):
    R = sr_ring(fan)
    ray = data.draw(st.integers(0, len(fan.rays) - 1))
    S = R.family.ring((ray,))
    a = random_class(data.draw, S, data.draw(st.integers(0, S.dim)))
    b = random_class(data.draw, R, data.draw(st.integers(0, 1)))
    assert gysin(cup(a, restrict(b, (ray,)))) == cup(gysin(a), b)


@given(complete_fans(), st.data())
def test_gysin_of_one_is_divisor(fan, data):
    R = sr_ring(fan)
    ray = data.draw(st.integers(0, len(fan.rays) - 1))
    S = R.family.ring((ray,))
    assert gysin(S.one()) == divisor_class(R, ray)


@given(complete_fans())
def test_top_degree_is_one_dimensional(fan):
    R = sr_ring(fan)
    assert R.dims()[R.dim] == 1
    assert R.dims()[0] == 1
