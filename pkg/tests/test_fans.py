import pytest
from hypothesis import given
from hypothesis import strategies as st

from torofiber.errors import FaceIntersectionViolation, NonPrimitiveRay, NotStronglyConvex, RayNotInFan
from torofiber.fans import (
    Cone,
    cone_multiplicity,
    is_complete,
    is_simplicial,
    is_unimodular,
    make_fan,
    product_fan,
    star_fan,
)
from torofiber.fixtures import chain2
from torofiber.toric_cohomology import h_vector
from strategies import P1, complete_fans


def test_projective_line():
    assert len(P1.cones) == 3 and is_complete(P1)


def test_chain2_fan_is_unimodular_not_complete():
    src = chain2().source
    assert is_simplicial(src) and is_unimodular(src)
    assert not is_complete(src)


def test_star_of_middle_ray_is_p1():
    st_ = star_fan(chain2().source, (1,))
    assert sorted(st_.rays) == [(-1,), (1,)]
    assert is_complete(st_.fan())


def test_multiplicity():
    assert cone_multiplicity([(1, 0), (1, 2)]) == 2


def test_rejections():
    with pytest.raises(NonPrimitiveRay):
        make_fan(2, [(2, 0), (0, 1)], [(0, 1)])
    with pytest.raises(NotStronglyConvex):
        make_fan(1, [(1,), (-1,)], [(0, 1)])
    with pytest.raises(FaceIntersectionViolation):
        make_fan(2, [(1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2)])
    with pytest.raises(RayNotInFan):
        P1.ray_index((2,))


def test_cone_contains():
    c = Cone(((1, 0), (1, 2)))
    assert c.contains((2, 1)) and not c.contains((0, 1))


@given(complete_fans())
def test_random_fans_complete(fan):
    assert is_complete(fan)
    assert is_simplicial(fan)


@given(complete_fans())
def test_removing_a_cone_breaks_completeness(fan):
    smaller = make_fan(fan.rank, fan.rays, fan.max_cones[1:])
    assert not is_complete(smaller)


@given(complete_fans(), st.data())
def test_star_fans_are_complete(fan, data):
    c = data.draw(st.sampled_from(sorted(fan.cones)))
    s = star_fan(fan, c)
    assert s.rank == fan.rank - len(c)
    assert is_complete(s.fan())


@given(complete_fans(), st.data())
def test_star_composition(fan, data):
    """star(star(F, a), b) and star(F, a + b) have the same face numbers."""
    two = sorted(c for c in fan.cones if len(c) == 2)
    if not two:
        return
    a, b = data.draw(st.sampled_from(two))
    inner = star_fan(fan, (a,))
    k = inner.source_rays.index(b)
    twice = star_fan(inner.fan(), (k,)).fan()
    once = star_fan(fan, (a, b)).fan()
    assert twice.f_vector() == once.f_vector()
    assert h_vector(twice) == h_vector(once)


def test_product_fan_f_vector():
    f = product_fan(P1, P1)
    assert f.f_vector() == [1, 4, 4]
    assert is_complete(f)
