import pytest

from torofiber.errors import InvariantNegative
from torofiber.fiber_space import ChartModel, chart_model
from torofiber.fixtures import FIXTURES, chain2_x_p1, default_tau
from torofiber.rob import blowup_chart_map, bundle_tower, fiber_invariants
from torofiber.special_fiber import strata


def full_chart(name):
    fs = FIXTURES[name]()
    return chart_model(fs, fs.source.max_cones[0])


def test_fiber_type_examples():
    assert fiber_invariants(full_chart("A1")).as_tuple() == (1, 1, 0)
    assert fiber_invariants(full_chart("QUAD")).as_tuple() == (2, 2, 0)
    smooth = ChartModel(3, 1, 0, 0, (0,), ())
    assert fiber_invariants(smooth).as_tuple() == (0, 0, 2)


def test_negative_invariant():
    with pytest.raises(InvariantNegative):
        fiber_invariants(ChartModel(1, 2, 1, 1, (0, 1), (1,)))


def test_chart_formulas():
    assert blowup_chart_map(full_chart("A1")).formulas() == ["s1 = r1*r2", "phi1 = theta1 + theta2"]
    assert blowup_chart_map(full_chart("NONRED")).formulas() == ["s1 = r1^2", "phi1 = 2*theta1"]
    assert blowup_chart_map(full_chart("QUAD")).formulas() == [
        "s1 = r1*r2", "phi1 = theta1 + theta2", "s2 = r3*r4", "phi2 = theta3 + theta4"]


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_chart_invariants_are_consistent(name):
    fs = FIXTURES[name]()
    for sigma in fs.source.cones:
        ch = chart_model(fs, sigma)
        inv = fiber_invariants(ch)
        assert inv.a == inv.b
        # real fiber dimension does not depend on the chart
        assert inv.a + inv.b + 2 * inv.c == 2 * (fs.n - fs.m)
        # angular part is the exponent matrix
        bm = blowup_chart_map(ch)
        for j in range(ch.m_prime):
            lo, hi = ch.blocks[j], ch.blocks[j + 1]
            assert bm.angular[j][lo:hi] == ch.block(j)
            assert not any(bm.angular[j][:lo]) and not any(bm.angular[j][hi:])


def test_chain2_towers():
    fs = FIXTURES["CHAIN2"]()
    st = strata(fs, default_tau(fs))
    assert bundle_tower(st, (1,)).length == 0
    t = bundle_tower(st, (1, 2))
    assert t.length == 1 and t.trivial_circles == 1
    assert t.euler_classes[0].is_zero()


def test_chain2_x_p1_tower_on_a_curve():
    fs = chain2_x_p1()
    st = strata(fs, default_tau(fs))
    t = bundle_tower(st, (1, 2))
    assert t.length == 1
    # the curve is the P^1 factor and the normal circle bundle is trivial on it
    assert st.ring(st.strata[(1, 2)]).dims() == [1, 1]
    assert t.euler_classes[0].is_zero()
