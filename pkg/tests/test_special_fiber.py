import pytest

from torofiber.errors import NotReduced
from torofiber.fixtures import FIXTURES, default_tau, nonred
from torofiber.special_fiber import (
    AMBIENT,
    dual_complex,
    exterior_power_sheaf,
    label,
    mv_cohomology,
    strata,
    strata_euler_characteristic,
)

PROPER = ["CHAIN2", "CHAIN2xCHAIN2", "CHAIN2xP1"]


def build(name):
    fs = FIXTURES[name]()
    return strata(fs, default_tau(fs))


def test_quad_identity_class():
    st = build("QUAD")
    assert st.identity_class((1, 4)) == [(1, 4), (2, 3), (1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4), (1, 2, 3, 4)]
    assert label(st.strata[(1, 4)]) == "V(0,1,2,3)"


def test_quad_pair_of_components_meeting_in_a_curve():
    # the pair {1,3} meets along x1 = x2 = x3 = 0
    st = build("QUAD")
    assert st.strata[(1, 3)] == (0, 1, 2)
    assert st.stratum_dim(st.strata[(1, 3)]) == 1


def test_chain2_dual_complex():
    dc = dual_complex(build("CHAIN2"))
    assert dc.f_vector() == [2, 1]
    assert dc.components() == 1
    assert "E1 -- E2" in dc.dot()


def test_nonreduced_rejected():
    with pytest.raises(NotReduced):
        strata(nonred(), (0,))


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_components_have_fiber_dimension(name):
    fs = FIXTURES[name]()
    if not fs.flags()["reduced"]:
        return
    st = build(name)
    assert all(st.stratum_dim(c) == fs.n - fs.m for c in st.components)


@pytest.mark.parametrize("name,betti,chi", [
    ("CHAIN2", [1, 0, 2], 3),
    ("CHAIN2xCHAIN2", [1, 0, 4, 0, 4], 9),
    ("CHAIN2xP1", [1, 0, 3, 0, 2], 6),
])
def test_mayer_vietoris(name, betti, chi):
    st = build(name)
    b = mv_cohomology(st)
    assert b == betti
    assert sum((-1) ** k * x for k, x in enumerate(b)) == chi == strata_euler_characteristic(st)


@pytest.mark.parametrize("name", PROPER)
def test_special_fiber_is_connected(name):
    assert dual_complex(build(name)).components() == 1
    assert mv_cohomology(build(name))[0] == 1


def test_exterior_power_zero_is_ambient():
    for l in range(3):
        sh = exterior_power_sheaf(0, [frozenset({(0,)}), frozenset({(1,)})], l)
        assert sh.terms == ((tuple(sorted(AMBIENT)), 1),)


def test_exterior_power_expansion():
    G = [frozenset({(0,)}), frozenset({(1,)})]
    sh = exterior_power_sheaf(1, G, 2)
    assert sh.rank_on_ambient() == 2
    assert sh.multiplicity(frozenset({(0,)})) == 1
    sh2 = exterior_power_sheaf(2, G, 1)
    assert sh2.multiplicity(frozenset({(0,)})) == 1
    assert sh2.multiplicity(frozenset({(0, 1)})) == 1
