"""Random fans for property tests."""

import math

from hypothesis import strategies as st

from torofiber import linalg
from torofiber.fans import make_fan, product_fan


def _angle(v):
    return math.atan2(v[1], v[0])


@st.composite
def complete_fans_2d(draw, max_rays=7, bound=4):
    vecs = draw(st.lists(st.tuples(st.integers(-bound, bound), st.integers(-bound, bound)),
                         min_size=3, max_size=max_rays))
    rays = sorted({linalg.primitive(v) for v in vecs if any(v)}, key=_angle)
    # need every angular gap below pi
    from hypothesis import assume

    assume(len(rays) >= 3)
    for a, b in zip(rays, rays[1:] + rays[:1]):
        assume(a[0] * b[1] - a[1] * b[0] > 0)
    k = len(rays)
    return make_fan(2, rays, [(i, (i + 1) % k) for i in range(k)])


def stellar(fan, cone):
    """Star subdivision at the sum of the generators of ``cone``."""
    v = linalg.primitive([sum(fan.rays[i][k] for i in cone) for k in range(fan.rank)])
    if v in fan.rays:
        return fan
    new = len(fan.rays)
    maxes = []
    for c in fan.max_cones:
        if set(cone) <= set(c):
            for drop in cone:
                maxes.append(tuple(sorted([i for i in c if i != drop] + [new])))
        else:
            maxes.append(c)
    return make_fan(fan.rank, list(fan.rays) + [v], maxes)


P1 = make_fan(1, [(1,), (-1,)], [(0,), (1,)])


@st.composite
def complete_fans(draw):
    base = draw(complete_fans_2d(max_rays=5, bound=3))
    fan = draw(st.sampled_from([base, product_fan(base, P1)]))
    for _ in range(draw(st.integers(0, 2))):
        cones = sorted(c for c in fan.cones if len(c) >= 2)
        fan = stellar(fan, draw(st.sampled_from(cones)))
    return fan
