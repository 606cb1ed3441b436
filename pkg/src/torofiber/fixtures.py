"""Named fiber spaces shared by the test suite and the CLI."""

from __future__ import annotations

from .fans import make_fan
from .fiber_space import ToricFiberSpace, make_fiber_space, product_fiber_space


def _half_line():
    return make_fan(1, [(1,)], [(0,)])


def point_target():
    return make_fan(0, [], [])


def a1() -> ToricFiberSpace:
    """``y = x1 x2`` on the affine plane."""
    src = make_fan(2, [(1, 0), (0, 1)], [(0, 1)])
    return make_fiber_space(src, _half_line(), [[1, 1]], "A1")


def nonred() -> ToricFiberSpace:
    """``y = x^2``."""
    return make_fiber_space(make_fan(1, [(1,)], [(0,)]), _half_line(), [[2]], "NONRED")


def monomial(exponents, name="") -> ToricFiberSpace:
    """``y = prod x_i^{l_i}`` on affine space."""
    n = len(exponents)
    rays = [tuple(int(i == k) for i in range(n)) for k in range(n)]
    src = make_fan(n, rays, [tuple(range(n))])
    return make_fiber_space(src, _half_line(), [list(exponents)], name)


def quad() -> ToricFiberSpace:
    """``y1 = x1 x2``, ``y2 = x3 x4``."""
    src = make_fan(4, [tuple(int(i == k) for i in range(4)) for k in range(4)], [(0, 1, 2, 3)])
    tgt = make_fan(2, [(1, 0), (0, 1)], [(0, 1)])
    return make_fiber_space(src, tgt, [[1, 1, 0, 0], [0, 0, 1, 1]], "QUAD")


def chain(k: int = 2, shear: int = 0, name: str = "") -> ToricFiberSpace:
    """Degeneration of P^1 into a chain of ``k`` lines over a disc.

    Rays ``(1,0), (c,1), (c-1,1), ..., (c-k+1,1), (-1,0)`` in the upper half plane,
    ``c = shear``, mapping to the half line by the second coordinate.
    """
    vertical = [(shear - i, 1) for i in range(k)]
    rays = [(1, 0)] + vertical + [(-1, 0)]
    cones = [(i, i + 1) for i in range(k + 1)]
    src = make_fan(2, rays, cones)
    return make_fiber_space(src, _half_line(), [[0, 1]], name or f"CHAIN{k}")


def chain2() -> ToricFiberSpace:
    return chain(2, 0, "CHAIN2")


def projective_line() -> ToricFiberSpace:
    """``P^1`` over a point."""
    return make_fiber_space(make_fan(1, [(1,), (-1,)], [(0,), (1,)]), point_target(), [], "P1")


def projective_plane() -> ToricFiberSpace:
    src = make_fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])
    return make_fiber_space(src, point_target(), [], "P2")


def chain2_x_chain2() -> ToricFiberSpace:
    return product_fiber_space(chain2(), chain2(), "CHAIN2xCHAIN2")


def chain2_x_p1() -> ToricFiberSpace:
    return product_fiber_space(chain2(), projective_line(), "CHAIN2xP1")


FIXTURES = {
    "A1": a1,
    "NONRED": nonred,
    "QUAD": quad,
    "CHAIN2": chain2,
    "CHAIN2xCHAIN2": chain2_x_chain2,
    "CHAIN2xP1": chain2_x_p1,
}

# default base cone for each fixture (maximal target cone)
def default_tau(fs: ToricFiberSpace) -> tuple[int, ...]:
    if not fs.target.max_cones:
        return ()
    return max(fs.target.max_cones, key=lambda c: (len(c), c))


def random_product(rng, max_base: int = 3, max_factors: int = 3, max_rank: int = 5) -> ToricFiberSpace:
    """Product of chain degenerations and trivial ``P^1``/``P^2`` factors.

    At least one chain factor and at most ``max_base`` of them, so the base
    rank is between 1 and ``max_base``; total source rank at most ``max_rank``.
    """
    while True:
        nf = rng.randint(1, max_factors)
        nbase = rng.randint(1, min(max_base, nf))
        parts = [chain(rng.randint(1, 3), rng.randint(-2, 2)) for _ in range(nbase)]
        parts += [rng.choice([projective_line, projective_plane])() for _ in range(nf - nbase)]
        if sum(p.n for p in parts) > max_rank:
            continue
        rng.shuffle(parts)
        fs = parts[0]
        for p in parts[1:]:
            fs = product_fiber_space(fs, p)
        return fs
