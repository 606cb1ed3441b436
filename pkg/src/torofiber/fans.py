"""Simplicial fans and their star fans.

A fan stores its rays once (primitive integer vectors) and refers to cones by
sorted tuples of ray indices. Only simplicial fans are accepted: every maximal
cone must have linearly independent generators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import linalg
from .errors import (
    ConeNotInFan,
    FaceIntersectionViolation,
    NonPrimitiveRay,
    NonSimplicial,
    NotStronglyConvex,
    RayNotInFan,
)

Vector = tuple[int, ...]


@dataclass(frozen=True)
class Cone:
    """A cone given by primitive generators. ``indices`` refers to a parent fan."""

    generators: tuple[Vector, ...]
    indices: tuple[int, ...] = ()

    @property
    def dim(self) -> int:
        return linalg.rank_rational([list(g) for g in self.generators])

    @property
    def is_simplicial(self) -> bool:
        return self.dim == len(self.generators)

    def contains(self, v: Sequence) -> bool:
        if not self.generators:
            return not any(v)
        A = linalg.from_columns(self.generators, len(v))
        return linalg.nonneg_solution(A, list(v)) is not None


def faces(cone: Cone) -> list[Cone]:
    """All faces of a simplicial cone (the 2^k subsets of its generators)."""
    if not cone.is_simplicial:
        raise NonSimplicial(f"cone {cone.generators} is not simplicial")
    out = []
    k = len(cone.generators)
    for size in range(k + 1):
        for sub in itertools.combinations(range(k), size):
            idx = tuple(cone.indices[i] for i in sub) if cone.indices else ()
            out.append(Cone(tuple(cone.generators[i] for i in sub), idx))
    return out


def is_strongly_convex(generators: Sequence[Vector]) -> bool:
    if not generators:
        return True
    d = len(generators[0])
    # a nonzero nonnegative combination summing to zero means a line
    A = linalg.from_columns(generators, d) + [[1] * len(generators)]
    b = [0] * d + [1]
    return linalg.nonneg_solution(A, b) is None


def _cones_meet_properly(gens1, gens2, common) -> bool:
    """True iff the intersection of the two simplicial cones is cone(common)."""
    only1 = [g for g in gens1 if g not in common]
    only2 = [g for g in gens2 if g not in common]
    if not only1 and not only2:
        return True
    d = len((gens1 or gens2)[0])
    cols = list(only1) + [tuple(-x for x in g) for g in only2]
    cols += list(common) + [tuple(-x for x in g) for g in common]
    A = linalg.from_columns(cols, d)
    norm = [1] * (len(only1) + len(only2)) + [0] * (2 * len(common))
    A = A + [norm]
    return linalg.nonneg_solution(A, [0] * d + [1]) is None


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple[Vector, ...]
    max_cones: tuple[tuple[int, ...], ...]
    cones: frozenset = field(repr=False, compare=False, default=frozenset())

    def cone(self, indices: Iterable[int]) -> Cone:
        idx = tuple(sorted(indices))
        if frozenset(idx) not in self.cones:
            raise ConeNotInFan(f"{idx} is not a cone of the fan")
        return Cone(tuple(self.rays[i] for i in idx), idx)

    def has_cone(self, indices: Iterable[int]) -> bool:
        return frozenset(indices) in self.cones

    def sorted_cones(self) -> list[tuple[int, ...]]:
        return sorted((tuple(sorted(c)) for c in self.cones), key=lambda c: (len(c), c))

    def cones_of_dim(self, k: int) -> list[tuple[int, ...]]:
        return [c for c in self.sorted_cones() if len(c) == k]

    def ray_index(self, v: Sequence[int]) -> int:
        try:
            return self.rays.index(tuple(v))
        except ValueError:
            raise RayNotInFan(f"{tuple(v)} is not a ray of the fan") from None

    def find_cone(self, generators: Sequence[Sequence[int]]) -> tuple[int, ...]:
        idx = tuple(sorted(self.ray_index(g) for g in generators))
        if not self.has_cone(idx):
            raise ConeNotInFan(f"{idx} is not a cone of the fan")
        return idx

    def in_support(self, v: Sequence) -> bool:
        return any(self.cone(c).contains(v) for c in self.max_cones)

    def f_vector(self) -> list[int]:
        top = max((len(c) for c in self.cones), default=0)
        return [len(self.cones_of_dim(k)) for k in range(top + 1)]


def make_fan(rank: int, rays: Sequence[Sequence[int]], max_cones: Sequence[Iterable[int]]) -> Fan:
    """Validate and build a simplicial fan with its face closure."""
    rays_t = tuple(tuple(int(x) for x in r) for r in rays)
    for r in rays_t:
        if len(r) != rank:
            raise ValueError(f"ray {r} has wrong length for rank {rank}")
        if not any(r) or linalg.primitive(r) != r:
            raise NonPrimitiveRay(f"ray {r} is not primitive")
    if len(set(rays_t)) != len(rays_t):
        raise ValueError("duplicate rays")
    maxes = sorted({tuple(sorted(set(c))) for c in max_cones}, key=lambda c: (len(c), c))
    if not maxes:
        maxes = [()]
    for c in maxes:
        for i in c:
            if not 0 <= i < len(rays_t):
                raise IndexError(f"ray index {i} out of range")
        gens = [rays_t[i] for i in c]
        if not is_strongly_convex(gens):
            raise NotStronglyConvex(f"cone {c} contains a line")
        if linalg.rank_rational([list(g) for g in gens]) < len(gens):
            raise NonSimplicial(f"cone {c} is not simplicial")
    # drop cones that are faces of others
    maxes = [c for c in maxes if not any(set(c) < set(d) for d in maxes)]
    for c1, c2 in itertools.combinations(maxes, 2):
        common = [rays_t[i] for i in sorted(set(c1) & set(c2))]
        if not _cones_meet_properly([rays_t[i] for i in c1], [rays_t[i] for i in c2], common):
            raise FaceIntersectionViolation(f"cones {c1} and {c2} overlap improperly")
    cones = set()
    for c in maxes:
        for k in range(len(c) + 1):
            for sub in itertools.combinations(c, k):
                cones.add(frozenset(sub))
    return Fan(rank, rays_t, tuple(maxes), frozenset(cones))


def is_simplicial(fan: Fan) -> bool:
    return all(fan.cone(c).is_simplicial for c in fan.max_cones)


def cone_multiplicity(generators: Sequence[Vector]) -> int:
    """Index of the generator lattice inside the saturated lattice of the span."""
    if not generators:
        return 1
    d = len(generators[0])
    B = linalg.saturation_basis(generators, d)
    k = len(generators)
    C = [[0] * k for _ in range(k)]
    for j, g in enumerate(generators):
        coords = linalg.lattice_coordinates(B, g)
        for i in range(k):
            C[i][j] = int(coords[i])
    return abs(linalg.det(C))


def is_unimodular(fan: Fan) -> bool:
    return is_simplicial(fan) and all(
        cone_multiplicity([fan.rays[i] for i in c]) == 1 for c in fan.max_cones
    )


def is_complete(fan: Fan) -> bool:
    """Wall-count completeness test.

    Every maximal cone must be full-dimensional, every codimension-one cone must
    lie in exactly two maximal cones, and the maximal cones must be connected
    through shared walls.
    """
    r = fan.rank
    if r == 0:
        return True
    if any(len(c) != r for c in fan.max_cones) or not fan.max_cones:
        return False
    walls: dict[frozenset, list[int]] = {}
    for k, c in enumerate(fan.max_cones):
        for sub in itertools.combinations(c, r - 1):
            walls.setdefault(frozenset(sub), []).append(k)
    if any(len(v) != 2 for v in walls.values()):
        return False
    seen = {0}
    stack = [0]
    adj: dict[int, set] = {}
    for a, b in walls.values():
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    while stack:
        x = stack.pop()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(fan.max_cones)


@dataclass(frozen=True)
class StarFanData:
    rank: int
    rays: tuple[Vector, ...]
    cones: tuple[tuple[int, ...], ...]
    projection: linalg.Matrix
    source_rays: tuple[int, ...]  # parent ray index behind each star-fan ray

    def fan(self) -> Fan:
        return make_fan(self.rank, self.rays, self.cones)


def quotient_projection(vectors: Sequence[Vector], ambient: int) -> linalg.Matrix:
    """Integer matrix ``P`` with kernel the saturated span of ``vectors`` and ``P`` onto."""
    if not vectors:
        return linalg.identity(ambient)
    W = linalg.kernel_basis([list(v) for v in vectors], cols=ambient)
    return [list(c) for c in linalg.columns(W)]


def star_fan(fan: Fan, sigma: Sequence[int]) -> StarFanData:
    sigma = tuple(sorted(sigma))
    if not fan.has_cone(sigma):
        raise ConeNotInFan(f"{sigma} is not a cone of the fan")
    P = quotient_projection([fan.rays[i] for i in sigma], fan.rank)
    new_rank = len(P)
    link_rays = sorted(
        i for i in range(len(fan.rays)) if i not in sigma and fan.has_cone(sigma + (i,))
    )
    images = []
    for i in link_rays:
        images.append(linalg.primitive(linalg.matvec(P, fan.rays[i])) if P else ())
    pos = {i: k for k, i in enumerate(link_rays)}
    cones = []
    for c in fan.max_cones:
        if set(sigma) <= set(c):
            cones.append(tuple(sorted(pos[i] for i in c if i not in sigma)))
    return StarFanData(new_rank, tuple(images), tuple(sorted(set(cones))), P, tuple(link_rays))


def product_fan(f1: Fan, f2: Fan) -> Fan:
    rays = [tuple(r) + (0,) * f2.rank for r in f1.rays]
    rays += [(0,) * f1.rank + tuple(r) for r in f2.rays]
    off = len(f1.rays)
    maxes = [tuple(a) + tuple(b + off for b in c) for a in f1.max_cones for c in f2.max_cones]
    return make_fan(f1.rank + f2.rank, rays, maxes)
