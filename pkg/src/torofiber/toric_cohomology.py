"""Rational cohomology of complete simplicial toric strata.

Every ring here is the Stanley-Reisner presentation of an orbit closure
``V(beta)`` inside a family of cones ``P``. The family is either all cones of a
fan (the usual toric variety) or the cones of a source fan mapping onto a fixed
target cone (strata of a special fiber). In both cases the local fan at
``beta`` is ``{gamma - beta : gamma in P, gamma >= beta}`` and the linear
relations come from characters vanishing on ``beta``.

Classes are stored on a standard monomial basis per even degree. Standard
monomials are the non-pivots when relations are reduced with the largest
monomials (graded-lex over ray indices) eliminated first, so ``P^2`` gets the
basis ``1, x1, x1^2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Optional, Sequence

from . import linalg
from .errors import ConeNotInFan, NonSimplicial, NotComplete, RayNotInFan, RingMismatch
from .fans import Fan, is_complete, is_simplicial

Monomial = tuple[int, ...]  # sorted ray ids with repetition


def h_vector_from_faces(face_counts: Sequence[int], dim: int) -> list[int]:
    """``face_counts[i]`` = number of cones with ``i`` rays (``i = 0..dim``)."""
    f = list(face_counts) + [0] * (dim + 1 - len(face_counts))
    return [
        sum((-1) ** (k - i) * comb(dim - i, k - i) * f[i] for i in range(k + 1))
        for k in range(dim + 1)
    ]


def h_vector(fan: Fan) -> list[int]:
    if not is_simplicial(fan):
        raise NonSimplicial("h-vector needs a simplicial fan")
    if not is_complete(fan):
        raise NotComplete("h-vector needs a complete fan")
    return h_vector_from_faces(fan.f_vector(), fan.rank)


def betti_numbers(fan: Fan) -> list[int]:
    h = h_vector(fan)
    out = []
    for k in h:
        out += [k, 0]
    return out[:-1]


class StratumFamily:
    """A set of cones closed upward from a common image; caches stratum rings."""

    def __init__(self, rays: Sequence[Sequence[int]], cones: Iterable[Iterable[int]], rank: int):
        self.rays = tuple(tuple(r) for r in rays)
        self.rank = rank
        self.cones = frozenset(frozenset(c) for c in cones)
        self._rings: dict[tuple[int, ...], CohomologyRing] = {}
        self._linear: dict = {}

    @classmethod
    def from_fan(cls, fan: Fan) -> "StratumFamily":
        return cls(fan.rays, fan.cones, fan.rank)

    def ring(self, base: Iterable[int] = ()) -> "CohomologyRing":
        key = tuple(sorted(base))
        if frozenset(key) not in self.cones:
            raise ConeNotInFan(f"{key} is not a cone of the family")
        if key not in self._rings:
            self._rings[key] = CohomologyRing(self, key)
        return self._rings[key]

    def link(self, base: Sequence[int]) -> list[int]:
        b = set(base)
        return sorted(
            r for r in range(len(self.rays)) if r not in b and frozenset(b | {r}) in self.cones
        )

    def dual_functional(self, ray: int, cone: Sequence[int]) -> list[Fraction]:
        """``m`` with ``<m, u_ray> = 1`` and ``<m, u> = 0`` on the other rays of ``cone``."""
        key = (ray, tuple(cone))
        if key not in self._linear:
            A = [list(self.rays[r]) for r in cone]
            b = [1 if r == ray else 0 for r in cone]
            m = linalg.solve_rational(A, b)
            if m is None:
                raise NonSimplicial(f"rays of {tuple(cone)} are dependent")
            self._linear[key] = m
        return self._linear[key]

    def pairing(self, m: Sequence[Fraction], ray: int) -> Fraction:
        return sum((a * b for a, b in zip(m, self.rays[ray])), Fraction(0))

    def self_intersection(self, ray: int, cone: Sequence[int]) -> dict:
        """Restriction of the divisor of ``ray`` to ``V(cone)`` for ``ray`` in ``cone``."""
        m = self.dual_functional(ray, cone)
        out = {}
        for r in self.link(cone):
            c = self.pairing(m, r)
            if c:
                out[(r,)] = -c
        return out


class CohomologyRing:
    def __init__(self, family: StratumFamily, base: tuple[int, ...]):
        self.family = family
        self.base = base
        self.generators = tuple(family.link(base))
        b = set(base)
        self.local_cones = frozenset(
            c - b for c in family.cones if b <= c
        )
        self.dim = max((len(c) for c in self.local_cones), default=0)
        # characters vanishing on the base cone
        if base:
            ms = linalg.nullspace_rational([list(family.rays[r]) for r in base], cols=family.rank)
        else:
            ms = [[Fraction(int(i == j)) for j in range(family.rank)] for i in range(family.rank)]
        self.relations = []
        for m in ms:
            rel = {}
            for g in self.generators:
                c = family.pairing(m, g)
                if c:
                    rel[g] = c
            if rel:
                self.relations.append(rel)
        self.basis: list[list[Monomial]] = []
        self._reducers: list = []
        for d in range(self.dim + 1):
            self._build_degree(d)

    def __repr__(self):
        return f"CohomologyRing(base={self.base}, dims={self.dims()})"

    def is_face(self, mono: Monomial) -> bool:
        return frozenset(mono) in self.local_cones

    def face_monomials(self, d: int) -> list[Monomial]:
        return [
            m
            for m in itertools.combinations_with_replacement(self.generators, d)
            if self.is_face(m)
        ]

    def _build_degree(self, d: int):
        monos = self.face_monomials(d)
        rows = []
        if d > 0:
            for mu in self.face_monomials(d - 1):
                for rel in self.relations:
                    row = {}
                    for g, c in rel.items():
                        m2 = tuple(sorted(mu + (g,)))
                        if self.is_face(m2):
                            row[m2] = row.get(m2, 0) + c
                    row = {k: v for k, v in row.items() if v}
                    if row:
                        rows.append(row)
        order = sorted(monos, reverse=True)
        red, piv = linalg.rref_rows(rows, order=order)
        pset = set(piv)
        std = sorted(m for m in monos if m not in pset)
        self.basis.append(std)
        self._reducers.append((red, piv, {m: i for i, m in enumerate(std)}))

    def dims(self) -> list[int]:
        return [len(b) for b in self.basis]

    def total_dim(self) -> int:
        return sum(self.dims())

    def reduce(self, d: int, poly: Mapping[Monomial, Fraction]) -> tuple[Fraction, ...]:
        """Coordinates on the standard basis of a degree-``d`` polynomial."""
        if d < 0 or d > self.dim:
            return ()
        red, piv, pos = self._reducers[d]
        v = {m: Fraction(c) for m, c in poly.items() if c and self.is_face(m)}
        for p, row in zip(piv, red):
            c = v.get(p)
            if c:
                for j, x in row.items():
                    nv = v.get(j, 0) - c * x
                    if nv:
                        v[j] = nv
                    else:
                        v.pop(j, None)
        out = [Fraction(0)] * len(self.basis[d])
        for m, c in v.items():
            out[pos[m]] = c
        return tuple(out)

    def element(self, d: int, poly: Mapping[Monomial, Fraction]) -> "CohClass":
        return CohClass(self, {d: self.reduce(d, poly)})

    def one(self) -> "CohClass":
        return self.element(0, {(): 1})

    def basis_class(self, d: int, i: int) -> "CohClass":
        return self.element(d, {self.basis[d][i]: 1})

    def generator_image(self, ray: int, target: "CohomologyRing") -> dict:
        """Degree-one polynomial in ``target`` restricting the divisor of ``ray``."""
        if ray in target.base:
            return self.family.self_intersection(ray, target.base)
        if ray in target.generators:
            return {(ray,): Fraction(1)}
        return {}

    def restrict_poly(self, poly: Mapping[Monomial, Fraction], target: "CohomologyRing") -> dict:
        images = {}
        out: dict = {}
        for mono, c in poly.items():
            acc = {(): Fraction(c)}
            for r in mono:
                if r not in images:
                    images[r] = self.generator_image(r, target)
                img = images[r]
                nxt: dict = {}
                for m1, c1 in acc.items():
                    for m2, c2 in img.items():
                        mm = tuple(sorted(m1 + m2))
                        if target.is_face(mm):
                            nxt[mm] = nxt.get(mm, 0) + c1 * c2
                acc = nxt
                if not acc:
                    break
            for m, v in acc.items():
                out[m] = out.get(m, 0) + v
        return out

    def restriction_matrix(self, target: "CohomologyRing", d: int) -> list[list[Fraction]]:
        """Matrix (rows = target basis) of restriction in degree ``d``."""
        self._check_face_of(target)
        key = ("res", self.base, target.base, d)
        cache = self.family._linear
        if key not in cache:
            cols = []
            for mono in self.basis[d] if d <= self.dim else []:
                cols.append(target.reduce(d, self.restrict_poly({mono: 1}, target)))
            nrows = len(target.basis[d]) if d <= target.dim else 0
            cache[key] = [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]
        return cache[key]

    def gysin_matrix(self, source: "CohomologyRing", d: int) -> list[list[Fraction]]:
        """Gysin map ``H^{2d}(source) -> H^{2d+2}(self)`` for a divisor stratum.

        ``source`` must be ``V(self.base + rho)``. A standard monomial of the
        source is a face monomial of ``self`` as well, so it lifts verbatim
        through restriction; the pushforward multiplies it by ``x_rho``.
        """
        extra = set(source.base) - set(self.base)
        if not set(self.base) <= set(source.base) or len(extra) != 1:
            raise RingMismatch("gysin needs a codimension-one stratum")
        (rho,) = extra
        key = ("gys", source.base, self.base, d)
        cache = self.family._linear
        if key not in cache:
            cols = []
            for mono in source.basis[d] if d <= source.dim else []:
                cols.append(self.reduce(d + 1, {tuple(sorted(mono + (rho,))): 1}))
            nrows = len(self.basis[d + 1]) if d + 1 <= self.dim else 0
            cache[key] = [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]
        return cache[key]

    def divisor_poly(self, ray: int) -> dict:
        """Degree-one polynomial of the divisor of global ``ray`` restricted to this stratum."""
        return self.generator_image(ray, self)

    def multiplication_matrix(self, ray: int, d: int) -> list[list[Fraction]]:
        """Cup with the divisor of ``ray``, ``H^{2d} -> H^{2d+2}``."""
        key = ("mul", self.base, ray, d)
        cache = self.family._linear
        if key not in cache:
            poly = self.divisor_poly(ray)
            cols = []
            for mono in self.basis[d] if d <= self.dim else []:
                prod = {}
                for m2, c in poly.items():
                    mm = tuple(sorted(mono + m2))
                    prod[mm] = prod.get(mm, 0) + c
                cols.append(self.reduce(d + 1, prod))
            nrows = len(self.basis[d + 1]) if d + 1 <= self.dim else 0
            cache[key] = [[cols[j][i] for j in range(len(cols))] for i in range(nrows)]
        return cache[key]

    def _check_face_of(self, target: "CohomologyRing"):
        if target.family is not self.family or not set(self.base) <= set(target.base):
            raise RingMismatch("target is not a stratum of this ring")


@dataclass(frozen=True)
class CohClass:
    ring: CohomologyRing
    parts: Mapping[int, tuple[Fraction, ...]]

    def component(self, d: int) -> tuple[Fraction, ...]:
        if d in self.parts:
            return self.parts[d]
        if 0 <= d <= self.ring.dim:
            return (Fraction(0),) * len(self.ring.basis[d])
        return ()

    def is_zero(self) -> bool:
        return not any(any(v) for v in self.parts.values())

    def poly(self) -> dict:
        out = {}
        for d, coeffs in self.parts.items():
            for m, c in zip(self.ring.basis[d], coeffs):
                if c:
                    out[m] = c
        return out

    def __add__(self, other: "CohClass") -> "CohClass":
        if other.ring is not self.ring:
            raise RingMismatch("classes live in different rings")
        parts = {}
        for d in set(self.parts) | set(other.parts):
            parts[d] = tuple(a + b for a, b in zip(self.component(d), other.component(d)))
        return CohClass(self.ring, parts)

    def scale(self, c) -> "CohClass":
        return CohClass(self.ring, {d: tuple(c * x for x in v) for d, v in self.parts.items()})

    def __eq__(self, other):
        if not isinstance(other, CohClass) or other.ring is not self.ring:
            return NotImplemented
        ds = set(self.parts) | set(other.parts)
        return all(self.component(d) == other.component(d) for d in ds)

    def __hash__(self):
        return hash((id(self.ring), tuple(sorted((d, v) for d, v in self.parts.items() if any(v)))))


def sr_ring(fan: Fan) -> CohomologyRing:
    if not is_simplicial(fan):
        raise NonSimplicial("ring needs a simplicial fan")
    if not is_complete(fan):
        raise NotComplete("ring needs a complete fan")
    return StratumFamily.from_fan(fan).ring(())


def divisor_class(ring: CohomologyRing, ray: int) -> CohClass:
    """Class of the toric divisor of global ray ``ray`` restricted to ``ring``'s stratum."""
    if ring.dim == 0 and ring.family.rank == 0:
        raise RayNotInFan("rank-0 ring has no rays")
    if not 0 <= ray < len(ring.family.rays):
        raise RayNotInFan(f"ray {ray} out of range")
    if ring.dim < 1:
        return CohClass(ring, {})
    if ray in ring.base:
        return ring.element(1, ring.family.self_intersection(ray, ring.base))
    return ring.element(1, {(ray,): 1} if ray in ring.generators else {})


def cup(a: CohClass, b: CohClass) -> CohClass:
    if a.ring is not b.ring:
        raise RingMismatch("classes live in different rings")
    ring = a.ring
    parts: dict[int, dict] = {}
    for da, va in a.parts.items():
        for db, vb in b.parts.items():
            d = da + db
            if d > ring.dim:
                continue
            acc = parts.setdefault(d, {})
            for m1, c1 in zip(ring.basis[da], va):
                if not c1:
                    continue
                for m2, c2 in zip(ring.basis[db], vb):
                    if c2:
                        m = tuple(sorted(m1 + m2))
                        acc[m] = acc.get(m, 0) + c1 * c2
    return CohClass(ring, {d: ring.reduce(d, p) for d, p in parts.items()})


def restrict(a: CohClass, sigma: Iterable[int]) -> CohClass:
    """Restrict ``a`` to the orbit closure of the cone ``sigma`` (a superset of the base)."""
    ring = a.ring
    target = ring.family.ring(tuple(sorted(set(ring.base) | set(sigma))))
    poly = ring.restrict_poly(a.poly(), target)
    parts: dict[int, dict] = {}
    for m, c in poly.items():
        parts.setdefault(len(m), {})[m] = c
    return CohClass(target, {d: target.reduce(d, p) for d, p in parts.items() if d <= target.dim})


def gysin(a: CohClass, target: Optional[CohomologyRing] = None) -> CohClass:
    """Push a class on ``V(beta + rho)`` forward to ``V(beta)``.

    Without ``target`` the source base must have exactly one ray and the
    pushforward goes to the ambient ring.
    """
    src = a.ring
    if target is None:
        if len(src.base) != 1:
            raise RingMismatch("specify the target ring for deeper strata")
        target = src.family.ring(())
    parts = {}
    for d, v in a.parts.items():
        if d + 1 > target.dim:
            continue
        M = target.gysin_matrix(src, d)
        parts[d + 1] = tuple(sum((row[j] * v[j] for j in range(len(v))), Fraction(0)) for row in M)
    return CohClass(target, parts)
