"""Special fibers of toric fiber spaces.

Fix a target cone ``tau`` and look at the fiber over the distinguished point of
its orbit. The relevant source cones are ``P = {gamma : phi(gamma) = tau}``.
Components are the orbit closures of the minimal cones of ``P``; the stratum
``E_I`` is the orbit closure of the join of the components' cones, which is
irreducible, or empty when the join is not a cone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Iterable, Optional, Sequence

from . import linalg
from .errors import NotProper, NotReduced
from .fiber_space import ToricFiberSpace, check_proper, check_reduced
from .toric_cohomology import CohomologyRing, StratumFamily

Cone = tuple[int, ...]
IndexSet = tuple[int, ...]  # 1-based component numbers


@dataclass
class SpecialFiberStratification:
    fs: ToricFiberSpace
    tau: Cone
    components: list[Cone]
    cones: list[Cone]  # the poset P
    strata: dict[IndexSet, Cone] = field(default_factory=dict)
    _family: Optional[StratumFamily] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.fs.n - self.fs.m

    def stratum_dim(self, cone: Cone) -> int:
        return self.fs.n - len(cone) - (self.fs.m - len(self.tau))

    @property
    def family(self) -> StratumFamily:
        if self._family is None:
            self._family = StratumFamily(self.fs.source.rays, self.cones, self.fs.n)
        return self._family

    def ring(self, cone: Cone) -> CohomologyRing:
        return self.family.ring(cone)

    def join(self, index_set: Iterable[int]) -> Optional[Cone]:
        rays = set()
        for i in index_set:
            rays |= set(self.components[i - 1])
        c = tuple(sorted(rays))
        return c if self.fs.source.has_cone(c) else None

    def nonempty(self, t: int) -> list[IndexSet]:
        """Index sets of size ``t+1`` with nonempty stratum, sorted."""
        return sorted(I for I in self.strata if len(I) == t + 1)

    def identifications(self) -> list[list[IndexSet]]:
        groups: dict[Cone, list[IndexSet]] = {}
        for I, c in self.strata.items():
            groups.setdefault(c, []).append(I)
        out = [sorted(v, key=lambda I: (len(I), I)) for v in groups.values() if len(v) > 1]
        return sorted(out, key=lambda g: (len(g[0]), g[0]))

    def identity_class(self, index_set: Iterable[int]) -> list[IndexSet]:
        c = self.strata.get(tuple(sorted(index_set)))
        return sorted((I for I, d in self.strata.items() if d == c), key=lambda I: (len(I), I))

    def depth(self) -> int:
        """Largest ``t+1`` with a nonempty ``E_{i_0..i_t}`` counted up to identification."""
        return max((len(I) for I in self.strata), default=0)

    def nesting_depth(self) -> int:
        """Length of the longest chain of distinct strata under inclusion."""
        cones = sorted({frozenset(c) for c in self.strata.values()}, key=len)
        best: dict = {}
        for c in cones:
            best[c] = 1 + max((best[d] for d in best if d < c), default=0)
        return max(best.values(), default=0)

    def table(self) -> list[dict]:
        rows = []
        for I in sorted(self.strata, key=lambda I: (len(I), I)):
            c = self.strata[I]
            rows.append({
                "indices": list(I),
                "cone": list(c),
                "dim": self.stratum_dim(c),
                "stratum_id": label(c),
            })
        return rows


def label(cone: Cone) -> str:
    return "V(" + ",".join(str(i) for i in cone) + ")"


def fiber_components(fs: ToricFiberSpace, tau: Sequence[int]) -> SpecialFiberStratification:
    if not check_reduced(fs):
        raise NotReduced("special fiber needs reduced fibers")
    tau = tuple(sorted(tau))
    P = fs.cones_over(tau)
    pset = set(P)
    minimal = [c for c in P if not any(set(d) < set(c) for d in pset)]
    return SpecialFiberStratification(fs, tau, sorted(minimal), P)


def strata(fs: ToricFiberSpace, tau: Sequence[int]) -> SpecialFiberStratification:
    st = fiber_components(fs, tau)
    k = len(st.components)
    for size in range(1, k + 1):
        found = False
        for I in itertools.combinations(range(1, k + 1), size):
            c = st.join(I)
            if c is not None:
                st.strata[I] = c
                found = True
        if not found:
            break
    return st


# ---------------------------------------------------------------------------
# dual complex


@dataclass(frozen=True)
class DualComplex:
    vertices: tuple[int, ...]
    simplices: tuple[IndexSet, ...]
    identifications: tuple[tuple[IndexSet, ...], ...]

    def f_vector(self) -> list[int]:
        top = max((len(s) for s in self.simplices), default=0)
        return [sum(1 for s in self.simplices if len(s) == k) for k in range(1, top + 1)]

    def components(self) -> int:
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for s in self.simplices:
            for a, b in zip(s, s[1:]):
                parent[find(a)] = find(b)
        return len({find(v) for v in self.vertices})

    def dot(self, name: str = "dual") -> str:
        lines = [f"graph {name} {{"]
        for v in self.vertices:
            lines.append(f'  E{v} [label="E{v}"];')
        for s in self.simplices:
            if len(s) == 2:
                lines.append(f"  E{s[0]} -- E{s[1]};")
        for s in self.simplices:
            if len(s) > 2:
                lines.append("  // simplex " + " ".join(f"E{i}" for i in s))
        for g in self.identifications:
            lines.append("  // identified " + " = ".join("E" + "".join(map(str, I)) for I in g))
        lines.append("}")
        return "\n".join(lines) + "\n"


def dual_complex(st: SpecialFiberStratification) -> DualComplex:
    simp = tuple(sorted(st.strata, key=lambda I: (len(I), I)))
    verts = tuple(range(1, len(st.components) + 1))
    return DualComplex(verts, simp, tuple(tuple(g) for g in st.identifications()))


# ---------------------------------------------------------------------------
# cohomology


def cech_matrix(st: SpecialFiberStratification, t: int, degree: int) -> list[list]:
    """Alternating restriction map in cohomological degree ``2*degree`` from ``C^t`` to ``C^{t+1}``."""
    src = st.nonempty(t)
    dst = st.nonempty(t + 1)
    col_off, row_off = _offsets(st, src, degree), _offsets(st, dst, degree)
    ncols = sum(_dim(st, I, degree) for I in src)
    nrows = sum(_dim(st, J, degree) for J in dst)
    M = [[0] * ncols for _ in range(nrows)]
    for J in dst:
        for pos, i in enumerate(J):
            I = J[:pos] + J[pos + 1 :]
            if I not in st.strata:
                continue
            sign = -1 if pos % 2 else 1
            R = st.ring(st.strata[I]).restriction_matrix(st.ring(st.strata[J]), degree)
            for a, row in enumerate(R):
                for b, x in enumerate(row):
                    if x:
                        M[row_off[J] + a][col_off[I] + b] += sign * x
    return M


def _dim(st, I, degree) -> int:
    R = st.ring(st.strata[I])
    return len(R.basis[degree]) if 0 <= degree <= R.dim else 0


def _offsets(st, sets, degree) -> dict:
    off, acc = {}, 0
    for I in sets:
        off[I] = acc
        acc += _dim(st, I, degree)
    return off


def _rank(M) -> int:
    if not M or not M[0]:
        return 0
    return linalg.rank_rational(M)


def mv_cohomology(st: SpecialFiberStratification) -> list[int]:
    """Betti numbers of the special fiber from the Mayer-Vietoris double complex.

    The strata cohomology is pure, so the spectral sequence of the double
    complex stops at ``E_2`` and ``b_k`` is the sum of ``H^t`` of the Cech rows
    in cohomological degree ``k - t``.
    """
    if not check_proper(st.fs):
        raise NotProper("strata are not complete")
    T = st.depth()
    top = max((R.dim for R in (st.ring(c) for c in st.strata.values())), default=0)
    betti = [0] * (2 * top + T + 1)
    for a in range(top + 1):
        dims = [sum(_dim(st, I, a) for I in st.nonempty(t)) for t in range(T + 1)]
        ranks = [_rank(cech_matrix(st, t, a)) if t + 1 < T else 0 for t in range(T)]
        for t in range(T):
            h = dims[t] - ranks[t] - (ranks[t - 1] if t else 0)
            betti[2 * a + t] += h
    while len(betti) > 1 and betti[-1] == 0:
        betti.pop()
    return betti


def strata_euler_characteristic(st: SpecialFiberStratification) -> int:
    return sum(
        (-1) ** (len(I) - 1) * st.ring(c).total_dim() for I, c in st.strata.items()
    )


# ---------------------------------------------------------------------------
# formal sheaves

Label = frozenset  # of cones (tuples); the closed union of their orbit closures
AMBIENT: Label = frozenset({()})


@dataclass(frozen=True)
class FormalSheaf:
    terms: tuple[tuple[tuple[Cone, ...], int], ...]

    def multiplicity(self, lab: Label) -> int:
        key = tuple(sorted(lab))
        return sum(m for k, m in self.terms if k == key)

    def rank_on_ambient(self) -> int:
        return self.multiplicity(AMBIENT)


def meet_labels(a: Label, b: Label, is_cone: Callable[[Cone], bool]) -> Label:
    out = set()
    for x in a:
        for y in b:
            c = tuple(sorted(set(x) | set(y)))
            if is_cone(c):
                out.add(c)
    return frozenset(c for c in out if not any(set(d) < set(c) for d in out))


def exterior_power_sheaf(
    p: int,
    boundary: Sequence[Label],
    l: int,
    is_cone: Callable[[Cone], bool] = lambda c: True,
) -> FormalSheaf:
    """Expand the p-th exterior power of ``Z_E^l + sum_i Z_{G_i}`` into constant sheaves."""
    acc: dict[tuple, int] = {}
    for size in range(0, min(p, len(boundary)) + 1):
        a = p - size
        mult = comb(l, a)
        if not mult:
            continue
        for J in itertools.combinations(range(len(boundary)), size):
            lab = AMBIENT
            for j in J:
                lab = meet_labels(lab, boundary[j], is_cone)
            if not lab:
                continue
            key = tuple(sorted(lab))
            acc[key] = acc.get(key, 0) + mult
    return FormalSheaf(tuple(sorted(acc.items())))
