"""Weight spectral sequence of the blown-up special fiber, over Q.

Generators of ``E_1`` are triples ``(I, S, c)``:

* ``I`` indexes a nonempty stratum ``E_I = V(gamma_I)`` and ``t = |I| - 1``;
* ``S`` is a set of vertical rays with ``gamma_I + S`` still over ``tau``; it
  stands for the wedge of the circle classes ``e_rho``. Rays of ``gamma_I`` give
  circles over the whole stratum, other rays give circles over ``V(gamma_I + rho)``;
* ``c`` is a class in ``H^{2a}(V(gamma_I + S))``.

On the nearby fiber the circle classes over each target ray ``j`` sum to zero.
This relation is used to eliminate ``Gamma_{I,j}``, the smallest ray of
``gamma_I`` over ``j``, so basis labels never contain it.

Gradings: ``k = |S|``, weight ``w = k - t``, total degree ``m = 2a + k + t``
and Hodge type ``P = a + k``. The entry ``E_1^{p,q}`` has ``p = -w`` and
``p + q = m``. The differential has a Cech part (alternating restrictions) and a
Gysin part (contract one circle and push forward, or cup with the Euler class
when the ray already lies in ``gamma_I``), with sign ``(-1)^t`` on the latter.
Both lower the weight by one and preserve Hodge type.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .errors import NotProper, NotReduced, NotSmoothStrata, SignConventionFailure
from .fans import is_unimodular
from .fiber_space import ToricFiberSpace, check_proper, check_reduced, generic_fiber_fan
from .special_fiber import SpecialFiberStratification, strata
from .toric_cohomology import betti_numbers


@dataclass(frozen=True, order=True)
class Generator:
    I: tuple[int, ...]
    S: tuple[int, ...]
    a: int
    index: int

    def label(self) -> str:
        I = "".join(map(str, self.I))
        S = ",".join(map(str, self.S))
        return f"E{I}[{S}]h{2 * self.a}#{self.index}"


@dataclass
class SpectralSequencePage:
    r: int
    # (w, m) -> generators; (p, q) views are derived
    entries: dict[tuple[int, int], list[Generator]]
    # (w, m) -> matrix from entry (w, m) into (w - 1, m + 1)
    differentials: dict[tuple[int, int], list[list[Fraction]]] = field(default_factory=dict)
    hodge: dict[Generator, int] = field(default_factory=dict, repr=False)

    def dims(self) -> dict[tuple[int, int], int]:
        return {k: len(v) for k, v in self.entries.items() if v}

    def pq_dims(self) -> dict[tuple[int, int], int]:
        return {(-w, m + w): d for (w, m), d in self.dims().items()}

    def totals(self) -> list[int]:
        d = self.dims()
        top = max((m for _, m in d), default=-1)
        out = [0] * (top + 1)
        for (w, m), x in d.items():
            out[m] += x
        return out

    def weights(self) -> list[int]:
        return sorted({w for (w, _), d in self.dims().items() if d})


class WeightComplex:
    """The ``E_1`` page with its differential, built from a stratification."""

    def __init__(self, st: SpecialFiberStratification):
        self.st = st
        fs = st.fs
        tau = set(st.tau)
        self.over: dict[int, list[int]] = {}
        for r in fs.vertical_rays():
            j = fs.ray_data[r][0]
            if j in tau:
                self.over.setdefault(j, []).append(r)
        self.vertical = sorted(r for rs in self.over.values() for r in rs)
        self.P = set(frozenset(c) for c in st.cones)
        self.generators: list[Generator] = []
        self.position: dict[Generator, int] = {}
        self._build()

    # -- helpers ------------------------------------------------------------

    def gamma(self, I) -> tuple[int, ...]:
        return self.st.strata[I]

    def first(self, I) -> dict[int, int]:
        """Target ray -> smallest ray of ``gamma_I`` over it."""
        out = {}
        for r in self.gamma(I):
            j = self.st.fs.ray_data[r][0]
            if j is not None and (j not in out or r < out[j]):
                out[j] = r
        return out

    def cone_of(self, I, S) -> Optional[tuple[int, ...]]:
        c = frozenset(self.gamma(I)) | frozenset(S)
        return tuple(sorted(c)) if c in self.P else None

    def ring(self, cone):
        return self.st.ring(cone)

    def labels(self, I) -> list[tuple[int, ...]]:
        skip = set(self.first(I).values())
        cands = [r for r in self.vertical if r not in skip]
        out = []

        def grow(start, cur):
            out.append(tuple(cur))
            for k in range(start, len(cands)):
                nxt = cur + [cands[k]]
                if self.cone_of(I, nxt) is not None:
                    grow(k + 1, nxt)

        grow(0, [])
        return out

    def _build(self):
        for I in sorted(self.st.strata, key=lambda I: (len(I), I)):
            for S in self.labels(I):
                R = self.ring(self.cone_of(I, S))
                for a, b in enumerate(R.basis):
                    for idx in range(len(b)):
                        g = Generator(I, S, a, idx)
                        self.position[g] = len(self.generators)
                        self.generators.append(g)

    @staticmethod
    def grading(g: Generator) -> tuple[int, int]:
        t = len(g.I) - 1
        k = len(g.S)
        return k - t, 2 * g.a + k + t

    @staticmethod
    def hodge_type(g: Generator) -> int:
        return g.a + len(g.S)

    # -- the differential ---------------------------------------------------

    def _add(self, out: dict, I, S, a, vec, scale):
        for idx, c in enumerate(vec):
            if c:
                g = Generator(I, S, a, idx)
                out[g] = out.get(g, 0) + scale * c

    def project(self, I, S, a, vec, scale, out):
        """Rewrite ``e_S`` with ``S`` containing eliminated rays, then accumulate."""
        first = self.first(I)
        bad = [r for r in S if r in first.values()]
        if not bad:
            self._add(out, I, tuple(S), a, vec, scale)
            return
        G = bad[0]
        j = self.st.fs.ray_data[G][0]
        pos = S.index(G)
        rest = [r for r in S if r != G]
        src_cone = self.cone_of(I, S)
        for rho in self.over[j]:
            if rho == G or rho in rest:
                continue
            new = sorted(rest + [rho])
            cone = self.cone_of(I, new)
            if cone is None:
                continue
            sign = (-1) ** pos * (-1) ** new.index(rho)
            if cone == src_cone:
                v2 = vec
            else:
                R = self.ring(src_cone).restriction_matrix(self.ring(cone), a)
                v2 = linalg.matvec(R, vec) if R else []
            if any(v2):
                self.project(I, tuple(new), a, v2, -sign * scale, out)

    def d1(self, g: Generator) -> dict:
        out: dict = {}
        I, S, a = g.I, g.S, g.a
        t = len(I) - 1
        cone = self.cone_of(I, S)
        R = self.ring(cone)
        vec = [Fraction(int(i == g.index)) for i in range(len(R.basis[a]))]
        # Cech part
        k = len(self.st.components)
        for i in range(1, k + 1):
            if i in I:
                continue
            J = tuple(sorted(I + (i,)))
            if J not in self.st.strata:
                continue
            sign = (-1) ** J.index(i)
            c2 = self.cone_of(J, S)
            if c2 is None:
                continue
            M = R.restriction_matrix(self.ring(c2), a)
            v2 = linalg.matvec(M, vec) if M else []
            if any(v2):
                self.project(J, S, a, v2, sign, out)
        # Gysin part
        gam = set(self.gamma(I))
        for pos, rho in enumerate(S):
            T = S[:pos] + S[pos + 1 :]
            sign = (-1) ** t * (-1) ** pos
            tcone = self.cone_of(I, T)
            if rho in gam:
                M = R.multiplication_matrix(rho, a)
            else:
                M = self.ring(tcone).gysin_matrix(R, a)
            v2 = linalg.matvec(M, vec) if M else []
            if any(v2):
                self._add(out, I, T, a + 1, v2, sign)
        return out

    # -- pages ---------------------------------------------------------------

    def page(self) -> SpectralSequencePage:
        entries: dict = {}
        for g in self.generators:
            entries.setdefault(self.grading(g), []).append(g)
        page = SpectralSequencePage(1, entries, hodge={g: self.hodge_type(g) for g in self.generators})
        images = {g: self.d1(g) for g in self.generators}
        self.images = images
        for key, gens in entries.items():
            w, m = key
            tgt = entries.get((w - 1, m + 1), [])
            tpos = {h: i for i, h in enumerate(tgt)}
            M = [[Fraction(0)] * len(gens) for _ in tgt]
            for j, g in enumerate(gens):
                for h, c in images[g].items():
                    if h not in tpos:
                        raise SignConventionFailure(f"d1 of {g.label()} leaves its bidegree")
                    M[tpos[h]][j] += c
            page.differentials[key] = M
        return page

    def check_d1_squared(self) -> bool:
        if not hasattr(self, "images"):
            self.page()
        for g, img in self.images.items():
            acc: dict = {}
            for h, c in img.items():
                for h2, c2 in self.images[h].items():
                    acc[h2] = acc.get(h2, 0) + c * c2
            if any(acc.values()):
                raise SignConventionFailure(f"d1 o d1 != 0 on {g.label()}")
        return True


def _require(fs: ToricFiberSpace, proper: bool = True):
    if not check_reduced(fs):
        raise NotReduced("weight spectral sequence needs reduced fibers")
    if proper and not check_proper(fs):
        raise NotProper("weight spectral sequence needs a proper fiber space")
    if not is_unimodular(fs.source):
        raise NotSmoothStrata("source fan must be unimodular")


def weight_complex(fs: ToricFiberSpace, tau: Sequence[int], require_proper: bool = True) -> WeightComplex:
    """``require_proper=False`` builds the complex over non-compact strata too.

    The differential is still defined and ``d1^2 = 0`` still holds; only the
    comparison with the generic fiber needs properness.
    """
    _require(fs, require_proper)
    return WeightComplex(strata(fs, tau))


def weight_e1(fs: ToricFiberSpace, tau: Sequence[int]) -> SpectralSequencePage:
    return weight_complex(fs, tau).page()


def weight_d1(page: SpectralSequencePage) -> dict:
    return page.differentials


def _rank(M) -> int:
    if not M or not M[0]:
        return 0
    return linalg.rank_rational(M)


def e2_page(page: SpectralSequencePage) -> SpectralSequencePage:
    """Homology dimensions; ``E_2`` generators are placeholders counted per entry."""
    out = {}
    hodge_dims: dict = {}
    for (w, m), gens in page.entries.items():
        out_rank = _rank(page.differentials.get((w, m), []))
        src = page.differentials.get((w + 1, m - 1), [])
        in_rank = _rank(src)
        dim = len(gens) - out_rank - in_rank
        out[(w, m)] = dim
        # split by Hodge type: d1 is block diagonal for it
        for P in sorted({page.hodge[g] for g in gens}):
            hodge_dims[(w, m, P)] = _hodge_slice(page, w, m, P)
    e2 = SpectralSequencePage(2, {k: [Generator((), (), 0, i) for i in range(d)] for k, d in out.items()})
    e2.hodge_slices = hodge_dims
    return e2


def _hodge_slice(page, w, m, P) -> int:
    gens = page.entries.get((w, m), [])
    cols = [j for j, g in enumerate(gens) if page.hodge[g] == P]
    out_M = page.differentials.get((w, m), [])
    tgt = page.entries.get((w - 1, m + 1), [])
    trows = [i for i, g in enumerate(tgt) if page.hodge[g] == P]
    out_rank = _rank([[out_M[i][j] for j in cols] for i in trows]) if trows and cols else 0
    src = page.entries.get((w + 1, m - 1), [])
    scols = [j for j, g in enumerate(src) if page.hodge[g] == P]
    in_M = page.differentials.get((w + 1, m - 1), [])
    in_rank = _rank([[in_M[i][j] for j in scols] for i in cols]) if cols and scols else 0
    return len(cols) - out_rank - in_rank


def hodge_blocks_respected(page: SpectralSequencePage) -> bool:
    for (w, m), M in page.differentials.items():
        src = page.entries[(w, m)]
        tgt = page.entries.get((w - 1, m + 1), [])
        for i, row in enumerate(M):
            for j, c in enumerate(row):
                if c and page.hodge[src[j]] != page.hodge[tgt[i]]:
                    return False
    return True


def oracle_betti(fs: ToricFiberSpace) -> Optional[list[int]]:
    try:
        fan = generic_fiber_fan(fs)
    except (NotProper, NotReduced):
        return None
    from .fans import is_complete

    if not is_complete(fan):
        return None
    return betti_numbers(fan)


def _pad(a: Sequence[int], b: Sequence[int]):
    n = max(len(a), len(b))
    return list(a) + [0] * (n - len(a)), list(b) + [0] * (n - len(b))


@dataclass(frozen=True)
class DegenerationReport:
    kind: str
    totals: tuple[int, ...]
    oracle: Optional[tuple[int, ...]]
    status: str  # "pass", "fail" or "unchecked"

    @property
    def ok(self) -> bool:
        return self.status == "pass"


def degeneration_check_W(fs: ToricFiberSpace, tau: Sequence[int]) -> DegenerationReport:
    wc = weight_complex(fs, tau)
    wc.check_d1_squared()
    e2 = e2_page(wc.page())
    tot = e2.totals()
    oracle = oracle_betti(fs)
    if oracle is None:
        return DegenerationReport("W", tuple(tot), None, "unchecked")
    a, b = _pad(tot, oracle)
    return DegenerationReport("W", tuple(a), tuple(b), "pass" if a == b else "fail")


@dataclass(frozen=True)
class HodgeBoundTable:
    """``U[P][Q]``: Hodge type ``P`` part of ``E_2`` in total degree ``P + Q``."""

    U: tuple[tuple[int, ...], ...]
    raw: tuple[tuple[int, ...], ...]  # same from E_1 (strata sums)

    def totals(self, which: str = "U") -> list[int]:
        T = self.U if which == "U" else self.raw
        n = len(T) + (len(T[0]) if T else 0)
        out = [0] * max(n - 1, 1)
        for P, row in enumerate(T):
            for Q, x in enumerate(row):
                out[P + Q] += x
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out


def hodge_bound_table(fs: ToricFiberSpace, tau: Sequence[int]) -> HodgeBoundTable:
    page = weight_e1(fs, tau)
    e2 = e2_page(page)
    sl = e2.hodge_slices
    Pmax = max((P for (_, _, P) in sl), default=0)
    Mmax = max((m for (_, m, _) in sl), default=0)
    size = max(Pmax, Mmax) + 1
    U = [[0] * size for _ in range(size)]
    raw = [[0] * size for _ in range(size)]
    for (w, m, P), d in sl.items():
        if 0 <= m - P < size:
            U[P][m - P] += d
    for g in page.hodge:
        w, m = WeightComplex.grading(g)
        P = page.hodge[g]
        raw[P][m - P] += 1
    return HodgeBoundTable(tuple(map(tuple, U)), tuple(map(tuple, raw)))


def degeneration_check_F(fs: ToricFiberSpace, tau: Sequence[int]) -> DegenerationReport:
    tab = hodge_bound_table(fs, tau)
    tot = tab.totals()
    oracle = oracle_betti(fs)
    if oracle is None:
        return DegenerationReport("F", tuple(tot), None, "unchecked")
    a, b = _pad(tot, oracle)
    return DegenerationReport("F", tuple(a), tuple(b), "pass" if a == b else "fail")


def filtration_length_report(fs: ToricFiberSpace, tau: Sequence[int]) -> int:
    """Number of nonzero weight rows of ``E_1``.

    When the fiber space is not proper the page cannot be built; the length of
    the longest chain of strata is reported instead.
    """
    try:
        return len(weight_e1(fs, tau).weights())
    except NotProper:
        return strata(fs, tau).nesting_depth()
