"""Toric fiber spaces: a lattice map between two fans.

Everything is phrased through ray images. In an equidimensional fiber space each
source ray either maps to zero (a horizontal ray) or to a positive multiple
``l`` of one target ray (a vertical ray); ``l`` is the exponent of that
coordinate in the monomial chart.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

from . import linalg
from .errors import (
    ConeNotInFan,
    DisconnectedCover,
    NotEquidimensional,
    NotProper,
    NotReduced,
    TargetNotSmooth,
)
from .fans import Fan, cone_multiplicity, is_unimodular, make_fan, product_fan


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    witness: Optional[tuple] = None
    detail: str = ""

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class ToricFiberSpace:
    source: Fan
    target: Fan
    phi: tuple[tuple[int, ...], ...]
    name: str = ""
    # number of connected components of the cover this space was cut from
    cover_components: int = 1

    def __post_init__(self):
        if len(self.phi) != self.target.rank:
            raise ValueError("map has wrong number of rows")
        if any(len(r) != self.source.rank for r in self.phi):
            raise ValueError("map has wrong number of columns")

    @property
    def n(self) -> int:
        return self.source.rank

    @property
    def m(self) -> int:
        return self.target.rank

    def image(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(linalg.matvec([list(r) for r in self.phi], v)) if self.phi else ()

    @cached_property
    def ray_data(self) -> tuple[Optional[tuple[int, int]], ...]:
        """Per source ray: ``(target ray, exponent)``, ``(None, 0)`` if horizontal, or ``None``."""
        out = []
        for u in self.source.rays:
            w = self.image(u)
            if not any(w):
                out.append((None, 0))
                continue
            hit = None
            for j, t in enumerate(self.target.rays):
                ratio = _positive_multiple(w, t)
                if ratio is not None:
                    hit = (j, ratio)
                    break
            out.append(hit)
        return tuple(out)

    def vertical_rays(self) -> list[int]:
        return [i for i, d in enumerate(self.ray_data) if d is not None and d[0] is not None]

    def horizontal_rays(self) -> list[int]:
        return [i for i, d in enumerate(self.ray_data) if d == (None, 0)]

    def cone_image(self, cone: Sequence[int]) -> tuple[int, ...]:
        """Target ray indices spanning the image of ``cone`` (equidimensional case)."""
        js = set()
        for i in cone:
            d = self.ray_data[i]
            if d is None:
                raise NotEquidimensional(f"ray {self.source.rays[i]} does not map onto a ray")
            if d[0] is not None:
                js.add(d[0])
        return tuple(sorted(js))

    def cones_over(self, tau: Sequence[int]) -> list[tuple[int, ...]]:
        """Source cones whose image is exactly the target cone ``tau``."""
        tau = tuple(sorted(tau))
        return [c for c in self.source.sorted_cones() if self.cone_image(c) == tau]

    def flags(self) -> dict:
        toric = check_toric_morphism(self).ok
        equi = toric and check_equidimensional(self).ok
        return {
            "toroidal": toric,
            "equidimensional": equi,
            "reduced": bool(equi and check_reduced(self)),
            "proper": bool(toric and check_proper(self)),
        }


def _positive_multiple(w: Sequence[int], t: Sequence[int]) -> Optional[int]:
    """``l > 0`` with ``w = l t`` (``t`` primitive), else None."""
    ratio = None
    for a, b in zip(w, t):
        if b == 0:
            if a != 0:
                return None
            continue
        if a % b:
            return None
        q = a // b
        if q <= 0 or (ratio is not None and q != ratio):
            return None
        ratio = q
    return ratio


def make_fiber_space(source: Fan, target: Fan, phi: Sequence[Sequence[int]], name: str = "") -> ToricFiberSpace:
    return ToricFiberSpace(source, target, tuple(tuple(int(x) for x in r) for r in phi), name)


def product_fiber_space(a: ToricFiberSpace, b: ToricFiberSpace, name: str = "") -> ToricFiberSpace:
    phi = [list(r) + [0] * b.n for r in a.phi] + [[0] * a.n + list(r) for r in b.phi]
    return make_fiber_space(
        product_fan(a.source, b.source),
        product_fan(a.target, b.target),
        phi,
        name or f"{a.name}x{b.name}",
    )


# ---------------------------------------------------------------------------
# validity predicates


def _in_simplicial_cone(rays: Sequence[Sequence[int]], p: Sequence, q: Optional[Sequence] = None) -> bool:
    """Is ``p - eps q`` in cone(rays) for all small ``eps > 0``? (``q=None``: is ``p`` in it.)"""
    if not rays:
        return not any(p) and (q is None or not any(q))
    A = linalg.from_columns(rays, len(p))
    a = linalg.solve_rational(A, list(p))
    if a is None:
        return False
    if q is None:
        return all(x >= 0 for x in a)
    b = linalg.solve_rational(A, list(q))
    if b is None:
        return False
    return all(x > 0 or (x == 0 and y <= 0) for x, y in zip(a, b))


def _in_target_support(fs: ToricFiberSpace, p, q=None) -> bool:
    if fs.m == 0:
        return True
    return any(
        _in_simplicial_cone([fs.target.rays[j] for j in c], p, q) for c in fs.target.max_cones
    )


def check_toric_morphism(fs: ToricFiberSpace) -> CheckResult:
    for c in fs.source.max_cones:
        imgs = [fs.image(fs.source.rays[i]) for i in c]
        if fs.m == 0:
            continue
        if not any(
            all(_in_simplicial_cone([fs.target.rays[j] for j in t], w) for w in imgs)
            for t in fs.target.max_cones
        ):
            return CheckResult(False, c, "image of cone is not inside a target cone")
    return CheckResult(True)


def check_equidimensional(fs: ToricFiberSpace) -> CheckResult:
    for c in fs.source.sorted_cones():
        try:
            img = fs.cone_image(c)
        except NotEquidimensional as exc:
            return CheckResult(False, c, str(exc))
        if not fs.target.has_cone(img):
            return CheckResult(False, c, f"image spanned by target rays {img} is not a cone")
    return CheckResult(True)


def _require_equidimensional(fs: ToricFiberSpace):
    res = check_equidimensional(fs)
    if not res:
        raise NotEquidimensional(f"cone {res.witness}: {res.detail}")


def check_reduced(fs: ToricFiberSpace) -> CheckResult:
    """All exponents 1 and every lattice point of an image cone lifts to the source cone."""
    _require_equidimensional(fs)
    for i in fs.vertical_rays():
        if fs.ray_data[i][1] != 1:
            return CheckResult(False, (i,), f"ray {fs.source.rays[i]} has exponent {fs.ray_data[i][1]}")
    for c in fs.source.max_cones:
        img = fs.cone_image(c)
        if not img:
            continue
        trays = [fs.target.rays[j] for j in img]
        if cone_multiplicity(trays) == 1:
            continue
        srays = [fs.source.rays[i] for i in c]
        lifts = {fs.image(p) for p in linalg.parallelepiped_points(srays)}
        for h in linalg.hilbert_basis_simplicial(trays):
            if not any(_in_lifted_monoid(fs, c, h, p) for p in lifts):
                return CheckResult(False, c, f"target lattice point {h} has no lift")
    return CheckResult(True)


def _in_lifted_monoid(fs, cone, h, p) -> bool:
    # h - p must be a nonnegative integer combination of the images of the rays
    diff = [a - b for a, b in zip(h, p)]
    imgs = sorted({fs.image(fs.source.rays[i]) for i in cone if any(fs.image(fs.source.rays[i]))})
    bound = max((abs(x) for x in diff), default=0)
    for coeffs in itertools.product(range(bound + 1), repeat=len(imgs)):
        tot = [sum(c * w[k] for c, w in zip(coeffs, imgs)) for k in range(len(diff))]
        if tot == diff:
            return True
    return False


def check_proper(fs: ToricFiberSpace) -> CheckResult:
    """Support preimage test, done wall by wall.

    The source fan must be pure of full dimension. Leaving ``|Sigma_X|`` through
    a free wall must also leave the preimage of ``|Sigma_Y|``; this is decided
    exactly by a first-order perturbation test in the target cones. Finally every
    maximal target cone must be hit.
    """
    src = fs.source
    n = src.rank
    if n == 0:
        return CheckResult(True)
    if any(len(c) != n for c in src.max_cones):
        return CheckResult(False, None, "source fan is not pure of full dimension")
    walls: dict[tuple, list] = {}
    for c in src.max_cones:
        for i in c:
            w = tuple(x for x in c if x != i)
            walls.setdefault(w, []).append(i)
    for w, apexes in sorted(walls.items()):
        if len(apexes) != 1:
            continue
        x = [sum(src.rays[i][k] for i in w) for k in range(n)]
        v = src.rays[apexes[0]]
        if _in_target_support(fs, fs.image(x), fs.image(v)):
            return CheckResult(False, w, "free wall does not bound the preimage of the target support")
    if fs.m:
        try:
            hit = {fs.cone_image(c) for c in src.max_cones}
        except NotEquidimensional:
            hit = set()
        for t in fs.target.max_cones:
            if t not in hit:
                return CheckResult(False, t, "target cone is not covered")
    return CheckResult(True)


# ---------------------------------------------------------------------------
# charts


@dataclass(frozen=True)
class ChartModel:
    n: int
    m: int
    n_prime: int
    m_prime: int
    blocks: tuple[int, ...]  # t_0 = 0 < t_1 < ... < t_{m'}
    exponents: tuple[int, ...]  # l_1 .. l_{t_{m'}}
    rays: tuple[int, ...] = field(default=(), compare=False)  # source ray order

    def problems(self) -> list[str]:
        out = []
        t = self.blocks
        if not t or t[0] != 0:
            out.append("blocks must start at 0")
        if any(a >= b for a, b in zip(t, t[1:])):
            out.append("blocks must increase strictly")
        if len(t) != self.m_prime + 1:
            out.append("need m'+1 block boundaries")
        if t and t[-1] > self.n_prime:
            out.append("last block exceeds n'")
        if len(self.exponents) != (t[-1] if t else 0) or any(l < 1 for l in self.exponents):
            out.append("exponents must be >= 1, one per block variable")
        if self.m_prime > self.m or self.n_prime > self.n:
            out.append("primed dimensions exceed ambient ones")
        if self.n - self.n_prime < self.m - self.m_prime:
            out.append("n - n' < m - m'")
        return out

    def block(self, j: int) -> tuple[int, ...]:
        return self.exponents[self.blocks[j] : self.blocks[j + 1]]


def chart_model(fs: ToricFiberSpace, sigma: Sequence[int]) -> ChartModel:
    sigma = tuple(sorted(sigma))
    if not fs.source.has_cone(sigma):
        raise ConeNotInFan(f"{sigma} is not a cone of the source fan")
    _require_equidimensional(fs)
    by_target: dict[int, list[int]] = {}
    horizontal = []
    for i in sigma:
        j, l = fs.ray_data[i]
        if j is None:
            horizontal.append(i)
        else:
            by_target.setdefault(j, []).append(i)
    order, blocks, exps = [], [0], []
    for j in sorted(by_target):
        for i in by_target[j]:
            order.append(i)
            exps.append(fs.ray_data[i][1])
        blocks.append(len(order))
    order += horizontal
    return ChartModel(fs.n, fs.m, len(sigma), len(by_target), tuple(blocks), tuple(exps), tuple(order))


def chart_fiber_space(chart: ChartModel, name: str = "") -> ToricFiberSpace:
    """Toric realization of a monomial chart: an orthant mapping to an orthant."""
    bad = chart.problems()
    if bad:
        raise NotEquidimensional("; ".join(bad))
    n, m, n1, m1 = chart.n, chart.m, chart.n_prime, chart.m_prime
    rays = [tuple(int(i == k) for i in range(n)) for k in range(n1)]
    trays = [tuple(int(i == k) for i in range(m)) for k in range(m1)]
    phi = [[0] * n for _ in range(m)]
    for j in range(m1):
        for i in range(chart.blocks[j], chart.blocks[j + 1]):
            phi[j][i] = chart.exponents[i]
    for k in range(m - m1):
        phi[m1 + k][n1 + k] = 1
    source = make_fan(n, rays, [tuple(range(n1))])
    target = make_fan(m, trays, [tuple(range(m1))])
    return make_fiber_space(source, target, phi, name)


# ---------------------------------------------------------------------------
# reduction


def reduction_degrees(fs: ToricFiberSpace) -> tuple[int, ...]:
    _require_equidimensional(fs)
    d = [1] * len(fs.target.rays)
    for i in fs.vertical_rays():
        j, l = fs.ray_data[i]
        d[j] = math.lcm(d[j], l)
    return tuple(d)


def _ray_basis(target: Fan) -> linalg.Matrix:
    """Columns: the target rays followed by a completion to a basis of ``N_Y``."""
    m = target.rank
    rays = [tuple(r) for r in target.rays]
    if not rays:
        return linalg.identity(m)
    R = linalg.from_columns(rays, m)
    if linalg.rank_rational(R) < len(rays) or any(x != 1 for x in linalg.invariant_factors(R)):
        raise TargetNotSmooth("target rays do not extend to a lattice basis")
    U_inv = linalg.inverse_rational(linalg.snf(R).left)
    extra = [tuple(int(U_inv[i][j]) for i in range(m)) for j in range(len(rays), m)]
    return linalg.from_columns(rays + extra, m)


@dataclass(frozen=True)
class KummerResult:
    space: ToricFiberSpace
    degrees: tuple[int, ...]
    source_basis: linalg.Matrix  # columns: basis of N_X' inside N_X
    target_basis: linalg.Matrix  # columns: basis of N_Y' inside N_Y
    source_index: object
    components: int


def kummer_base_change(
    fs: ToricFiberSpace, degrees: Optional[Sequence[int]] = None, strict: bool = False
) -> KummerResult:
    """Pull back along ``y_j = y_j'^{d_j}`` and normalize.

    ``N_Y'`` is spanned by ``d_j u_j`` and a completion of the target rays;
    ``N_X'`` is the preimage of ``N_Y'``. Cones are unchanged; rays are
    re-primitivized in the new lattices. The cover can have several connected
    components, one for each element of ``N_Y / (N_Y' + phi(N_X))``; one of
    them is returned and the count is recorded (``strict`` raises instead).
    """
    if not is_unimodular(fs.target):
        raise TargetNotSmooth("target fan is not unimodular")
    if degrees is None:
        degrees = reduction_degrees(fs)
    degrees = tuple(int(d) for d in degrees)
    if len(degrees) != len(fs.target.rays) or any(d < 1 for d in degrees):
        raise ValueError("need one positive degree per target ray")
    m, n = fs.m, fs.n
    base = _ray_basis(fs.target)
    D = [[base[i][j] * (degrees[j] if j < len(degrees) else 1) for j in range(m)] for i in range(m)]
    A = [list(r) for r in fs.phi]
    # preimage lattice: x-parts of the kernel of [A | -D]
    if m:
        big = [A[i] + [-x for x in D[i]] for i in range(m)]
        K = linalg.kernel_basis(big, cols=n + m)
        xs = [list(c[:n]) for c in linalg.columns(K)]
        Bx_rows = [r for r in linalg.hnf(xs, cols=n).form if any(r)] if xs else []
        Bx = linalg.transpose(Bx_rows, n)
    else:
        Bx = linalg.identity(n)
    if n and (not Bx or len(Bx[0]) != n):
        raise NotEquidimensional("preimage lattice has wrong rank")
    Bx_inv = linalg.inverse_rational(Bx) if n else []
    D_inv = linalg.inverse_rational(D) if m else []

    def to_src(v):
        return linalg.primitive_from_rational([sum(Bx_inv[i][k] * v[k] for k in range(n)) for i in range(n)])

    def to_tgt(v):
        return linalg.primitive_from_rational([sum(D_inv[i][k] * v[k] for k in range(m)) for i in range(m)])

    new_src = make_fan(n, [to_src(r) for r in fs.source.rays], fs.source.max_cones)
    new_tgt = make_fan(m, [to_tgt(r) for r in fs.target.rays], fs.target.max_cones)
    prod = linalg.matmul(A, Bx) if m and n else [[0] * n for _ in range(m)]
    phi_new = [[sum(D_inv[i][k] * prod[k][j] for k in range(m)) for j in range(n)] for i in range(m)]
    if any(x.denominator != 1 for r in phi_new for x in r):
        raise AssertionError("preimage lattice does not map into the new target lattice")
    phi_new = [[int(x) for x in r] for r in phi_new]
    comps = 1
    if m:
        gens = linalg.from_columns(linalg.columns(D) + linalg.columns(A), m)
        comps = linalg.sublattice_index(gens, m)
        comps = comps * fs.cover_components if comps != math.inf else comps
    if strict and comps != 1:
        raise DisconnectedCover(f"the normalized fiber product has {comps} components")
    index = linalg.sublattice_index(Bx, n) if n else 1
    space = ToricFiberSpace(new_src, new_tgt, tuple(tuple(r) for r in phi_new),
                            (fs.name + "'") if fs.name else "", comps)
    return KummerResult(space, degrees, Bx, D, index, comps)


# ---------------------------------------------------------------------------
# generic fiber


def generic_fiber_fan(fs: ToricFiberSpace, strict: bool = True) -> Fan:
    """Fan of the general fiber: source cones lying in ``ker phi``, in kernel coordinates."""
    if strict:
        if not check_proper(fs):
            raise NotProper("fiber space is not proper over the target support")
        if not check_reduced(fs):
            raise NotReduced("fiber space does not have reduced fibers")
    A = [list(r) for r in fs.phi]
    K = linalg.kernel_basis(A, cols=fs.n) if A else linalg.identity(fs.n)
    k = len(K[0]) if K and K[0] else 0
    inside = [i for i, u in enumerate(fs.source.rays) if not any(fs.image(u))]
    pos = {i: p for p, i in enumerate(inside)}
    coords = [tuple(int(x) for x in linalg.lattice_coordinates(K, fs.source.rays[i])) for i in inside]
    cones = [
        tuple(pos[i] for i in c)
        for c in fs.source.sorted_cones()
        if all(i in pos for i in c)
    ]
    return make_fan(k, coords, cones)
