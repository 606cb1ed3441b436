"""Stalk models for the structure sheaf of a real oriented blow-up.

A stalk is a polynomial in the logarithms ``t_i = log x_i`` with holomorphic
coefficients; going once around the i-th circle sends ``t_i`` to ``t_i + tau``
where ``tau`` stands for ``2 pi sqrt(-1)``. ``tau`` is never evaluated.

Every operator here is homogeneous: on basis vectors of log degree ``a`` (row)
and ``b`` (column) its entry is ``c * tau^(b - a)``. Scaling basis vectors by
powers of ``tau`` turns such a matrix into its coefficient matrix ``c``, so
ranks and kernels over ``Q(tau)`` are computed exactly over ``Q`` on the
coefficients, and kernel vectors are rescaled back to polynomials in ``tau``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Mapping, Optional, Sequence

from . import linalg
from .errors import IndexOutOfRange, NotUnipotent, TruncationTooSmall

TAU = "tau"

# ---------------------------------------------------------------------------
# homogeneous matrices over Q[tau]


@dataclass(frozen=True)
class TauMatrix:
    """Square or rectangular homogeneous matrix; ``coeffs[i][j]`` multiplies ``tau^(col_deg[j] - row_deg[i])``."""

    coeffs: tuple[tuple[Fraction, ...], ...]
    row_deg: tuple[int, ...]
    col_deg: tuple[int, ...]

    def __post_init__(self):
        for i, row in enumerate(self.coeffs):
            for j, c in enumerate(row):
                if c and self.col_deg[j] < self.row_deg[i]:
                    raise ValueError("negative power of tau in a homogeneous matrix")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_deg), len(self.col_deg)

    def entry(self, i: int, j: int) -> tuple[Fraction, int]:
        return self.coeffs[i][j], self.col_deg[j] - self.row_deg[i]

    def __matmul__(self, other: "TauMatrix") -> "TauMatrix":
        if self.col_deg != other.row_deg:
            raise ValueError("degree mismatch in product")
        ncols = len(other.col_deg)
        nz = [[(j, c) for j, c in enumerate(r) if c] for r in other.coeffs]
        prod = []
        for r in self.coeffs:
            acc = [Fraction(0)] * ncols
            for k, a in enumerate(r):
                if a:
                    for j, c in nz[k]:
                        acc[j] += a * c
            prod.append(acc)
        return TauMatrix(_frac(prod), self.row_deg, other.col_deg)

    def __sub__(self, other: "TauMatrix") -> "TauMatrix":
        if (self.row_deg, self.col_deg) != (other.row_deg, other.col_deg):
            raise ValueError("degree mismatch in difference")
        return TauMatrix(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.coeffs, other.coeffs)),
            self.row_deg,
            self.col_deg,
        )

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.coeffs)

    def restrict_columns(self, cols: Sequence[int]) -> "TauMatrix":
        return TauMatrix(
            tuple(tuple(r[j] for j in cols) for r in self.coeffs),
            self.row_deg,
            tuple(self.col_deg[j] for j in cols),
        )

    def render(self, i: int, j: int) -> str:
        c, p = self.entry(i, j)
        if not c:
            return "0"
        if p == 0:
            return str(c)
        t = TAU if p == 1 else f"{TAU}^{p}"
        return t if c == 1 else f"{c}*{t}"


def _frac(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


def identity_tau(deg: Sequence[int]) -> TauMatrix:
    n = len(deg)
    return TauMatrix(_frac([[int(i == j) for j in range(n)] for i in range(n)]), tuple(deg), tuple(deg))


# ---------------------------------------------------------------------------
# modules and monodromy


@dataclass(frozen=True)
class LogStalkModule:
    """Polynomials of total degree ``<= K`` in ``n`` log variables (optionally modulo constants)."""

    n: int
    K: int
    reduced: bool = False

    @property
    def basis(self) -> list[tuple[int, ...]]:
        out = []
        for d in range(1 if self.reduced else 0, self.K + 1):
            for alpha in _compositions(d, self.n):
                out.append(alpha)
        return out

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(sum(a) for a in self.basis)

    def label(self, alpha: Sequence[int]) -> str:
        if self.n == 1:
            return f"e{alpha[0]}"
        return "e" + "".join(str(a) for a in alpha)


def _compositions(d: int, n: int):
    if n == 0:
        if d == 0:
            yield ()
        return
    for first in range(d, -1, -1):
        for rest in _compositions(d - first, n - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class MonodromyOperator:
    module: LogStalkModule
    index: int
    matrix: TauMatrix


def monodromy_op(module: LogStalkModule, i: int, sign: int = 1) -> MonodromyOperator:
    """``t_i -> t_i + sign*tau`` extended multiplicatively (``i`` is 1-based)."""
    if not 1 <= i <= module.n:
        raise IndexOutOfRange(f"variable {i} not in 1..{module.n}")
    basis = module.basis
    pos = {a: k for k, a in enumerate(basis)}
    N = len(basis)
    M = [[Fraction(0)] * N for _ in range(N)]
    for col, alpha in enumerate(basis):
        a = alpha[i - 1]
        for b in range(a + 1):
            beta = alpha[: i - 1] + (b,) + alpha[i:]
            if beta in pos:
                M[pos[beta]][col] += comb(a, b) * Fraction(sign) ** (a - b)
    deg = module.degrees
    op = MonodromyOperator(module, i, TauMatrix(_frac(M), deg, deg))
    check_unipotent(op.matrix, module.K + 1)
    return op


def check_unipotent(M: TauMatrix, power: Optional[int] = None) -> None:
    N = identity_tau(M.row_deg)
    D = M - N
    k = power if power is not None else len(M.row_deg)
    P = N
    for _ in range(k):
        P = P @ D
        if P.is_zero():
            return
    if not P.is_zero():
        raise NotUnipotent(f"(M - id)^{k} != 0")


# ---------------------------------------------------------------------------
# circle cohomology


@dataclass(frozen=True)
class CircleCohomology:
    h0_basis: tuple[dict, ...]  # label -> (coefficient, tau power)
    h1_basis: tuple[str, ...]  # coset representatives below the window
    h0_dims: tuple[int, ...]  # dim(ker cap F_d), d < window
    h1_dims: tuple[int, ...]  # dim F_d - dim(F_d cap image), d < window
    window: int

    def summary(self) -> dict:
        return {
            "H0": [dict(sorted(v.items())) for v in self.h0_basis],
            "H1": list(self.h1_basis),
            "H0_filtered": list(self.h0_dims),
            "H1_filtered": list(self.h1_dims),
            "valid_below_degree": self.window,
        }


def _coeff_rows(M: TauMatrix) -> list[list[Fraction]]:
    return [list(r) for r in M.coeffs]


def _span_dim(vectors: list[list[Fraction]]) -> int:
    return linalg.rank_rational(vectors) if vectors else 0


def _filtered_dim(vectors: list[list[Fraction]], deg: Sequence[int], d: int) -> int:
    """dim(span(vectors) cap F_d) where F_d = coordinates of degree <= d."""
    high = [j for j, x in enumerate(deg) if x > d]
    if not vectors:
        return 0
    total = _span_dim(vectors)
    if not high:
        return total
    # kernel of the projection onto high coordinates, restricted to the span
    basis = linalg.row_space_basis(vectors)
    proj = [[v[j] for j in high] for v in basis]
    return len(basis) - (_span_dim(proj))


def kernel_vectors(M: TauMatrix) -> list[list[Fraction]]:
    n = len(M.col_deg)
    if not M.row_deg:
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    return linalg.nullspace_rational(_coeff_rows(M), cols=n)


def image_vectors(M: TauMatrix) -> list[list[Fraction]]:
    cols = [list(c) for c in zip(*M.coeffs)] if M.coeffs else []
    return [c for c in cols if any(c)]


def circle_cohomology(M: MonodromyOperator | TauMatrix, labels: Optional[Sequence[str]] = None,
                      window: Optional[int] = None) -> CircleCohomology:
    """``H^0 = ker(M - id)`` and ``H^1 = coker(M - id)`` with truncation-stable dimensions."""
    if isinstance(M, MonodromyOperator):
        mod = M.module
        labels = labels or [mod.label(a) for a in mod.basis]
        window = mod.K if window is None else window
        mat = M.matrix
    else:
        mat = M
        labels = labels or [f"b{k}" for k in range(len(mat.col_deg))]
        window = max(mat.col_deg, default=0) if window is None else window
    check_unipotent(mat)
    deg = mat.col_deg
    D = mat - identity_tau(deg)
    ker = kernel_vectors(D)
    img = image_vectors(D)
    top = max(deg, default=0)
    h0 = []
    for v in linalg.row_space_basis(ker) if ker else []:
        shift = min(top - deg[j] for j, c in enumerate(v) if c)
        h0.append({labels[j]: (c, top - deg[j] - shift) for j, c in enumerate(v) if c})
    # coset representatives: lowest-degree basis vectors outside the image
    reps, acc = [], list(img)
    for j in sorted(range(len(deg)), key=lambda j: (deg[j], j)):
        e = [Fraction(int(k == j)) for k in range(len(deg))]
        if _span_dim(acc + [e]) > _span_dim(acc):
            acc.append(e)
            if deg[j] < window:
                reps.append(labels[j])
    lo = min(deg, default=0)
    h0_dims = tuple(_filtered_dim(ker, deg, d) for d in range(lo, window))
    h1_dims = tuple(
        sum(1 for x in deg if x <= d) - _filtered_dim(img, deg, d) for d in range(lo, window)
    )
    return CircleCohomology(tuple(h0), tuple(reps), h0_dims, h1_dims, window)


def reduced_module_operator(K: int) -> MonodromyOperator:
    """Monodromy on ``L/constants`` with basis ``e_1..e_K``, ``e_k = t^k``."""
    return monodromy_op(LogStalkModule(1, K, reduced=True), 1)


# ---------------------------------------------------------------------------
# relative case: y = x1 x2


def relative_operators(K: int) -> dict:
    if K < 2:
        raise TruncationTooSmall("relative check needs K >= 2")
    LX = LogStalkModule(2, K)
    LY = LogStalkModule(1, K)
    M1 = monodromy_op(LX, 1).matrix
    M2 = monodromy_op(LX, 2).matrix
    M = monodromy_op(LY, 1).matrix
    bx, by = LX.basis, LY.basis
    pos = {a: i for i, a in enumerate(bx)}
    # comparison map e_k -> sum_j binom(k, j) e_{j, k-j}
    C = [[Fraction(0)] * len(by) for _ in bx]
    for col, (k,) in enumerate(by):
        for j in range(k + 1):
            C[pos[(j, k - j)]][col] = Fraction(comb(k, j))
    comparison = TauMatrix(_frac(C), LX.degrees, LY.degrees)
    # fiber operator exactly as displayed
    F = [[Fraction(0)] * len(bx) for _ in bx]
    for col, (k1, k2) in enumerate(bx):
        for j1 in range(k1 + 1):
            for j2 in range(k2 + 1):
                F[pos[(j1, j2)]][col] += (-1) ** (k2 - j2) * comb(k1, j1) * comb(k2, j2)
    fiber = TauMatrix(_frac(F), LX.degrees, LX.degrees)
    return {"LX": LX, "LY": LY, "M1": M1, "M2": M2, "M": M, "comparison": comparison, "fiber": fiber}


@dataclass(frozen=True)
class PushforwardReport:
    K: int
    checks: dict  # name -> (expected dims, observed dims, ok)
    comparison_k1: dict

    @property
    def ok(self) -> bool:
        return all(v[2] for v in self.checks.values())


def relative_pushforward_check(K: int) -> PushforwardReport:
    ops = relative_operators(K)
    F, C, M, M1 = ops["fiber"], ops["comparison"], ops["M"], ops["M1"]
    degx, degy = F.col_deg, C.col_deg
    window = range(0, K)
    expected_LY = tuple(sum(1 for x in degy if x <= d) for d in window)
    checks = {}

    D = F - identity_tau(degx)
    img_C = image_vectors(C)
    ker_D = kernel_vectors(D)

    # fiber operator fixes the comparison image
    fixes = (F @ C).coeffs == C.coeffs
    checks["fiber_fixes_pullback"] = ((True,), (fixes,), fixes)
    # compatibility of monodromies: C M = M1 C
    compat = (C @ M).coeffs == (M1 @ C).coeffs
    checks["monodromy_compatible"] = ((True,), (compat,), compat)

    # H^0 on the comparison image: D vanishes there, so everything survives
    DC = D @ C
    ker_on_img = [list(linalg.matvec([list(r) for r in C.coeffs], v)) for v in kernel_vectors(DC)]
    obs = tuple(_filtered_dim(ker_on_img, degx, d) for d in window)
    checks["H0_pullback"] = (expected_LY, obs, obs == expected_LY)

    obs = tuple(_filtered_dim(ker_D, degx, d) for d in window)
    same = all(
        _filtered_dim(ker_D + img_C, degx, d) == _filtered_dim(img_C, degx, d) for d in window
    )
    checks["H0_LX"] = (expected_LY, obs, obs == expected_LY and same)

    # H^1 on the comparison image: coker of the zero map is the whole image
    img_DC = image_vectors(DC)
    obs = tuple(_filtered_dim(img_C, degx, d) - _filtered_dim(img_DC, degx, d) for d in window)
    checks["H1_pullback"] = (expected_LY, obs, obs == expected_LY)

    img_D = image_vectors(D)
    obs = tuple(sum(1 for x in degx if x <= d) - _filtered_dim(img_D, degx, d) for d in window)
    zero = tuple(0 for _ in window)
    checks["H1_LX"] = (zero, obs, obs == zero)

    bx = ops["LX"].basis
    k1 = {ops["LX"].label(bx[i]): C.coeffs[i][1] for i in range(len(bx)) if C.coeffs[i][1]}
    return PushforwardReport(K, checks, k1)


def fiber_operator_is_composition(K: int) -> bool:
    """The displayed fiber operator equals ``M1 o M2^{-1}``."""
    ops = relative_operators(K)
    LX = ops["LX"]
    M2inv = monodromy_op(LX, 2, sign=-1).matrix
    return (ops["M1"] @ M2inv).coeffs == ops["fiber"].coeffs


# ---------------------------------------------------------------------------
# truncated series and the log Poincare recursions

Key = tuple[tuple[int, ...], tuple[int, ...]]  # (log exponents, power-series exponents)


@dataclass(frozen=True)
class TruncatedSeriesChart:
    """Elements ``sum h[k, l] (log x)^k x^l`` with ``|k| <= K`` and every ``l_i < S``."""

    nvars: int
    S: int = 6
    K: int = 4

    def in_window(self, key: Key) -> bool:
        k, l = key
        return sum(k) <= self.K and all(0 <= x < self.S for x in l) and all(x >= 0 for x in k)

    def element(self, coeffs: Mapping[Key, object]) -> dict:
        out = {}
        for key, c in coeffs.items():
            key = (tuple(key[0]), tuple(key[1]))
            if len(key[0]) != self.nvars or len(key[1]) != self.nvars:
                raise ValueError("wrong number of variables in key")
            if c:
                if not self.in_window(key):
                    raise TruncationTooSmall(f"term {key} outside the truncation window")
                out[key] = Fraction(c)
        return out


def log_derivative(chart: TruncatedSeriesChart, h: Mapping[Key, Fraction]) -> dict:
    """Coefficients of ``dh`` against ``dx/x`` (one variable)."""
    out: dict = {}
    for ((k,), (l,)), c in h.items():
        if l:
            out[((k,), (l,))] = out.get(((k,), (l,)), 0) + l * c
        if k:
            out[((k - 1,), (l,))] = out.get(((k - 1,), (l,)), 0) + k * c
    return {key: v for key, v in out.items() if v}


def relative_log_derivative(chart: TruncatedSeriesChart, h: Mapping[Key, Fraction]) -> dict:
    """Coefficients of the relative ``dh`` against ``dx1/x1`` for ``y = x1 x2``."""
    out: dict = {}

    def add(key, v):
        out[key] = out.get(key, 0) + v

    for ((k1, k2), (l1, l2)), c in h.items():
        if l1 != l2:
            add(((k1, k2), (l1, l2)), (l1 - l2) * c)
        if k1:
            add(((k1 - 1, k2), (l1, l2)), k1 * c)
        if k2:
            add(((k1, k2 - 1), (l1, l2)), -k2 * c)
    return {key: v for key, v in out.items() if v}


@dataclass(frozen=True)
class ClosedConstant:
    value: Fraction


@dataclass(frozen=True)
class NotClosed:
    dh: dict


@dataclass(frozen=True)
class LogSolution:
    g: dict
    residual: dict
    window: tuple[int, int]  # (log degree bound, series order bound)


def log_poincare_solve(chart: TruncatedSeriesChart, h: Mapping, as_function: bool = False):
    """Solve ``dg = h dx/x`` by descending recursion, or certify a closed ``h`` is constant.

    With ``as_function`` the input is a function ``h``; if ``dh = 0`` the
    descending induction forces every coefficient except the constant term to
    vanish and a :class:`ClosedConstant` is returned, otherwise :class:`NotClosed`.
    """
    if chart.nvars != 1:
        raise ValueError("one-variable chart expected")
    h = chart.element(h)
    if as_function:
        dh = log_derivative(chart, h)
        if dh:
            return NotClosed(dh)
        for k in range(chart.K, -1, -1):
            for l in range(chart.S):
                if (k, l) != (0, 0) and h.get(((k,), (l,))):
                    raise AssertionError("closed element with a non-constant term")
        return ClosedConstant(h.get(((0,), (0,)), Fraction(0)))
    g: dict = {}
    for l in range(chart.S):
        for k in range(chart.K, -1, -1):
            hk = h.get(((k,), (l,)), Fraction(0))
            if l == 0:
                if hk:
                    if k + 1 > chart.K:
                        raise TruncationTooSmall("solution needs log degree above K")
                    g[((k + 1,), (0,))] = hk / (k + 1)
            else:
                val = (hk - (k + 1) * g.get(((k + 1,), (l,)), Fraction(0))) / l
                if val:
                    g[((k,), (l,))] = val
    dg = log_derivative(chart, g)
    keys = set(dg) | set(h)
    residual = {key: dg.get(key, 0) - h.get(key, 0) for key in keys}
    residual = {k: v for k, v in residual.items() if v}
    return LogSolution(g, residual, (chart.K, chart.S))


@dataclass(frozen=True)
class PullbackCertificate:
    """``h = sum_k h_k (log y)^k`` with ``h_k`` a series in ``y = x1 x2``."""

    series: dict  # k -> {power of y: coefficient}


def relative_log_poincare_solve(chart: TruncatedSeriesChart, h: Mapping, as_function: bool = True):
    """Relative version for ``y = x1 x2``.

    As a function: a closed ``h`` is certified to come from the base by checking
    the binomial pattern ``h[k1,k2] = binom(k1+k2, k1) h[k1+k2, 0]`` and that
    only diagonal monomials ``(x1 x2)^l`` occur. Otherwise the relative form
    ``h dx1/x1`` is integrated: off-diagonal terms divide by ``l1 - l2`` in
    descending log degree, diagonal terms climb one log degree.
    """
    if chart.nvars != 2:
        raise ValueError("two-variable chart expected")
    h = chart.element(h)
    if as_function:
        dh = relative_log_derivative(chart, h)
        if dh:
            return NotClosed(dh)
        series: dict = {}
        for ((k1, k2), (l1, l2)), c in h.items():
            if l1 != l2:
                raise AssertionError("closed element with an off-diagonal term")
            base = h.get(((k1 + k2, 0), (l1, l2)), Fraction(0))
            if c != comb(k1 + k2, k1) * base:
                raise AssertionError("closed element violates the binomial pattern")
            if k2 == 0:
                series.setdefault(k1, {})[l1] = c
        return PullbackCertificate({k: dict(sorted(v.items())) for k, v in sorted(series.items())})
    g: dict = {}
    K, S = chart.K, chart.S
    for l1, l2 in itertools.product(range(S), repeat=2):
        if l1 != l2:
            for s in range(K, -1, -1):
                for k1 in range(s, -1, -1):
                    k2 = s - k1
                    val = h.get(((k1, k2), (l1, l2)), Fraction(0))
                    val -= (k1 + 1) * g.get(((k1 + 1, k2), (l1, l2)), Fraction(0))
                    val += (k2 + 1) * g.get(((k1, k2 + 1), (l1, l2)), Fraction(0))
                    if val:
                        g[((k1, k2), (l1, l2))] = val / (l1 - l2)
        else:
            for s in range(K + 1):
                if not any(h.get(((k1, s - k1), (l1, l2))) for k1 in range(s + 1)):
                    continue
                if s + 1 > K:
                    raise TruncationTooSmall("solution needs log degree above K")
                prev = Fraction(0)  # g[0, s+1]
                for k1 in range(s + 1):
                    k2 = s - k1
                    val = (h.get(((k1, k2), (l1, l2)), Fraction(0)) + (k2 + 1) * prev) / (k1 + 1)
                    if val:
                        g[((k1 + 1, k2), (l1, l2))] = g.get(((k1 + 1, k2), (l1, l2)), 0) + val
                    prev = g.get(((k1 + 1, k2), (l1, l2)), Fraction(0))
    dg = relative_log_derivative(chart, g)
    keys = set(dg) | set(h)
    residual = {key: dg.get(key, 0) - h.get(key, 0) for key in keys}
    return LogSolution(g, {k: v for k, v in residual.items() if v}, (K, S))
