"""Exact integer and rational linear algebra.

Integer matrices are plain ``list[list[int]]`` in row-major order; Python ints
are arbitrary precision, so nothing here can overflow. Rational routines work
on ``Fraction`` entries and are tuned for the sparse, small matrices produced
by the cohomology code (rows are stored as dicts during elimination).

HNF convention (row style): ``U @ A == H`` with ``U`` unimodular; the nonzero
rows of ``H`` come first, each pivot is positive, pivot columns strictly
increase, and the entries above a pivot lie in ``[0, pivot)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import NonSimplicial

Matrix = list  # list[list[int]] or list[list[Fraction]]


# ---------------------------------------------------------------------------
# basic helpers


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def shape(A: Matrix, cols: Optional[int] = None) -> tuple[int, int]:
    if not A:
        return 0, (cols or 0)
    return len(A), len(A[0])


def transpose(A: Matrix, cols: int = 0) -> Matrix:
    if not A:
        return [[] for _ in range(cols)]
    return [list(r) for r in zip(*A)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    inner = len(A[0])
    if inner == 0:
        ncols = len(B[0]) if B else 0
        return [[0] * ncols for _ in A]
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Matrix, v: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def det(A: Matrix) -> int:
    """Determinant of a square integer matrix (Bareiss, fraction free)."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def is_unimodular(U: Matrix) -> bool:
    if not U:
        return True
    return len(U) == len(U[0]) and abs(det(U)) == 1


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = math.gcd(g, int(x))
    if g == 0:
        return tuple(int(x) for x in v)
    return tuple(int(x) // g for x in v)


def primitive_from_rational(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Smallest positive integer multiple of a rational vector, made primitive."""
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    return primitive([int(Fraction(x) * den) for x in v])


# ---------------------------------------------------------------------------
# normal forms


@dataclass(frozen=True)
class NormalFormResult:
    form: Matrix
    left: Matrix
    right: Optional[Matrix] = None

    @property
    def diagonal(self) -> list[int]:
        rows, cols = len(self.form), (len(self.form[0]) if self.form else 0)
        return [self.form[i][i] for i in range(min(rows, cols))]


def hnf(A: Matrix, cols: Optional[int] = None) -> NormalFormResult:
    """Row-style Hermite normal form: returns ``H, U`` with ``U @ A == H``."""
    m = len(A)
    n = len(A[0]) if A else (cols or 0)
    H = [[int(x) for x in row] for row in A]
    U = identity(m)

    def addrow(dst, src, q):
        if q:
            H[dst] = [a - q * b for a, b in zip(H[dst], H[src])]
            U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    r = 0
    for j in range(n):
        if r >= m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][j] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][j]))
            if p != r:
                H[r], H[p] = H[p], H[r]
                U[r], U[p] = U[p], U[r]
            done = True
            for i in range(r + 1, m):
                if H[i][j]:
                    addrow(i, r, H[i][j] // H[r][j])
                    if H[i][j]:
                        done = False
            if done:
                break
        if H[r][j] == 0:
            continue
        if H[r][j] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            addrow(i, r, H[i][j] // H[r][j])
        r += 1
    return NormalFormResult(H, U)


def snf(A: Matrix, cols: Optional[int] = None) -> NormalFormResult:
    """Smith normal form: returns ``S, U, V`` with ``U @ A @ V == S``."""
    m = len(A)
    n = len(A[0]) if A else (cols or 0)
    S = [[int(x) for x in row] for row in A]
    U = identity(m)
    V = identity(n)

    def row_op(dst, src, q):
        S[dst] = [a - q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    def col_op(dst, src, q):
        for row in S:
            row[dst] -= q * row[src]
        for row in V:
            row[dst] -= q * row[src]

    def swap_rows(a, b):
        S[a], S[b] = S[b], S[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a, b):
        for row in S:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
            if not entries:
                break
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    row_op(i, t, S[i][t] // S[t][t])
                    clean = clean and S[i][t] == 0
            for j in range(t + 1, n):
                if S[t][j]:
                    col_op(j, t, S[t][j] // S[t][t])
                    clean = clean and S[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % S[t][t]),
                None,
            )
            if bad is None:
                break
            row_op(t, bad, -1)
        if t < m and t < n and S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    return NormalFormResult(S, U, V)


def invariant_factors(A: Matrix) -> list[int]:
    return [d for d in snf(A).diagonal if d != 0]


def int_rank(A: Matrix) -> int:
    return len(invariant_factors(A)) if A and A[0] else 0


# ---------------------------------------------------------------------------
# lattices


def kernel_basis(A: Matrix, cols: Optional[int] = None) -> Matrix:
    """Columns form a basis of the integer kernel of ``A`` (always saturated).

    ``A`` is ``m x n``; the result is ``n x k``. For ``m == 0`` pass ``cols``.
    """
    n = len(A[0]) if A else (cols or 0)
    if n == 0:
        return []
    At = transpose(A, n) if A else [[] for _ in range(n)]
    res = hnf(At, cols=len(A))
    zero_rows = [i for i, row in enumerate(res.form) if not any(row)]
    vecs = [res.left[i] for i in zero_rows]
    # canonical: HNF of the kernel rows, so output is deterministic
    if vecs:
        vecs = [row for row in hnf(vecs).form if any(row)]
    return transpose(vecs, n) if vecs else [[] for _ in range(n)]


def columns(A: Matrix) -> list[tuple]:
    if not A or not A[0]:
        return []
    return [tuple(c) for c in zip(*A)]


def from_columns(cols: Sequence[Sequence[int]], rows: int) -> Matrix:
    if not cols:
        return [[] for _ in range(rows)]
    return [list(r) for r in zip(*cols)]


def sublattice_index(B: Matrix, r: int):
    """Index of the lattice spanned by the columns of ``B`` in ``Z^r``.

    Returns ``math.inf`` on a rank deficit.
    """
    if not B or not B[0]:
        return 1 if r == 0 else math.inf
    d = invariant_factors(B)
    if len(d) < r:
        return math.inf
    return math.prod(d)


def saturation_basis(vectors: Sequence[Sequence[int]], ambient: int) -> Matrix:
    """Basis (as columns) of ``Z^ambient`` intersected with the real span of ``vectors``."""
    if not vectors:
        return [[] for _ in range(ambient)]
    R = [list(v) for v in vectors]  # rows = vectors, so kernel(R) = annihilator
    W = kernel_basis(R, cols=ambient)
    wcols = columns(W)
    if not wcols:
        return identity(ambient)
    return kernel_basis([list(w) for w in wcols], cols=ambient)


def lattice_coordinates(basis: Matrix, v: Sequence[int]) -> list[Fraction]:
    """Coordinates of ``v`` in the column basis ``basis`` (must lie in the span)."""
    sol = solve_rational(basis, list(v))
    if sol is None:
        raise ValueError("vector not in span of basis")
    return sol


def parallelepiped_points(rays: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Lattice points of the half-open parallelepiped spanned by independent ``rays``.

    The lattice is ``Z^d`` intersected with the span of the rays. Points are
    enumerated through the Smith form of the ray coordinates; the origin is
    included.
    """
    rays = [tuple(int(x) for x in r) for r in rays]
    if not rays:
        return [()]
    d = len(rays[0])
    k = len(rays)
    if rank_rational([list(r) for r in rays]) < k:
        raise NonSimplicial(f"rays {rays} are linearly dependent")
    B = saturation_basis(rays, d)  # d x k
    C = [[0] * k for _ in range(k)]
    for j, r in enumerate(rays):
        coords = lattice_coordinates(B, r)
        for i in range(k):
            C[i][j] = int(coords[i])
    res = snf(C)
    diag = res.diagonal
    Uinv = inverse_rational(res.left)
    Cinv = inverse_rational(C)
    out = set()
    for a in itertools.product(*[range(di) for di in diag]):
        v = [sum(Uinv[i][j] * a[j] for j in range(k)) for i in range(k)]
        lam = [sum(Cinv[i][j] * v[j] for j in range(k)) for i in range(k)]
        frac = [x - math.floor(x) for x in lam]
        w = [sum(C[i][j] * frac[j] for j in range(k)) for i in range(k)]
        out.add(tuple(int(sum(B[i][j] * w[j] for j in range(k))) for i in range(d)))
    return sorted(out)


def hilbert_basis_simplicial(rays: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Minimal generating set of the semigroup (cone ∩ lattice) of a simplicial cone.

    ``rays`` are the cone generators (not necessarily primitive); the lattice is
    the full integer lattice intersected with their span. Fundamental
    parallelepiped points are the candidates, together with the rays, and
    reducible candidates are discarded.
    """
    rays = [tuple(int(x) for x in r) for r in rays]
    if not rays:
        return []
    d = len(rays[0])
    candidates = {p for p in parallelepiped_points(rays) if any(p)}
    candidates.update(rays)
    Rcols = from_columns(rays, d)

    def in_cone(v):
        lam = solve_rational(Rcols, list(v))
        return lam is not None and all(x >= 0 for x in lam)

    basis = []
    for x in candidates:
        reducible = False
        for y in candidates:
            if y == x:
                continue
            diff = tuple(a - b for a, b in zip(x, y))
            if any(diff) and in_cone(diff):
                reducible = True
                break
        if not reducible:
            basis.append(x)
    return sorted(basis)


# ---------------------------------------------------------------------------
# rational linear algebra


def _frac_rows(A: Matrix) -> list[dict]:
    rows = []
    for row in A:
        rows.append({j: Fraction(x) for j, x in enumerate(row) if x})
    return rows


def rref_rows(rows: list[dict], order: Optional[Sequence[int]] = None):
    """Reduced row echelon form of sparse rows.

    ``order`` gives the column priority for pivots (default: ascending). Returns
    ``(reduced_rows, pivots)`` where ``reduced_rows[i]`` has pivot ``pivots[i]``
    with coefficient 1.
    """
    if order is None:
        cols = sorted({j for r in rows for j in r})
    else:
        cols = list(order)
    rank_of = {c: i for i, c in enumerate(cols)}
    work = [dict(r) for r in rows if r]
    pivots: list = []
    reduced: list[dict] = []
    for row in work:
        # eliminate existing pivots
        for p, prow in zip(pivots, reduced):
            c = row.get(p)
            if c:
                for j, v in prow.items():
                    nv = row.get(j, 0) - c * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
        if not row:
            continue
        p = min(row, key=lambda j: rank_of[j])
        c = row[p]
        row = {j: v / c for j, v in row.items()}
        for prow in reduced:
            cc = prow.get(p)
            if cc:
                for j, v in row.items():
                    nv = prow.get(j, 0) - cc * v
                    if nv:
                        prow[j] = nv
                    else:
                        prow.pop(j, None)
        pivots.append(p)
        reduced.append(row)
    idx = sorted(range(len(pivots)), key=lambda i: rank_of[pivots[i]])
    return [reduced[i] for i in idx], [pivots[i] for i in idx]


def rank_rational(A: Matrix) -> int:
    if not A:
        return 0
    return len(rref_rows(_frac_rows(A))[1])


def rank_sparse(rows: list[dict]) -> int:
    return len(rref_rows(rows)[1])


def nullspace_rational(A: Matrix, cols: Optional[int] = None) -> list[list[Fraction]]:
    """Basis of the right kernel of ``A`` over Q (list of vectors)."""
    n = len(A[0]) if A else (cols or 0)
    red, piv = rref_rows(_frac_rows(A), order=range(n))
    free = [j for j in range(n) if j not in set(piv)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for p, row in zip(piv, red):
            v[p] = -row.get(f, Fraction(0))
        basis.append(v)
    return basis


def solve_rational(A: Matrix, b: Sequence) -> Optional[list[Fraction]]:
    """One solution ``x`` of ``A x = b`` (free variables set to zero), or None."""
    m = len(A)
    n = len(A[0]) if A else 0
    if m == 0:
        return [Fraction(0)] * n if not any(b) else None
    aug = [row + [b[i]] for i, row in enumerate(A)]
    red, piv = rref_rows(_frac_rows(aug), order=range(n + 1))
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for p, row in zip(piv, red):
        x[p] = row.get(n, Fraction(0))
    return x


def inverse_rational(A: Matrix) -> list[list[Fraction]]:
    n = len(A)
    aug = [list(A[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    red, piv = rref_rows(_frac_rows(aug), order=range(2 * n))
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return [[red[i].get(n + j, Fraction(0)) for j in range(n)] for i in range(n)]


def row_space_basis(A: Matrix) -> list[list[Fraction]]:
    n = len(A[0]) if A else 0
    red, _ = rref_rows(_frac_rows(A), order=range(n))
    return [[r.get(j, Fraction(0)) for j in range(n)] for r in red]


def nonneg_solution(A: Matrix, b: Sequence) -> Optional[list[Fraction]]:
    """Exact feasibility of ``A x = b, x >= 0`` by enumerating basic solutions.

    Returns a basic feasible solution or None. Exponential in the number of
    columns; intended for the handful of rays in a desk-scale cone check.
    """
    n = len(A[0]) if A else 0
    m = len(A)
    aug = [list(A[i]) + [b[i]] for i in range(m)]
    red, piv = rref_rows(_frac_rows(aug), order=range(n + 1))
    if n in piv:
        return None
    r = len(piv)
    if r == 0:
        return [Fraction(0)] * n
    R = [[row.get(j, Fraction(0)) for j in range(n)] for row in red]
    rhs = [row.get(n, Fraction(0)) for row in red]
    for basis in itertools.combinations(range(n), r):
        sub = [[R[i][j] for j in basis] for i in range(r)]
        if rank_rational(sub) < r:
            continue
        sol = solve_rational(sub, rhs)
        if sol is not None and all(x >= 0 for x in sol):
            x = [Fraction(0)] * n
            for j, v in zip(basis, sol):
                x[j] = v
            return x
    return None
