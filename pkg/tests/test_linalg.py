from fractions import Fraction
import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form

from torofiber import linalg
from conftest import int_matrices, square_matrices
from oracles import brute_hilbert_basis


def sym(A):
    return sympy.Matrix(A)


def is_row_hnf(H):
    last = -1
    seen_zero = False
    for row in H:
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            seen_zero = True
            continue
        if seen_zero:
            return False
        p = nz[0]
        if p <= last or row[p] <= 0:
            return False
        last = p
    # entries above each pivot are reduced
    for i, row in enumerate(H):
        nz = [j for j, x in enumerate(row) if x]
        if nz:
            p = nz[0]
            if any(not 0 <= H[k][p] < row[p] for k in range(i)):
                return False
    return True


@given(int_matrices())
def test_hnf_structure(A):
    res = linalg.hnf(A)
    assert sym(res.left) * sym(A) == sym(res.form)
    assert abs(sym(res.left).det()) == 1
    assert is_row_hnf(res.form)
    assert linalg.int_rank(A) == sym(A).rank()


@given(int_matrices())
def test_hnf_is_canonical(A):
    # same row lattice -> same form
    B = [row[:] for row in A]
    if len(A) >= 2:
        B[1] = [b + 3 * a for a, b in zip(A[0], A[1])]
        B[0], B[1] = B[1], B[0]
    assert linalg.hnf(A).form == linalg.hnf(B).form


@given(int_matrices())
def test_snf_against_sympy(A):
    res = linalg.snf(A)
    assert sym(res.left) * sym(A) * sym(res.right) == sym(res.form)
    assert abs(sym(res.left).det()) == 1 and abs(sym(res.right).det()) == 1
    d = res.diagonal
    assert all(x >= 0 for x in d)
    assert all(b % a == 0 for a, b in zip(d, d[1:]) if a)
    ref = smith_normal_form(sym(A), domain=sympy.ZZ)
    ref_diag = [abs(ref[i, i]) for i in range(min(ref.shape))]
    assert sorted(x for x in d if x) == sorted(x for x in ref_diag if x)


@given(square_matrices())
def test_det_against_sympy(A):
    assert linalg.det(A) == sym(A).det()


@given(int_matrices(max_rows=3, max_cols=5))
def test_kernel_basis(A):
    K = linalg.kernel_basis(A)
    n = len(A[0])
    k = len(K[0]) if K and K[0] else 0
    assert k == n - sym(A).rank()
    if k:
        assert all(x == 0 for x in sym(A) * sym(K))
        # saturated: the kernel lattice basis has trivial invariant factors
        assert all(x == 1 for x in linalg.invariant_factors(K))


@given(int_matrices(max_rows=4, max_cols=4))
def test_rational_rank_and_nullspace(A):
    assert linalg.rank_rational(A) == sym(A).rank()
    for v in linalg.nullspace_rational(A):
        assert all(x == 0 for x in sym(A) * sympy.Matrix(v))


@given(square_matrices(max_n=3))
def test_inverse_roundtrip(A):
    assume(linalg.det(A) != 0)
    inv = linalg.inverse_rational(A)
    assert sym(A) * sym(inv) == sympy.eye(len(A))


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=4))
def test_primitive(v):
    assume(any(v))
    p = linalg.primitive(v)
    g = sympy.gcd_list([abs(x) for x in p])
    assert g == 1
    ratio = {Fraction(a, b) for a, b in zip(v, p) if b}
    assert len(ratio) == 1 and ratio.pop() > 0


@pytest.mark.parametrize(
    "rays",
    [
        [(1, 0), (1, 2)],
        [(1, 0), (0, 1)],
        [(2, -1), (1, 3)],
        [(1, 0, 0), (0, 1, 0), (1, 1, 2)],
    ],
)
def test_hilbert_basis_examples(rays):
    assert sorted(linalg.hilbert_basis_simplicial(rays)) == brute_hilbert_basis(rays)


def test_hilbert_basis_of_index_two_cone():
    assert sorted(linalg.hilbert_basis_simplicial([(1, 0), (1, 2)])) == [(1, 0), (1, 1), (1, 2)]


@given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=2, max_size=2))
def test_sublattice_index_is_abs_det(B):
    d = abs(linalg.det(B))
    idx = linalg.sublattice_index(B, 2)
    assert idx == (d if d else float("inf"))
