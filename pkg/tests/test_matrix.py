import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from sigflow.algebra import FONE, Frac, Poly, X, is_rational_fraction, parse_poly
from sigflow.errors import ShapeMismatch
from sigflow.matrix import (
    Matrix, hnf, kernel, matrix_from_json, matrix_to_json, pullback, pushout, rank,
    rank_solve, rational_form,
)

HNF_EXAMPLE = [[3, -1, 0, 0], [-2, 1, 4, -4], [-1, 0, 0, 0], [0, 0, 0, 0], [-15, 3, 0, 0]]


def int_matrices(max_dim=6, bound=5):
    return st.integers(1, max_dim).flatmap(lambda r: st.integers(1, max_dim).flatmap(
        lambda c: st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c),
                           min_size=r, max_size=r).map(lambda g: Matrix(g, "Int"))))


small_poly = st.lists(st.integers(-2, 2), max_size=3).map(lambda cs: Poly([mpq(c) for c in cs]))


def poly_matrices(max_dim=4):
    return st.integers(1, max_dim).flatmap(lambda r: st.integers(1, max_dim).flatmap(
        lambda c: st.lists(st.lists(small_poly, min_size=c, max_size=c),
                           min_size=r, max_size=r).map(lambda g: Matrix(g, "PolyQ"))))


def is_unit(dom, d):
    if dom == "Int":
        return d in (1, -1)
    return bool(d) and d.degree == 0


def check_hnf(M, res):
    B, U = res.B, res.U
    assert M @ U == B
    assert is_unit(M.domain, U.det())
    # zero columns first, then pivot columns with strictly increasing pivot rows
    for j in range(res.r):
        assert not any(B.column(j))
    rows = [res.pivot_row[j] for j in range(res.r, B.cols)]
    assert sorted(res.pivot_row) == list(range(res.r, B.cols))
    assert rows == sorted(rows) and len(set(rows)) == len(rows)
    for j, i in res.pivot_row.items():
        col = B.column(j)
        assert col[i]
        assert not any(col[i + 1:])


def test_hnf_golden_example():
    res = hnf(Matrix(HNF_EXAMPLE, "Int"))
    assert res.r == 1
    assert res.U.column(0) == (0, 0, 1, 1)
    check_hnf(Matrix(HNF_EXAMPLE, "Int"), res)


def test_hnf_identity():
    res = hnf(Matrix.identity(3, "Int"))
    assert res.B == Matrix.identity(3, "Int") and res.U == Matrix.identity(3, "Int") and res.r == 0


def test_hnf_polynomial_row():
    M = Matrix([[X, X * X]], "PolyQ")
    res = hnf(M)
    check_hnf(M, res)
    assert res.B.entries == ((Poly([]), X),)


@settings(max_examples=100, deadline=None)
@given(int_matrices())
def test_hnf_invariants_int(M):
    check_hnf(M, hnf(M))


@settings(max_examples=100, deadline=None)
@given(poly_matrices())
def test_hnf_invariants_poly(M):
    check_hnf(M, hnf(M))


def test_kernel_golden():
    K = kernel(Matrix(HNF_EXAMPLE, "Int"))
    assert K.cols == 1 and K.column(0) == (0, 0, 1, 1)


def test_kernel_identity_is_empty():
    assert kernel(Matrix.identity(3, "FieldQ")).cols == 0


def test_kernel_over_field_is_canonical():
    K = kernel(Matrix([[1, 1]], "FieldQ"))
    assert K.column(0) == (1, -1)


def test_kernel_over_rational_functions():
    # frozen oracle: null space of [[1, x, 0], [x, 1, 1 - x]] is (x/(1+x), -1/(1+x), 1)
    M = Matrix([[1, X, 0], [X, 1, Poly([1, -1])]], "FieldQx")
    K = kernel(M)
    assert K.cols == 1
    v = K.column(0)
    w = (Frac(X, Poly([1, 1])), Frac(-1, Poly([1, 1])), FONE)
    ratio = v[2] / w[2]
    assert all(a == ratio * b for a, b in zip(v, w))


@settings(max_examples=60, deadline=None)
@given(int_matrices(5, 3), st.data())
def test_kernel_complete(M, data):
    K = kernel(M)
    assert K.cols == M.cols - rank(M)
    assert not any(any(r) for r in (M @ K).entries) if K.cols else True
    # anything built from the kernel is in it; anything in the rational null space is in its span
    _, null = rank_solve(M.to_field(), [0] * M.rows)
    assert rank(K.to_field().hstack(null)) == K.cols


def test_pullback_scalar():
    C, D = pullback(Matrix([[2]], "Int"), Matrix([[3]], "Int"))
    assert C.entries == ((3,),) and D.entries == ((2,),)


def test_pullback_identity():
    I = Matrix.identity(2, "Int")
    C, D = pullback(I, I)
    assert C == D and is_unit("Int", C.det())


def test_pullback_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        pullback(Matrix([[1]], "Int"), Matrix([[1], [1]], "Int"))


@settings(max_examples=50, deadline=None)
@given(int_matrices(3, 3), int_matrices(3, 3), st.data())
def test_pullback_commutes_and_is_universal(A, B, data):
    if A.rows != B.rows:
        B = Matrix([list(B.entries[i % B.rows]) for i in range(A.rows)], "Int")
    C, D = pullback(A, B)
    assert A @ C == B @ D
    # a commuting competitor: any integer combination of kernel vectors of (A | -B)
    k = C.cols
    if not k:
        return
    Hgrid = data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=k, max_size=k))
    H = Matrix(Hgrid, "Int")
    P, Q = C @ H, D @ H
    assert A @ P == B @ Q
    stacked = C.vstack(D).to_field()
    sol_cols = []
    for j in range(H.cols):
        rhs = list(P.to_field().column(j)) + list(Q.to_field().column(j))
        sol, ker = rank_solve(stacked, rhs)
        assert sol is not None and ker.cols == 0
        sol_cols.append(sol)
        assert all(s.is_integer() if hasattr(s, "is_integer") else s.denominator == 1 for s in sol)


def test_pushout_is_transposed_pullback():
    C, D = pushout(Matrix([[2]], "Int"), Matrix([[3]], "Int"))
    assert C.entries == ((3,),) and D.entries == ((2,),)


def test_rank_solve_examples():
    sol, K = rank_solve(Matrix([[1, 1]], "FieldQ"), [2])
    assert list(sol) == [2, 0] and K.column(0) == (1, -1)
    sol, K = rank_solve(Matrix([[1], [1]], "FieldQ"), [1, 2])
    assert sol is None
    sol, K = rank_solve(Matrix.identity(2, "FieldQ"), [3, 4])
    assert list(sol) == [3, 4] and K.cols == 0
    with pytest.raises(ShapeMismatch):
        rank_solve(Matrix.identity(2, "FieldQ"), [1])


def test_rational_form_examples():
    fib = Matrix([[parse_poly("1 - x - x^2"), -1]], "FieldQx")
    res = rational_form(fib)
    assert res.pivot == {0: 1}
    assert res.Mhat.entries[0] == (Frac(parse_poly("x^2 + x - 1")), FONE)

    res = rational_form(Matrix([[X, 1]], "FieldQx"))
    assert res.pivot == {0: 1} and res.Mhat.entries[0] == (Frac(X), FONE)

    res = rational_form(Matrix([[X, X * X]], "FieldQx"))
    assert res.pivot == {0: 0} and res.Mhat.entries[0] == (FONE, Frac(X))


def test_rational_form_avoid():
    res = rational_form(Matrix([[1, 1]], "FieldQx"), avoid=[0])
    assert res.pivot == {0: 1}


rat_entries = st.builds(
    lambda n, d: Frac(n, d) if d else Frac(n),
    small_poly, small_poly,
)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3).flatmap(lambda r: st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(rat_entries, min_size=c, max_size=c), min_size=r, max_size=r))))
def test_rational_form_invariants(grid):
    M = Matrix(grid, "FieldQx")
    res = rational_form(M)
    Mh = res.Mhat
    assert Mh.rows == M.rows
    for row in Mh.entries:
        assert all(is_rational_fraction(e) for e in row)
    for r, c in res.pivot.items():
        assert Mh[r, c] == FONE
        assert all(not Mh[i, c] for i in range(Mh.rows) if i != r)
    assert kernel(Mh) == kernel(M)


def test_json_round_trip():
    M = Matrix([[Frac(X, parse_poly("1 - x")), 2]], "FieldQx")
    obj = matrix_to_json(M)
    assert obj["domain"] == "Qx" and obj["rows"] == 1 and obj["cols"] == 2
    assert matrix_from_json(obj) == M
    Z = Matrix(HNF_EXAMPLE, "Int")
    assert matrix_from_json(matrix_to_json(Z)) == Z
