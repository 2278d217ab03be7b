import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sigflow.algebra import FONE, FZERO, Frac, Poly, X, parse_poly
from sigflow.errors import ArityMismatch, IndexOutOfRange, LengthMismatch
from sigflow.matrix import Matrix
from sigflow.relation import (
    BEND_LEFT, BEND_RIGHT, LinRel, Move, as_graph, as_kernel_matrix, compose, converse,
    direct_sum, equals, from_kernel_matrix, from_vectors, full_relation, graph, identity,
    linrel_from_json, linrel_to_json, reindex, symmetry, zero_relation,
)

DELAY = LinRel(1, 1, [(FONE, Frac(X))])
COPY = LinRel(1, 2, [(1, 1, 1)])
DISCARD = LinRel(1, 0, [(1,)])
FIB = LinRel(1, 1, [(FONE, Frac(X, parse_poly("1 - x - x^2")))])


small = st.integers(-3, 3).map(lambda k: Frac(k))
entries = st.one_of(small, st.sampled_from([Frac(X), Frac(1, parse_poly("1 - x")), Frac(X, parse_poly("2 + x"))]))


def relations(max_ports=2):
    def build(n, m, vecs):
        return LinRel(n, m, vecs)
    return st.integers(0, max_ports).flatmap(lambda n: st.integers(0, max_ports).flatmap(
        lambda m: st.lists(st.lists(entries, min_size=n + m, max_size=n + m), max_size=3)
        .map(lambda vs: build(n, m, vs))))


def test_basis_examples():
    assert DELAY.basis.column(0) == (FONE, Frac(X))
    assert COPY.basis.column(0) == (1, 1, 1)


def test_from_vectors_checks_length():
    with pytest.raises(LengthMismatch):
        from_vectors(1, 1, [(1,)])


def test_delay_then_codelay_is_identity():
    assert compose(DELAY, converse(DELAY)) == identity(1)


def test_compose_scalars():
    # membership oracle: every (u, x^2 u) is in delay;delay
    dd = compose(DELAY, DELAY)
    rng = random.Random(7)
    for _ in range(20):
        u = Frac(Poly([rng.randint(-5, 5) for _ in range(3)]))
        assert dd.contains((u, u * X * X))
    assert dd == LinRel(1, 1, [(1, Frac(X * X))])


def test_compose_arity():
    with pytest.raises(ArityMismatch):
        compose(COPY, COPY)


def test_direct_sum_dimension():
    assert direct_sum(COPY, DISCARD).dim == 2


def test_converse_of_delay():
    assert converse(DELAY) == LinRel(1, 1, [(Frac(X), FONE)])


def test_symmetry():
    s = symmetry(1, 1)
    assert set(s.rows) == {(1, 0, 0, 1), (0, 1, 1, 0)}
    assert symmetry(0, 2) == identity(2)
    assert compose(symmetry(1, 2), symmetry(2, 1)) == identity(3)


def test_equals():
    assert not equals(DELAY, identity(1))
    assert equals(FIB, FIB)
    with pytest.raises(ArityMismatch):
        equals(COPY, DELAY)


def test_kernel_matrix_examples():
    M = as_kernel_matrix(identity(1))
    assert M.entries == ((1, -1),)
    assert as_kernel_matrix(full_relation(1, 1)).rows == 0
    row = as_kernel_matrix(FIB).entries[0]
    # proportional to [x, -(1 - x - x^2)]
    want = (Frac(X), -Frac(parse_poly("1 - x - x^2")))
    assert row[0] * want[1] == row[1] * want[0]


def test_as_graph():
    assert as_graph(FIB).entries == ((Frac(X, parse_poly("1 - x - x^2")),),)
    assert as_graph(LinRel(1, 1, [(1, 0)])).entries == ((0,),)
    assert as_graph(converse(DELAY)).entries == ((Frac(1, X),),)
    assert as_graph(LinRel(1, 1, [(0, 1)])) is None
    assert as_graph(zero_relation(1, 1)) is None


def test_bend_identity_is_cap():
    cap = reindex(identity(1), [BEND_LEFT])
    assert (cap.n, cap.m) == (0, 2)
    assert cap == LinRel(0, 2, [(1, 1)])


def test_reindex_permutation_and_errors():
    S = LinRel(2, 0, [(1, 2)])
    assert reindex(S, [Move("permute_left", (1, 0))]) == LinRel(2, 0, [(2, 1)])
    assert reindex(S, [Move("permute_left", (0, 1))]) == S
    with pytest.raises(IndexOutOfRange):
        reindex(S, [BEND_RIGHT])
    with pytest.raises(IndexOutOfRange):
        reindex(S, [Move("permute_left", (0, 0))])


@settings(max_examples=100, deadline=None)
@given(relations(), st.data())
def test_bend_then_unbend(S, data):
    if S.n:
        assert reindex(reindex(S, [BEND_LEFT]), [BEND_RIGHT]) == S
    if S.m:
        assert reindex(reindex(S, [BEND_RIGHT]), [BEND_LEFT]) == S


@settings(max_examples=100, deadline=None)
@given(relations())
def test_kernel_matrix_round_trip(S):
    assert from_kernel_matrix(as_kernel_matrix(S), S.n, S.m) == S


@settings(max_examples=100, deadline=None)
@given(relations())
def test_converse_involution_and_identity_units(S):
    assert converse(converse(S)) == S
    assert compose(identity(S.n), S) == S
    assert compose(S, identity(S.m)) == S


@settings(max_examples=60, deadline=None)
@given(relations(1), relations(1), relations(1))
def test_compose_associative(a, b, c):
    if a.m != b.n or b.m != c.n:
        return
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@given(st.lists(st.lists(entries, min_size=2, max_size=2), min_size=1, max_size=2))
def test_graph_round_trip(grid):
    A = Matrix(grid, "FieldQx")
    assert as_graph(graph(A)) == A


@given(relations())
def test_json_round_trip(S):
    assert linrel_from_json(linrel_to_json(S)) == S
