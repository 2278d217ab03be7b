"""Linear relations: subspaces of Q(x)^n x Q(x)^m.

A ``LinRel`` keeps its spanning vectors in reduced row echelon form over the
coordinate order ``(left_1..left_n, right_1..right_m)``.  Seen as the columns
of the basis matrix that is reduced column echelon form, and it is unique for
the subspace, so ``==`` decides equality of relations.

The elimination helpers are field-generic, so ``compose_rows`` and friends are
also used by the machine module with plain rationals.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import FONE, FZERO, as_frac, frac_from_json, frac_to_json
from .errors import ArityMismatch, IndexOutOfRange, LengthMismatch, SigflowError
from .matrix import Matrix, nullspace, rank_of, rref


def compose_rows(A, nx, nv, B, ny, zero, one):
    """Relational composite of ``A`` over ``x (+) v`` and ``B`` over ``v (+) y``.

    Returns canonical rows over ``x (+) y`` spanning
    ``{(a, c) : exists b. (a, b) in A and (b, c) in B}``.
    """
    dA, dB = len(A), len(B)
    # Coefficients (s, t) with  s.A_v - t.B_v = 0.
    eqs = []
    for k in range(nv):
        eqs.append([a[nx + k] for a in A] + [-b[k] for b in B])
    sols = nullspace(eqs, dA + dB, zero, one) if dA + dB else []
    out = []
    for sol in sols:
        s, t = sol[:dA], sol[dA:]
        vec = [zero] * (nx + ny)
        for c, a in zip(s, A):
            if c:
                for i in range(nx):
                    if a[i]:
                        vec[i] = vec[i] + c * a[i]
        for c, b in zip(t, B):
            if c:
                for i in range(ny):
                    if b[nv + i]:
                        vec[nx + i] = vec[nx + i] + c * b[nv + i]
        out.append(vec)
    return rref(out, nx + ny)[0]


def permute_rows(rows, order):
    """Coordinates of the result are ``old[order[0]], old[order[1]], ...``."""
    return [tuple(r[i] for i in order) for r in rows]


def direct_sum_rows(A, na, B, nb, zero):
    return [tuple(a) + (zero,) * nb for a in A] + [(zero,) * na + tuple(b) for b in B]


class LinRel:
    """Subspace of ``Q(x)^n x Q(x)^m`` read as a relation from n to m."""

    __slots__ = ("n", "m", "rows")

    def __init__(self, n: int, m: int, vectors=()):
        vecs = []
        for v in vectors:
            if len(v) != n + m:
                raise LengthMismatch(f"vector of length {len(v)} for a relation {n} -> {m}")
            vecs.append([as_frac(c) for c in v])
        self.n = n
        self.m = m
        self.rows = tuple(rref(vecs, n + m)[0])

    @classmethod
    def _canonical(cls, n, m, rows) -> LinRel:
        r = object.__new__(cls)
        r.n = n
        r.m = m
        r.rows = tuple(tuple(v) for v in rows)
        return r

    @classmethod
    def _from_rows(cls, n, m, rows) -> LinRel:
        return cls._canonical(n, m, rref(rows, n + m)[0])

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> Matrix:
        """Basis as the columns of an ``(n+m) x d`` matrix."""
        k = self.n + self.m
        return Matrix._raw(tuple(tuple(v[i] for v in self.rows) for i in range(k)), "FieldQx", len(self.rows))

    def __eq__(self, other):
        if not isinstance(other, LinRel):
            return NotImplemented
        return (self.n, self.m, self.rows) == (other.n, other.m, other.rows)

    def __hash__(self):
        return hash((self.n, self.m, self.rows))

    def contains(self, vec) -> bool:
        vec = [as_frac(c) for c in vec]
        if len(vec) != self.n + self.m:
            raise LengthMismatch("vector length does not match the relation")
        return rank_of(list(self.rows) + [vec], self.n + self.m) == self.dim

    def __repr__(self):
        vecs = ", ".join(
            "((" + ", ".join(str(c) for c in v[: self.n]) + "), (" + ", ".join(str(c) for c in v[self.n:]) + "))"
            for v in self.rows
        )
        return f"LinRel({self.n}->{self.m}: [{vecs}])"


def from_vectors(n: int, m: int, vectors) -> LinRel:
    return LinRel(n, m, vectors)


def identity(n: int) -> LinRel:
    return LinRel._canonical(n, n, [tuple(FONE if j in (i, n + i) else FZERO for j in range(2 * n)) for i in range(n)])


def zero_relation(n: int, m: int) -> LinRel:
    return LinRel._canonical(n, m, ())


def full_relation(n: int, m: int) -> LinRel:
    k = n + m
    return LinRel._canonical(n, m, [tuple(FONE if i == j else FZERO for j in range(k)) for i in range(k)])


def symmetry(a: int, b: int) -> LinRel:
    """Graph of the block swap ``(u, v) -> (v, u)`` from ``a+b`` to ``b+a``."""
    k = a + b
    vecs = []
    for i in range(k):
        left = [FZERO] * k
        right = [FZERO] * k
        left[i] = FONE
        right[i - a if i >= a else b + i] = FONE
        vecs.append(left + right)
    return LinRel._from_rows(k, k, vecs)


def graph(A: Matrix) -> LinRel:
    """``{(v, A v)}`` for an ``m x n`` matrix ``A``."""
    n, m = A.cols, A.rows
    vecs = []
    for i in range(n):
        vecs.append([FONE if j == i else FZERO for j in range(n)] + [as_frac(A[r, i]) for r in range(m)])
    return LinRel._from_rows(n, m, vecs)


def compose(S: LinRel, T: LinRel) -> LinRel:
    if S.m != T.n:
        raise ArityMismatch(f"cannot compose {S.n}->{S.m} with {T.n}->{T.m}")
    return LinRel._canonical(S.n, T.m, compose_rows(S.rows, S.n, S.m, T.rows, T.m, FZERO, FONE))


def direct_sum(S: LinRel, T: LinRel) -> LinRel:
    rows = direct_sum_rows(S.rows, S.n + S.m, T.rows, T.n + T.m, FZERO)
    # reorder (Sl, Sr, Tl, Tr) -> (Sl, Tl, Sr, Tr)
    a = S.n + S.m
    order = (list(range(S.n)) + list(range(a, a + T.n))
             + list(range(S.n, a)) + list(range(a + T.n, a + T.n + T.m)))
    return LinRel._from_rows(S.n + T.n, S.m + T.m, permute_rows(rows, order))


def converse(S: LinRel) -> LinRel:
    order = list(range(S.n, S.n + S.m)) + list(range(S.n))
    return LinRel._from_rows(S.m, S.n, permute_rows(S.rows, order))


def equals(S: LinRel, T: LinRel) -> bool:
    if (S.n, S.m) != (T.n, T.m):
        raise ArityMismatch(f"comparing {S.n}->{S.m} with {T.n}->{T.m}")
    return S.rows == T.rows


def as_kernel_matrix(S: LinRel) -> Matrix:
    """Matrix ``M`` in reduced row echelon form with ``null(M) = S``."""
    k = S.n + S.m
    rows = nullspace(S.rows, k, FZERO, FONE)
    return Matrix._raw(tuple(rows), "FieldQx", k)


def from_kernel_matrix(M: Matrix, n: int, m: int) -> LinRel:
    if M.cols != n + m:
        raise LengthMismatch(f"matrix has {M.cols} columns, expected {n + m}")
    return LinRel._canonical(n, m, nullspace(M.entries, n + m, FZERO, FONE))


def as_graph(S: LinRel):
    """The ``m x n`` matrix ``A`` with ``S = {(v, A v)}``, or None."""
    n = S.n
    if S.dim != n:
        return None
    # In reduced echelon form a functional relation has the identity as its
    # left block, because the left projection is then injective and onto.
    for i, row in enumerate(S.rows):
        for j in range(n):
            if bool(row[j]) != (i == j):
                return None
    return Matrix._raw(tuple(tuple(S.rows[i][n + r] for i in range(n)) for r in range(S.m)), "FieldQx", n)


@dataclass(frozen=True)
class Move:
    """One rewiring primitive.

    ``bend_left``: the first left port becomes the first right port.
    ``bend_right``: the first right port becomes the first left port.
    ``permute_left`` / ``permute_right``: new port ``i`` on that side is old
    port ``perm[i]``.
    """

    kind: str
    perm: tuple = ()

    def to_json(self):
        if self.perm:
            return {"move": self.kind, "perm": list(self.perm)}
        return {"move": self.kind}

    @classmethod
    def from_json(cls, obj) -> "Move":
        return cls(obj["move"], tuple(obj.get("perm", ())))


BEND_LEFT = Move("bend_left")
BEND_RIGHT = Move("bend_right")


def apply_move_to_ports(move: Move, left: list, right: list):
    """Apply a move to lists of port labels; returns new ``(left, right)``."""
    if move.kind == "bend_left":
        if not left:
            raise IndexOutOfRange("bend_left on a relation with no left ports")
        return left[1:], [left[0]] + right
    if move.kind == "bend_right":
        if not right:
            raise IndexOutOfRange("bend_right on a relation with no right ports")
        return [right[0]] + left, right[1:]
    side = left if move.kind == "permute_left" else right
    if move.kind not in ("permute_left", "permute_right"):
        raise SigflowError(f"unknown move {move.kind!r}")
    if sorted(move.perm) != list(range(len(side))):
        raise IndexOutOfRange(f"{move.perm} is not a permutation of {len(side)} ports")
    new = [side[p] for p in move.perm]
    return (new, right) if move.kind == "permute_left" else (left, new)


def reindex(S: LinRel, moves) -> LinRel:
    """Move coordinates between the boundaries, one primitive at a time."""
    n, m = S.n, S.m
    left = list(range(n))
    right = list(range(n, n + m))
    for mv in moves:
        left, right = apply_move_to_ports(mv, left, right)
    return LinRel._from_rows(len(left), len(right), permute_rows(S.rows, left + right))


def linrel_to_json(S: LinRel) -> dict:
    return {"n": S.n, "m": S.m, "basis": [[frac_to_json(c) for c in v] for v in S.rows]}


def linrel_from_json(obj) -> LinRel:
    n, m = obj["n"], obj["m"]
    return LinRel(n, m, [[frac_from_json(c) for c in v] for v in obj["basis"]])


__all__ = [
    "LinRel", "Move", "BEND_LEFT", "BEND_RIGHT", "from_vectors", "identity", "zero_relation",
    "full_relation", "symmetry", "graph", "compose", "direct_sum", "converse", "equals",
    "as_kernel_matrix", "from_kernel_matrix", "as_graph", "reindex", "apply_move_to_ports",
    "linrel_to_json", "linrel_from_json", "compose_rows", "permute_rows", "direct_sum_rows",
]
