"""Dense exact matrices over Z, Q[x], Q and Q(x).

A matrix ``A`` of shape ``z x n`` is read as a map ``n -> z``.  Over the
Euclidean domains (``Int``, ``PolyQ``) the workhorse is a column-style Hermite
normal form whose transformation matrix yields kernels and pullbacks.  Over the
fields (``FieldQ``, ``FieldQx``) plain Gauss-Jordan elimination is used, through
the list-of-rows helpers ``rref``, ``nullspace`` and ``solve`` which the
relation and machine modules share.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .algebra import (
    FONE, FZERO, Frac, Poly, as_frac, frac_from_json, frac_to_json, rat,
    valuation,
)
from .errors import ShapeMismatch, SigflowError

DOMAINS = ("Int", "PolyQ", "FieldQ", "FieldQx")


def _coerce(domain, v):
    if domain == "Int":
        if isinstance(v, int):
            return v
        q = rat(v)
        if q.denominator != 1:
            raise SigflowError(f"{v!r} is not an integer")
        return int(q.numerator)
    if domain == "PolyQ":
        if isinstance(v, Poly):
            return v
        if isinstance(v, Frac):
            if v.den != 1:
                raise SigflowError(f"{v} is not a polynomial")
            return v.num
        return Poly((v,))
    if domain == "FieldQ":
        return rat(v)
    return as_frac(v)


def _zero(domain):
    return {"Int": 0, "PolyQ": Poly(), "FieldQ": mpq(0), "FieldQx": FZERO}[domain]


def _one(domain):
    return {"Int": 1, "PolyQ": Poly((1,)), "FieldQ": mpq(1), "FieldQx": FONE}[domain]


class Matrix:
    """Immutable ``rows x cols`` grid over one of ``DOMAINS``."""

    __slots__ = ("rows", "cols", "entries", "domain")

    def __init__(self, entries, domain="FieldQx", cols=None):
        if domain not in DOMAINS:
            raise SigflowError(f"unknown domain {domain!r}")
        grid = tuple(tuple(_coerce(domain, v) for v in row) for row in entries)
        if cols is None:
            cols = len(grid[0]) if grid else 0
        if any(len(row) != cols for row in grid):
            raise ShapeMismatch("ragged matrix rows")
        self.rows = len(grid)
        self.cols = cols
        self.entries = grid
        self.domain = domain

    @classmethod
    def _raw(cls, grid, domain, cols):
        m = object.__new__(cls)
        m.rows = len(grid)
        m.cols = cols
        m.entries = grid
        m.domain = domain
        return m

    @classmethod
    def identity(cls, n, domain="FieldQx"):
        z, o = _zero(domain), _one(domain)
        return cls._raw(tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)), domain, n)

    @classmethod
    def zeros(cls, rows, cols, domain="FieldQx"):
        z = _zero(domain)
        return cls._raw(tuple((z,) * cols for _ in range(rows)), domain, cols)

    @classmethod
    def from_columns(cls, columns, rows, domain="FieldQx"):
        grid = tuple(tuple(col[i] for col in columns) for i in range(rows))
        return cls(grid, domain, cols=len(columns))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def column(self, j):
        return tuple(row[j] for row in self.entries)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> Matrix:
        return Matrix._raw(tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)),
                           self.domain, self.rows)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        dom = _join(self.domain, other.domain)
        z = _zero(dom)
        ocols = other.columns()
        grid = []
        for row in self.entries:
            out = []
            for col in ocols:
                acc = z
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                out.append(acc)
            grid.append(tuple(out))
        return Matrix._raw(tuple(grid), dom, other.cols)

    def __neg__(self):
        return Matrix._raw(tuple(tuple(-v for v in row) for row in self.entries), self.domain, self.cols)

    def __sub__(self, other):
        return self + (-other)

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeMismatch("cannot add matrices of different shapes")
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
                           _join(self.domain, other.domain), self.cols)

    def hstack(self, other: Matrix) -> Matrix:
        if self.rows != other.rows:
            raise ShapeMismatch("hstack needs equal row counts")
        return Matrix._raw(tuple(a + b for a, b in zip(self.entries, other.entries)),
                           _join(self.domain, other.domain), self.cols + other.cols)

    def vstack(self, other: Matrix) -> Matrix:
        if self.cols != other.cols:
            raise ShapeMismatch("vstack needs equal column counts")
        return Matrix._raw(self.entries + other.entries, _join(self.domain, other.domain), self.cols)

    def submatrix(self, rows, cols) -> Matrix:
        return Matrix._raw(tuple(tuple(self.entries[i][j] for j in cols) for i in rows), self.domain, len(cols))

    def to_domain(self, domain) -> Matrix:
        return Matrix(self.entries, domain, cols=self.cols)

    def to_field(self) -> Matrix:
        return self.to_domain({"Int": "FieldQ", "PolyQ": "FieldQx"}.get(self.domain, self.domain))

    def det(self):
        """Determinant, computed over the fraction field and mapped back."""
        if self.rows != self.cols:
            raise ShapeMismatch("determinant of a non-square matrix")
        rows = [list(r) for r in self.to_field().entries]
        d = _one("FieldQx" if self.domain in ("PolyQ", "FieldQx") else "FieldQ")
        n = self.rows
        for c in range(n):
            p = next((i for i in range(c, n) if rows[i][c]), None)
            if p is None:
                return _zero(self.domain)
            if p != c:
                rows[c], rows[p] = rows[p], rows[c]
                d = -d
            piv = rows[c][c]
            d = d * piv
            for i in range(c + 1, n):
                f = rows[i][c]
                if f:
                    f = f / piv
                    rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
        return _coerce(self.domain, d)

    def __repr__(self):
        body = "; ".join(", ".join(str(v) for v in row) for row in self.entries)
        return f"Matrix[{self.domain}]({self.rows}x{self.cols}: {body})"


def _join(a, b):
    if a == b:
        return a
    order = {"Int": 0, "FieldQ": 1, "PolyQ": 2, "FieldQx": 3}
    if {a, b} == {"FieldQ", "PolyQ"}:
        return "PolyQ"
    return max(a, b, key=order.__getitem__)


def matrix_to_json(M: Matrix) -> dict:
    if M.domain == "FieldQx":
        enc = frac_to_json
    elif M.domain == "PolyQ":
        def enc(p):
            return frac_to_json(as_frac(p))
    else:
        enc = str
    return {"rows": M.rows, "cols": M.cols, "domain": {"FieldQx": "Qx", "FieldQ": "Q", "Int": "Z", "PolyQ": "Q[x]"}[M.domain],
            "entries": [[enc(v) for v in row] for row in M.entries]}


def matrix_from_json(obj) -> Matrix:
    dom = {"Qx": "FieldQx", "Q": "FieldQ", "Z": "Int", "Q[x]": "PolyQ"}[obj["domain"]]
    if dom in ("FieldQx", "PolyQ"):
        grid = [[frac_from_json(v) for v in row] for row in obj["entries"]]
    else:
        grid = obj["entries"]
    M = Matrix(grid, dom, cols=obj["cols"])
    if M.rows != obj["rows"]:
        raise ShapeMismatch("row count does not match entries")
    return M


# ---------------------------------------------------------------------------
# Field elimination on lists of rows.  Entries are mpq or Frac; the only
# operations used are +, -, *, / and truthiness.


def rref(rows, ncols):
    """Reduced row echelon form; returns ``(nonzero_rows, pivot_columns)``.

    Each returned row has a leading 1, and the pivot columns are otherwise
    zero.  The result depends only on the row space, so it is canonical.
    """
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        p = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                p = i
                break
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        piv = pr[c]
        if piv != 1:
            inv = 1 / piv
            pr = [v * inv if v else v for v in pr]
            rows[r] = pr
        nz = [j for j in range(c, ncols) if pr[j]]
        for i in range(len(rows)):
            if i != r:
                row = rows[i]
                f = row[c]
                if f:
                    for j in nz:
                        row[j] = row[j] - f * pr[j]
        pivots.append(c)
        r += 1
    return [tuple(row) for row in rows[:r]], pivots


def nullspace(rows, ncols, zero, one):
    """Basis of ``{v : row . v = 0 for every row}``, in canonical (RREF) form."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, pc in zip(red, pivots):
            if row[f]:
                v[pc] = -row[f]
        basis.append(v)
    return rref(basis, ncols)[0]


def solve(rows, b, ncols, zero, one):
    """Solve ``rows . v = b``; returns ``(particular or None, kernel_basis)``."""
    aug = [list(r) + [bi] for r, bi in zip(rows, b)]
    red, pivots = rref(aug, ncols + 1)
    kernel = nullspace(rows, ncols, zero, one)
    if pivots and pivots[-1] == ncols:
        return None, kernel
    v = [zero] * ncols
    for row, pc in zip(red, pivots):
        v[pc] = row[ncols]
    return tuple(v), kernel


def rank_of(rows, ncols) -> int:
    return len(rref(rows, ncols)[1])


# ---------------------------------------------------------------------------
# Euclidean domains


def _norm(domain, a):
    return abs(a) if domain == "Int" else len(a.coeffs)


def _quo(domain, a, b):
    if domain == "Int":
        return a // b
    return divmod(a, b)[0]


def _unit_inverse(domain, a):
    """Unit ``u`` with ``a*u`` positive (Z) or monic (Q[x])."""
    if domain == "Int":
        return -1 if a < 0 else 1
    return Poly((1 / a.coeffs[-1],))


@dataclass(frozen=True)
class HnfResult:
    B: Matrix
    U: Matrix
    r: int
    pivot_row: dict


def hnf(M: Matrix) -> HnfResult:
    """Column Hermite normal form ``B = M U`` with the zero columns first.

    Rows are processed bottom-up.  Within a row the active columns are
    combined Euclid-style into the last active column, which becomes the
    pivot for that row.  Column ``j`` with a pivot has its pivot row
    ``pivot_row[j]``, and all entries below the pivot vanish.
    """
    if M.domain not in ("Int", "PolyQ"):
        raise SigflowError("hnf needs a Euclidean domain (Int or PolyQ)")
    dom = M.domain
    m, n = M.rows, M.cols
    # columns as mutable lists; U's columns alongside
    B = [list(M.column(j)) for j in range(n)]
    U = [[_one(dom) if i == j else _zero(dom) for i in range(n)] for j in range(n)]
    active = n
    pivot_row = {}
    for i in range(m - 1, -1, -1):
        if active == 0:
            break
        while True:
            nz = [j for j in range(active) if B[j][i]]
            if not nz:
                break
            p = min(nz, key=lambda j: (_norm(dom, B[j][i]), -j))
            last = active - 1
            if p != last:
                B[p], B[last] = B[last], B[p]
                U[p], U[last] = U[last], U[p]
            piv = B[last][i]
            others = [j for j in range(last) if B[j][i]]
            if not others:
                break
            for j in others:
                q = _quo(dom, B[j][i], piv)
                if q:
                    B[j] = [a - q * b for a, b in zip(B[j], B[last])]
                    U[j] = [a - q * b for a, b in zip(U[j], U[last])]
        if not any(B[j][i] for j in range(active)):
            continue
        last = active - 1
        u = _unit_inverse(dom, B[last][i])
        if u != 1:
            B[last] = [a * u for a in B[last]]
            U[last] = [a * u for a in U[last]]
        pivot_row[last] = i
        active -= 1
    Bm = Matrix._raw(tuple(tuple(B[j][i] for j in range(n)) for i in range(m)), dom, n)
    Um = Matrix._raw(tuple(tuple(U[j][i] for j in range(n)) for i in range(n)), dom, n)
    return HnfResult(Bm, Um, active, dict(sorted(pivot_row.items())))


def _normalize_column(dom, col):
    for v in col:
        if v:
            u = _unit_inverse(dom, v)
            return tuple(a * u for a in col) if u != 1 else tuple(col)
    return tuple(col)


def kernel(M: Matrix) -> Matrix:
    """Basis of the null space as the columns of a ``cols x k`` matrix.

    Over a field the basis is in reduced column echelon form.  Over Z or Q[x]
    it is the first ``r`` columns of the HNF transformation matrix, put into
    Hermite form themselves so the output is deterministic.
    """
    dom = M.domain
    if dom in ("FieldQ", "FieldQx"):
        basis = nullspace(M.entries, M.cols, _zero(dom), _one(dom))
        return Matrix._raw(tuple(tuple(v[i] for v in basis) for i in range(M.cols)), dom, len(basis))
    res = hnf(M)
    cols = [res.U.column(j) for j in range(res.r)]
    if not cols:
        return Matrix._raw(tuple(() for _ in range(M.cols)), dom, 0)
    K = Matrix._raw(tuple(tuple(c[i] for c in cols) for i in range(M.cols)), dom, len(cols))
    KH = hnf(K).B
    cols = [_normalize_column(dom, KH.column(j)) for j in range(KH.cols)]
    return Matrix._raw(tuple(tuple(c[i] for c in cols) for i in range(M.cols)), dom, len(cols))


def rank(M: Matrix) -> int:
    return rank_of(M.to_field().entries, M.cols)


def pullback(A: Matrix, B: Matrix):
    """Pullback ``(C, D)`` of ``A: n -> z`` and ``B: m -> z`` with ``A C = B D``.

    ``C`` stacked over ``D`` is a kernel basis of ``(A | -B)``.
    """
    if A.rows != B.rows:
        raise ShapeMismatch(f"pullback legs have codomains {A.rows} and {B.rows}")
    if A.domain != B.domain:
        raise ShapeMismatch("pullback legs over different domains")
    K = kernel(A.hstack(-B))
    n = A.cols
    C = K.submatrix(range(n), range(K.cols))
    D = K.submatrix(range(n, K.rows), range(K.cols))
    return C, D


def pushout(A: Matrix, B: Matrix):
    """Pushout of ``A: z -> n`` and ``B: z -> m``, as transposed pullback."""
    C, D = pullback(A.T, B.T)
    return C.T, D.T


def rank_solve(M: Matrix, b):
    """Particular solution of ``M v = b`` (or None) and a null-space basis."""
    if M.domain not in ("FieldQ", "FieldQx"):
        raise SigflowError("rank_solve needs a field domain")
    if len(b) != M.rows:
        raise ShapeMismatch(f"right-hand side has length {len(b)}, expected {M.rows}")
    b = [_coerce(M.domain, v) for v in b]
    sol, ker = solve(M.entries, b, M.cols, _zero(M.domain), _one(M.domain))
    K = Matrix._raw(tuple(tuple(v[i] for v in ker) for i in range(M.cols)), M.domain, len(ker))
    return sol, K


@dataclass(frozen=True)
class RationalFormResult:
    Mhat: Matrix
    pivot: dict


def _complexity(f: Frac) -> int:
    return len(f.num.coeffs) + len(f.den.coeffs)


def rational_form(M: Matrix, avoid=()) -> RationalFormResult:
    """Row-reduce over Q(x) so that every entry is a rational fraction.

    Rows are taken in order.  Each row first has the earlier pivot columns
    eliminated; its pivot is then an entry of least x-adic valuation, so that
    dividing by it leaves every entry with nonnegative valuation.  Ties go to
    the entry with fewest coefficients, then the smallest column.  Columns in
    ``avoid`` are used as pivots only when no other column is admissible; if
    that happens the result still satisfies the invariants, but the caller
    can detect it from ``pivot``.
    """
    if M.domain != "FieldQx":
        M = M.to_domain("FieldQx")
    avoid = set(avoid)
    done = []  # list of (row, pivot_col)
    for raw in M.entries:
        row = list(raw)
        for prow, pc in done:
            f = row[pc]
            if f:
                row = [a - f * b for a, b in zip(row, prow)]
        nz = [j for j in range(M.cols) if row[j]]
        if not nz:
            continue
        vmin = min(valuation(row[j]) for j in nz)
        cands = [j for j in nz if valuation(row[j]) == vmin]
        preferred = [j for j in cands if j not in avoid] or cands
        pc = min(preferred, key=lambda j: (_complexity(row[j]), j))
        inv = row[pc].inverse()
        row = [v * inv if v else v for v in row]
        row[pc] = FONE
        new_done = []
        for prow, qc in done:
            f = prow[pc]
            if f:
                prow = [a - f * b for a, b in zip(prow, row)]
            new_done.append((prow, qc))
        done = new_done + [(row, pc)]
    grid = tuple(tuple(r) for r, _ in done)
    grid += tuple((FZERO,) * M.cols for _ in range(M.rows - len(done)))
    pivot = {i: pc for i, (_, pc) in enumerate(done)}
    return RationalFormResult(Matrix._raw(grid, "FieldQx", M.cols), pivot)
