# cython: language_level=3, boundscheck=False
"""Compiled polynomial kernels over mpq.

Same contracts as ``_kernels_py``: polynomials are trimmed tuples of
``gmpy2.mpq``, lowest degree first.  Inner loops run on ``mpq_t`` arrays so
intermediate sums and products never become Python objects.
"""

from libc.stdlib cimport free, malloc

from gmpy2 cimport GMPy_MPQ_New, MPQ, import_gmpy2, mpq, mpq_set, mpq_t

import_gmpy2()

cdef extern from "gmp.h":
    void mpq_init(mpq_t)
    void mpq_clear(mpq_t)
    void mpq_set_si(mpq_t, long, unsigned long)
    void mpq_add(mpq_t, const mpq_t, const mpq_t)
    void mpq_sub(mpq_t, const mpq_t, const mpq_t)
    void mpq_mul(mpq_t, const mpq_t, const mpq_t)
    void mpq_div(mpq_t, const mpq_t, const mpq_t)
    void mpq_inv(mpq_t, const mpq_t)
    int mpq_sgn(const mpq_t)

cdef tuple ZERO = ()
cdef tuple ONE = (GMPy_MPQ_New(NULL),)
mpq_set_si(MPQ(<mpq>ONE[0]), 1, 1)


cdef struct Buf:
    mpq_t *c
    Py_ssize_t n


cdef Buf _alloc(Py_ssize_t n) except *:
    cdef Buf b
    cdef Py_ssize_t i
    b.n = n
    b.c = <mpq_t *>malloc((n if n else 1) * sizeof(mpq_t))
    if b.c == NULL:
        raise MemoryError()
    for i in range(n):
        mpq_init(b.c[i])
    return b


cdef Buf _load(tuple a) except *:
    cdef Buf b = _alloc(len(a))
    cdef Py_ssize_t i
    for i in range(b.n):
        mpq_set(b.c[i], MPQ(<mpq?>a[i]))
    return b


cdef void _free(Buf b):
    cdef Py_ssize_t i
    for i in range(b.n):
        mpq_clear(b.c[i])
    free(b.c)


cdef inline Py_ssize_t _deg_len(mpq_t *c, Py_ssize_t n):
    while n and mpq_sgn(c[n - 1]) == 0:
        n -= 1
    return n


cdef tuple _store(mpq_t *c, Py_ssize_t n):
    cdef Py_ssize_t i
    cdef mpq q
    n = _deg_len(c, n)
    out = [None] * n
    for i in range(n):
        q = GMPy_MPQ_New(NULL)
        mpq_set(MPQ(q), c[i])
        out[i] = q
    return tuple(out)


def trim(a):
    cdef Py_ssize_t n = len(a)
    while n and not a[n - 1]:
        n -= 1
    return tuple(a[:n])


def padd(tuple a, tuple b):
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    cdef Buf x = _load(a)
    cdef Py_ssize_t i
    for i in range(len(b)):
        mpq_add(x.c[i], x.c[i], MPQ(<mpq?>b[i]))
    res = _store(x.c, x.n)
    _free(x)
    return res


def pneg(tuple a):
    return tuple(-c for c in a)


def psub(tuple a, tuple b):
    cdef Py_ssize_t n = max(len(a), len(b))
    cdef Buf x = _alloc(n)
    cdef Py_ssize_t i
    for i in range(len(a)):
        mpq_set(x.c[i], MPQ(<mpq?>a[i]))
    for i in range(len(b)):
        mpq_sub(x.c[i], x.c[i], MPQ(<mpq?>b[i]))
    res = _store(x.c, n)
    _free(x)
    return res


def pscale(tuple a, c):
    if not c:
        return ZERO
    return tuple(x * c for x in a)


cdef Buf _mul(Buf a, Buf b) except *:
    cdef Buf out = _alloc(a.n + b.n - 1)
    cdef mpq_t t
    cdef Py_ssize_t i, j
    mpq_init(t)
    for i in range(a.n):
        if mpq_sgn(a.c[i]) == 0:
            continue
        for j in range(b.n):
            if mpq_sgn(b.c[j]) == 0:
                continue
            mpq_mul(t, a.c[i], b.c[j])
            mpq_add(out.c[i + j], out.c[i + j], t)
    mpq_clear(t)
    return out


def pmul(tuple a, tuple b):
    if not a or not b:
        return ZERO
    if len(a) == 1:
        return pscale(b, a[0])
    if len(b) == 1:
        return pscale(a, b[0])
    cdef Buf x = _load(a)
    cdef Buf y = _load(b)
    cdef Buf z = _mul(x, y)
    res = _store(z.c, z.n)
    _free(x)
    _free(y)
    _free(z)
    return res


cdef Py_ssize_t _divmod(mpq_t *r, Py_ssize_t nr, mpq_t *b, Py_ssize_t nb, mpq_t *q):
    """In place: ``r`` becomes the remainder; quotient written to ``q`` if given.

    Returns the trimmed length of the remainder.
    """
    cdef Py_ssize_t db = nb - 1, k, j, off
    cdef mpq_t c, t
    mpq_init(c)
    mpq_init(t)
    for k in range(nr - 1, db - 1, -1):
        if mpq_sgn(r[k]) == 0:
            continue
        mpq_div(c, r[k], b[db])
        off = k - db
        if q != NULL:
            mpq_set(q[off], c)
        for j in range(db + 1):
            mpq_mul(t, c, b[j])
            mpq_sub(r[off + j], r[off + j], t)
    mpq_clear(c)
    mpq_clear(t)
    return _deg_len(r, db if nr > db else nr)


def pdivmod(tuple a, tuple b):
    """Euclidean division ``a = q*b + r`` with ``deg r < deg b``."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    cdef Py_ssize_t db = len(b) - 1
    if len(a) - 1 < db:
        return ZERO, a
    cdef Buf r = _load(a)
    cdef Buf y = _load(b)
    cdef Buf q = _alloc(len(a) - db)
    cdef Py_ssize_t nr = _divmod(r.c, r.n, y.c, y.n, q.c)
    res = (_store(q.c, q.n), _store(r.c, nr))
    _free(r)
    _free(y)
    _free(q)
    return res


def pmonic(tuple a):
    if not a:
        return ZERO
    lead = a[-1]
    if lead == 1:
        return a
    inv = 1 / lead
    return tuple(c * inv for c in a[:-1]) + ONE


def pgcd(tuple a, tuple b):
    """Monic gcd; gcd(0, 0) = 0."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return pmonic(a)
    if len(b) == 1:
        return ONE
    cdef Buf x = _load(a)
    cdef Buf y = _load(b)
    cdef mpq_t *u = x.c
    cdef mpq_t *v = y.c
    cdef mpq_t *w
    cdef Py_ssize_t nu = x.n, nv = y.n, nw
    cdef Py_ssize_t i
    cdef mpq_t inv
    while nv > 1:
        nw = _divmod(u, nu, v, nv, NULL)
        w = u
        u = v
        nu = nv
        v = w
        nv = nw
    if nv == 1:
        res = ONE
    else:
        mpq_init(inv)
        mpq_inv(inv, u[nu - 1])
        for i in range(nu):
            mpq_mul(u[i], u[i], inv)
        mpq_clear(inv)
        res = _store(u, nu)
    _free(x)
    _free(y)
    return res


def pexact_div(tuple a, tuple b):
    q, r = pdivmod(a, b)
    assert not r
    return q


def frac_norm(tuple n, tuple d):
    """Reduce ``n/d`` to coprime numerator and monic denominator."""
    if not d:
        raise ZeroDivisionError("zero denominator")
    if not n:
        return ZERO, ONE
    if len(d) > 1:
        g = pgcd(n, d)
        if len(g) > 1:
            n = pexact_div(n, g)
            d = pexact_div(d, g)
    lead = d[-1]
    if lead != 1:
        inv = 1 / lead
        n = tuple(c * inv for c in n)
        d = tuple(c * inv for c in d[:-1]) + ONE
    return n, d


def frac_add(tuple n1, tuple d1, tuple n2, tuple d2):
    if not n1:
        return n2, d2
    if not n2:
        return n1, d1
    if len(d1) == 1 and len(d2) == 1:
        return padd(n1, n2), ONE
    if d1 == d2:
        n = padd(n1, n2)
        if not n:
            return ZERO, ONE
        g = pgcd(n, d1)
        if len(g) == 1:
            return n, d1
        return pexact_div(n, g), pexact_div(d1, g)
    g = pgcd(d1, d2)
    if len(g) == 1:
        n = padd(pmul(n1, d2), pmul(n2, d1))
        if not n:
            return ZERO, ONE
        return n, pmul(d1, d2)
    e1 = pexact_div(d1, g)
    e2 = pexact_div(d2, g)
    n = padd(pmul(n1, e2), pmul(n2, e1))
    if not n:
        return ZERO, ONE
    d = pmul(d1, e2)
    h = pgcd(n, g)
    if len(h) > 1:
        n = pexact_div(n, h)
        d = pexact_div(d, h)
    return n, d


def frac_mul(tuple n1, tuple d1, tuple n2, tuple d2):
    if not n1 or not n2:
        return ZERO, ONE
    if len(d2) > 1 and len(n1) > 1:
        g = pgcd(n1, d2)
        if len(g) > 1:
            n1 = pexact_div(n1, g)
            d2 = pexact_div(d2, g)
    if len(d1) > 1 and len(n2) > 1:
        g = pgcd(n2, d1)
        if len(g) > 1:
            n2 = pexact_div(n2, g)
            d1 = pexact_div(d1, g)
    return pmul(n1, n2), pmul(d1, d2)
