"""Pure-Python polynomial kernels.

A polynomial is a tuple of ``gmpy2.mpq`` coefficients, lowest degree first,
with no trailing zeros.  The empty tuple is the zero polynomial.  The compiled
module ``_kernels_c`` exports the same functions with the same contracts.
"""

from gmpy2 import mpq

ONE = (mpq(1),)
ZERO = ()


def trim(a):
    n = len(a)
    while n and not a[n - 1]:
        n -= 1
    return tuple(a[:n])


def padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    if len(a) == len(b):
        return trim(out)
    return tuple(out)


def pneg(a):
    return tuple(-c for c in a)


def psub(a, b):
    return padd(a, pneg(b))


def pscale(a, c):
    if not c:
        return ZERO
    return tuple(x * c for x in a)


def pmul(a, b):
    if not a or not b:
        return ZERO
    if len(a) == 1:
        return pscale(b, a[0])
    if len(b) == 1:
        return pscale(a, b[0])
    out = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


def pdivmod(a, b):
    """Euclidean division ``a = q*b + r`` with ``deg r < deg b``."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) - 1 < db:
        return ZERO, a
    lead = b[-1]
    r = list(a)
    q = [mpq(0)] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = r[k]
        if not c:
            continue
        c = c / lead
        q[k - db] = c
        off = k - db
        for j in range(db + 1):
            r[off + j] -= c * b[j]
    return trim(q), trim(r[:db])


def pmonic(a):
    if not a:
        return ZERO
    lead = a[-1]
    if lead == 1:
        return a
    inv = 1 / lead
    return tuple(c * inv for c in a[:-1]) + (mpq(1),)


def pgcd(a, b):
    """Monic gcd; gcd(0, 0) = 0."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return pmonic(a)
    if len(b) == 1:
        return ONE
    while b:
        if len(b) == 1:
            return ONE
        _, r = pdivmod(a, b)
        a, b = b, r
    return pmonic(a)


def pexact_div(a, b):
    q, r = pdivmod(a, b)
    assert not r
    return q


def frac_norm(n, d):
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
        d = tuple(c * inv for c in d[:-1]) + (mpq(1),)
    return n, d


def frac_add(n1, d1, n2, d2):
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


def frac_mul(n1, d1, n2, d2):
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
