"""Exact scalars: rationals, polynomials over Q, and fractions in Q(x).

Rationals are ``gmpy2.mpq`` values throughout.  ``Poly`` and ``Frac`` are
immutable; ``Frac`` is always stored reduced with a monic denominator, so
structural equality is semantic equality.

>>> from sigflow.algebra import Frac, parse_poly, series_expand
>>> fib = Frac(parse_poly("x"), parse_poly("1 - x - x^2"))
>>> [int(c) for c in series_expand(fib, 8)]
[0, 1, 1, 2, 3, 5, 8, 13]
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq

from . import _kernels as K
from .errors import NotRational, SigflowError, ZeroDenominator

INF = math.inf

_RAT_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def rat(value) -> mpq:
    """Coerce ``int``, ``Fraction``, ``mpq`` or text ``"a/b"`` to ``mpq``."""
    if isinstance(value, str):
        m = _RAT_RE.match(value)
        if not m:
            raise SigflowError(f"not a rational number: {value!r}")
        if m.group(2) is not None and int(m.group(2)) == 0:
            raise ZeroDenominator(f"zero denominator in {value!r}")
        return mpq(int(m.group(1)), int(m.group(2) or 1))
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    return mpq(value)


def format_rat(q) -> str:
    return str(mpq(q))


class Poly:
    """Dense univariate polynomial over Q; ``coeffs[i]`` multiplies ``x**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = K.trim(tuple(rat(c) for c in coeffs))

    @classmethod
    def _raw(cls, coeffs) -> Poly:
        p = object.__new__(cls)
        p.coeffs = coeffs
        return p

    @classmethod
    def const(cls, c) -> Poly:
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> Poly:
        return cls((0,) * k + (c,))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -INF

    @property
    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)) or type(other) is type(mpq(0)):
            return self.coeffs == K.trim((rat(other),))
        return NotImplemented

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __add__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return Poly._raw(K.padd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(K.pneg(self.coeffs))

    def __sub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return Poly._raw(K.psub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return Poly._raw(K.pmul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        if not other.coeffs:
            raise ZeroDenominator("polynomial division by zero")
        q, r = K.pdivmod(self.coeffs, other.coeffs)
        return Poly._raw(q), Poly._raw(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, value):
        acc = mpq(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def monic(self) -> Poly:
        if not self.coeffs:
            return self
        return self * (1 / self.coeffs[-1])

    def gcd(self, other: Poly) -> Poly:
        return Poly._raw(K.pgcd(self.coeffs, other.coeffs))

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def _as_poly(value):
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)) or type(value) is type(mpq(0)):
        return Poly((value,))
    return None


X = Poly((0, 1))


def format_poly(p: Poly) -> str:
    """Render in the DSL's polynomial syntax, lowest degree first."""
    if not p.coeffs:
        return "0"
    parts = []
    for i, c in enumerate(p.coeffs):
        if not c:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = format_rat(a)
        else:
            mono = "x" if i == 1 else f"x^{i}"
            body = mono if a == 1 else f"{format_rat(a)}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|(x)|(\^)|([+\-*/])|(\S))")


def parse_poly(text: str) -> Poly:
    """Parse ``1 - x - x^2``, ``3/2*x``, ``2x^2`` and the like.

    A term is an optional rational coefficient ``a`` or ``a/b``, an optional
    ``*``, and an optional ``x`` or ``x^k``.  Terms are joined by ``+``/``-``.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.group(5):
            raise SigflowError(f"unexpected character in polynomial {text!r} at offset {pos}")
        tokens.append(m.group(m.lastindex))
        pos = m.end()
    if not tokens:
        raise SigflowError("empty polynomial")
    i = 0
    total = {}

    def peek():
        return tokens[i] if i < len(tokens) else None

    first = True
    while i < len(tokens):
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if tokens[i] == "-" else 1
            i += 1
        elif not first:
            raise SigflowError(f"expected '+' or '-' in polynomial {text!r}")
        first = False
        coef = None
        if peek() is not None and peek().isdigit():
            coef = mpq(int(tokens[i]))
            i += 1
            if peek() == "/" and i + 1 < len(tokens) and tokens[i + 1].isdigit():
                den = int(tokens[i + 1])
                if den == 0:
                    raise ZeroDenominator(f"zero denominator in polynomial {text!r}")
                coef /= den
                i += 2
            if peek() == "*":
                i += 1
                if peek() != "x":
                    raise SigflowError(f"expected 'x' after '*' in polynomial {text!r}")
        power = 0
        if peek() == "x":
            i += 1
            power = 1
            if peek() == "^":
                i += 1
                if peek() is None or not peek().isdigit():
                    raise SigflowError(f"expected exponent in polynomial {text!r}")
                power = int(tokens[i])
                i += 1
        if coef is None and power == 0:
            raise SigflowError(f"missing term in polynomial {text!r}")
        if peek() == "/" and power > 0:
            i += 1
            if peek() is None or not peek().isdigit() or int(tokens[i]) == 0:
                raise SigflowError(f"bad divisor in polynomial {text!r}")
            coef = (coef if coef is not None else mpq(1)) / int(tokens[i])
            i += 1
        c = sign * (coef if coef is not None else mpq(1))
        total[power] = total.get(power, mpq(0)) + c
    deg = max(total)
    return Poly([total.get(k, 0) for k in range(deg + 1)])


class Frac:
    """Element of Q(x), stored reduced with a monic denominator."""

    __slots__ = ("_n", "_d")

    def __init__(self, num=0, den=1):
        n = _coerce_poly(num)
        d = _coerce_poly(den)
        if not d:
            raise ZeroDenominator("fraction with zero denominator")
        self._n, self._d = K.frac_norm(n, d)

    @classmethod
    def _raw(cls, n, d) -> Frac:
        f = object.__new__(cls)
        f._n = n
        f._d = d
        return f

    @property
    def num(self) -> Poly:
        return Poly._raw(self._n)

    @property
    def den(self) -> Poly:
        return Poly._raw(self._d)

    def is_zero(self) -> bool:
        return not self._n

    def __bool__(self):
        return bool(self._n)

    def __eq__(self, other):
        if isinstance(other, Frac):
            return self._n == other._n and self._d == other._d
        o = _as_frac(other)
        if o is None:
            return NotImplemented
        return self._n == o._n and self._d == o._d

    def __hash__(self):
        if len(self._d) == 1 and len(self._n) <= 1:
            return hash(self._n[0] if self._n else 0)
        return hash(("Frac", self._n, self._d))

    def __add__(self, other):
        if not isinstance(other, Frac):
            other = _as_frac(other)
            if other is None:
                return NotImplemented
        return Frac._raw(*K.frac_add(self._n, self._d, other._n, other._d))

    __radd__ = __add__

    def __neg__(self):
        return Frac._raw(K.pneg(self._n), self._d)

    def __sub__(self, other):
        if not isinstance(other, Frac):
            other = _as_frac(other)
            if other is None:
                return NotImplemented
        return Frac._raw(*K.frac_add(self._n, self._d, K.pneg(other._n), other._d))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if not isinstance(other, Frac):
            other = _as_frac(other)
            if other is None:
                return NotImplemented
        return Frac._raw(*K.frac_mul(self._n, self._d, other._n, other._d))

    __rmul__ = __mul__

    def inverse(self) -> Frac:
        if not self._n:
            raise ZeroDenominator("inverse of zero")
        lead = self._n[-1]
        if lead == 1:
            return Frac._raw(self._d, self._n)
        inv = 1 / lead
        return Frac._raw(K.pscale(self._d, inv), K.pscale(self._n, inv))

    def __truediv__(self, other):
        if not isinstance(other, Frac):
            other = _as_frac(other)
            if other is None:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Frac._raw(K.trim((mpq(1),)), (mpq(1),))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    @property
    def valuation(self):
        return valuation(self)

    def is_rational(self) -> bool:
        return is_rational_fraction(self)

    def is_constant(self) -> bool:
        return len(self._d) == 1 and len(self._n) <= 1

    def constant(self) -> mpq:
        assert self.is_constant()
        return self._n[0] if self._n else mpq(0)

    def __repr__(self):
        return f"Frac({format_frac(self)!r})"

    def __str__(self):
        return format_frac(self)


def _coerce_poly(value):
    if isinstance(value, Poly):
        return value.coeffs
    if isinstance(value, (list, tuple)):
        return K.trim(tuple(rat(c) for c in value))
    return K.trim((rat(value),))


def _as_frac(value):
    if isinstance(value, Frac):
        return value
    if isinstance(value, Poly):
        return Frac._raw(value.coeffs, (mpq(1),))
    if isinstance(value, (int, Fraction)) or type(value) is type(mpq(0)):
        return Frac._raw(K.trim((rat(value),)), (mpq(1),))
    return None


def as_frac(value) -> Frac:
    """Coerce scalars, polynomials or ``"p/q"``-free text to ``Frac``."""
    if isinstance(value, str):
        return parse_frac(value)
    f = _as_frac(value)
    if f is None:
        raise TypeError(f"cannot convert {value!r} to Frac")
    return f


FZERO = Frac._raw((), (mpq(1),))
FONE = Frac._raw((mpq(1),), (mpq(1),))
FX = Frac._raw((mpq(0), mpq(1)), (mpq(1),))


def frac_normalize(num: Poly, den: Poly) -> Frac:
    """Unique reduced representative of ``num/den`` with monic denominator."""
    return Frac(num, den)


def format_frac(f: Frac) -> str:
    """Text form; a denominator with nonzero constant term is scaled to 1 there."""
    n, d = f.num, f.den
    if d == 1:
        return format_poly(n)
    if d.coeffs[0]:
        k = 1 / d.coeffs[0]
        n, d = n * k, d * k
    num = format_poly(n)
    if len([c for c in n.coeffs if c]) > 1 or "/" in num:
        num = f"({num})"
    den = format_poly(d)
    if len([c for c in d.coeffs if c]) > 1 or len(d.coeffs) > 1:
        den = f"({den})"
    return f"{num}/{den}"


def parse_frac(text: str) -> Frac:
    """Parse ``p`` or ``(p)/(q)`` where ``p``, ``q`` use the polynomial syntax."""
    text = text.strip()
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0 and (text[:i].rstrip().endswith(")") or text[i + 1:].lstrip().startswith("(")):
            return Frac(parse_poly(_unparen(text[:i])), parse_poly(_unparen(text[i + 1:])))
    return Frac(parse_poly(_unparen(text)))


def _unparen(s: str) -> str:
    s = s.strip()
    if s.startswith("(") and s.endswith(")"):
        return s[1:-1]
    return s


def valuation(f: Frac):
    """x-adic valuation ``val(num) - val(den)``; ``inf`` for zero."""
    if not f._n:
        return INF
    return f.num.valuation - f.den.valuation


def is_rational_fraction(f: Frac) -> bool:
    """True iff the reduced denominator has a nonzero constant term."""
    return bool(f._d[0])


def series_expand(f: Frac, T: int) -> list:
    """First ``T`` power-series coefficients of a rational fraction."""
    if not f._d[0]:
        raise NotRational(f"{format_frac(f)} has no power-series expansion")
    n, d = f._n, f._d
    d0 = d[0]
    out = []
    for k in range(T):
        acc = n[k] if k < len(n) else mpq(0)
        for i in range(1, min(k, len(d) - 1) + 1):
            acc -= d[i] * out[k - i]
        out.append(acc / d0)
    return out


@dataclass(frozen=True)
class LaurentPrefix:
    """Coefficients of ``x**offset, x**(offset+1), ...`` of a Laurent series."""

    offset: int
    coeffs: tuple

    def at(self, k: int):
        """Coefficient of ``x**k``; positions before the window are zero."""
        i = k - self.offset
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        if i < 0 or not self.coeffs:
            return mpq(0)
        raise IndexError(f"position {k} lies past the expanded window")


def laurent_expand(f: Frac, T: int) -> LaurentPrefix:
    if not f._n:
        return LaurentPrefix(0, ())
    v = valuation(f)
    vn = f.num.valuation
    vd = f.den.valuation
    shifted = Frac._raw(f._n[vn:], f._d[vd:])
    return LaurentPrefix(v, tuple(series_expand(shifted, T)))


def frac_to_json(f: Frac) -> dict:
    return {"num": [format_rat(c) for c in f._n], "den": [format_rat(c) for c in f._d]}


def frac_from_json(obj) -> Frac:
    try:
        return Frac(Poly([rat(c) for c in obj["num"]]), Poly([rat(c) for c in obj["den"]]))
    except (KeyError, TypeError) as exc:
        raise SigflowError(f"malformed fraction JSON: {obj!r}") from exc
