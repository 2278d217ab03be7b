"""Denotational semantics of circuits as linear relations over Q(x)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from gmpy2 import mpq

from .algebra import FONE, FX, Frac, Poly, parse_poly, series_expand, valuation
from .circuit import (
    ADD, CAP, CODISCARD, COCOPY, COADD, COPY, COZERO, CUP, DISCARD, ID, ID0, SWAP, ZERO,
    Gen, Par, Seq, Term, amp, coamp, coptrans, mirror, par, ptrans, seq, sort_of,
    unfold_feedback,
)
from .errors import SortMismatch
from .relation import LinRel, compose, converse, direct_sum, equals, identity, symmetry

_BASE = {
    "id": identity(1),
    "id0": identity(0),
    "swap": symmetry(1, 1),
    "copy": LinRel(1, 2, [(1, 1, 1)]),
    "discard": LinRel(1, 0, [(1,)]),
    "add": LinRel(2, 1, [(1, 0, 1), (0, 1, 1)]),
    "zero": LinRel(0, 1, []),
    "delay": LinRel(1, 1, [(FONE, FX)]),
}
for _k in ("copy", "discard", "add", "zero", "delay"):
    _BASE["co" + _k] = converse(_BASE[_k])


def generator_relation(g: Gen) -> LinRel:
    if g.kind in _BASE:
        return _BASE[g.kind]
    k = Frac(g.param)
    rel = LinRel._canonical(1, 1, [(FONE, k)])
    return converse(rel) if g.kind.startswith("co") else rel


def dsem(t: Term, _memo=None) -> LinRel:
    """Compositional semantics; ``Feedback`` is read through its unfolding."""
    sort_of(t)
    memo = {} if _memo is None else _memo
    return _dsem(t, memo)


def _dsem(t, memo):
    hit = memo.get(t)
    if hit is not None:
        return hit
    if isinstance(t, Gen):
        r = generator_relation(t)
    elif isinstance(t, Seq):
        r = compose(_dsem(t.left, memo), _dsem(t.right, memo))
    elif isinstance(t, Par):
        r = direct_sum(_dsem(t.top, memo), _dsem(t.bottom, memo))
    else:
        r = _dsem(unfold_feedback(t), memo)
    memo[t] = r
    return r


def equivalent(s: Term, t: Term) -> bool:
    a, b = sort_of(s), sort_of(t)
    if a != b:
        raise SortMismatch(f"cannot compare circuits of sorts {a} and {b}")
    return equals(dsem(s), dsem(t))


@dataclass(frozen=True)
class StreamVector:
    """One basis vector, scaled by ``x**shift``, expanded as streams.

    The shift is the smallest one making every component a power series
    with some component nonzero at time 0, so ``left[i][k]`` and
    ``right[j][k]`` are the values at time ``k``.
    """

    shift: int
    left: tuple
    right: tuple


def stream_view(t: Term, T: int) -> list:
    S = dsem(t)
    out = []
    for vec in S.rows:
        v = min(valuation(c) for c in vec if c)
        scale = FX ** (-v)
        rows = tuple(tuple(series_expand(c * scale, T)) for c in vec)
        out.append(StreamVector(-v, rows[: S.n], rows[S.n:]))
    return out


# ---------------------------------------------------------------------------
# Axiom corpus


@dataclass(frozen=True)
class AxiomInstance:
    name: str
    lhs: Term
    rhs: Term
    params: tuple = ()


DEFAULT_FIELD_SAMPLES = (mpq(-1), mpq(0), mpq(1), mpq(2), mpq(3), mpq(1, 2))
DEFAULT_POLY_SAMPLES = tuple(parse_poly(s) for s in ("1", "x", "1 + x", "2x^2", "1 - x"))

_MID_SWAP = par(ID, SWAP, ID)


def _scalar_terms(field_samples, poly_samples):
    """Each sample paired with the forward 1 -> 1 scalar circuit it names."""
    out = [(Poly((k,)), amp(k)) for k in field_samples]
    out += [(p, ptrans(p)) for p in poly_samples]
    return out


def _ha_axioms(scalars):
    """Forward (Hopf algebra) axioms: monoid, comonoid, bialgebra, scalars."""
    ax = [
        ("A1", seq(Par(ADD, ID), ADD), seq(Par(ID, ADD), ADD), ()),
        ("A2", seq(Par(ZERO, ID), ADD), ID, ()),
        ("A3", seq(SWAP, ADD), ADD, ()),
        ("A4", seq(COPY, Par(COPY, ID)), seq(COPY, Par(ID, COPY)), ()),
        ("A5", seq(COPY, Par(DISCARD, ID)), ID, ()),
        ("A6", seq(COPY, SWAP), COPY, ()),
        ("A7", seq(ADD, COPY), seq(Par(COPY, COPY), _MID_SWAP, Par(ADD, ADD)), ()),
        ("A8", seq(ADD, DISCARD), Par(DISCARD, DISCARD), ()),
        ("A9", seq(ZERO, COPY), Par(ZERO, ZERO), ()),
        ("A10", seq(ZERO, DISCARD), ID0, ()),
    ]
    for (p, tp), (q, tq) in itertools.product(scalars, repeat=2):
        ax.append(("A11", seq(tp, tq), ptrans(q * p), (p, q)))
        ax.append(("A12", seq(COPY, Par(tp, tq), ADD), ptrans(p + q), (p, q)))
    ax.append(("A13", amp(0), seq(DISCARD, ZERO), ()))
    ax.append(("A14", amp(1), ID, ()))
    for p, tp in scalars:
        ax.append(("A15", seq(tp, COPY), seq(COPY, Par(tp, tp)), (p,)))
        ax.append(("A16", seq(tp, DISCARD), DISCARD, (p,)))
        ax.append(("A17", seq(ADD, tp), seq(Par(tp, tp), ADD), (p,)))
        ax.append(("A18", seq(ZERO, tp), ZERO, (p,)))
    return ax


def _mirror_axiom(name, lhs, rhs, params):
    return (name + "op", mirror(lhs), mirror(rhs), params)


def _frobenius(mult, comult):
    """The three sides of a Frobenius law for a monoid/comonoid pair."""
    return (
        seq(Par(comult, ID), Par(ID, mult)),
        seq(mult, comult),
        seq(Par(ID, comult), Par(mult, ID)),
    )


def _interaction_axioms(nonzero_scalars):
    white_cap = seq(ZERO, COADD)
    white_cup = seq(ADD, COZERO)
    antipode = Par(ID, amp(-1))
    ax = []
    for p, tp in nonzero_scalars:
        cop = _co(tp)
        ax.append(("I1", seq(tp, cop), ID, (p,)))
        ax.append(("I2", seq(cop, tp), ID, (p,)))
    w1, w2, w3 = _frobenius(ADD, COADD)
    b1, b2, b3 = _frobenius(COCOPY, COPY)
    ax += [
        ("I3", w1, w2, ()), ("I3", w2, w3, ()),
        ("I4", b1, b2, ()), ("I4", b2, b3, ()),
        ("I5", CAP, seq(white_cap, antipode), ()),
        ("I6", CUP, seq(antipode, white_cup), ()),
        ("I7", seq(COPY, COCOPY), ID, ()),
        ("I8", seq(COADD, ADD), ID, ()),
    ]
    # The PID presentation (S1-S8)
    ax += [
        ("S1", w1, w2, ()), ("S1", w2, w3, ()),
        ("S2", b1, b2, ()), ("S2", b2, b3, ()),
        ("S3", CUP, seq(antipode, white_cup), ()),
        ("S4", seq(ZERO, COZERO), ID0, ()),
        ("S6", CAP, seq(white_cap, antipode), ()),
        ("S7", seq(CODISCARD, DISCARD), ID0, ()),
    ]
    for p, tp in nonzero_scalars:
        cop = _co(tp)
        ax.append(("S5", seq(cop, tp), ID, (p,)))
        ax.append(("S8", seq(tp, cop), ID, (p,)))
    return ax


def _co(t: Gen) -> Gen:
    return coamp(t.param) if t.kind == "amp" else coptrans(t.param)


def axiom_corpus(field_samples=DEFAULT_FIELD_SAMPLES, poly_samples=DEFAULT_POLY_SAMPLES) -> list:
    """Every axiom instantiated at every sample (pairs for two-scalar laws)."""
    scalars = _scalar_terms(field_samples, poly_samples)
    nonzero = [(p, t) for p, t in scalars if p]
    ha = _ha_axioms(scalars)
    out = [AxiomInstance(*a) for a in ha]
    out += [AxiomInstance(*_mirror_axiom(*a)) for a in ha]
    out += [AxiomInstance(*a) for a in _interaction_axioms(nonzero)]
    for a in out:
        if sort_of(a.lhs) != sort_of(a.rhs):
            raise AssertionError(f"axiom {a.name} is ill-sorted")
    return out


__all__ = [
    "dsem", "equivalent", "generator_relation", "stream_view", "StreamVector",
    "AxiomInstance", "axiom_corpus", "DEFAULT_FIELD_SAMPLES", "DEFAULT_POLY_SAMPLES",
]
