"""From any circuit to an executable signal flow graph.

``realise`` works on the semantics: bend every port to the left, describe the
resulting subspace by a kernel matrix, row-reduce that to rational form, read
the pivot columns as outputs, synthesise a signal flow graph for the transfer
matrix and bend the ports back.  The record of bends is kept so the result
can be checked against the source.

>>> from sigflow.circuit import parse
>>> r = realise(parse("delay ; coptrans(1 - x - x^2)"))
>>> r.io.inputs, r.io.outputs, str(r.transfer[0, 0])
(('L1',), ('R1',), 'x/(1 - x - x^2)')
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .algebra import FONE, Frac, Poly, X, is_rational_fraction, rat
from .circuit import (
    ADD, COPY, DELAY, DISCARD, ID, ID0, SWAP, ZERO, Feedback, Gen, Par, Seq, Sort, Term,
    amp, bend_left, bend_right, classify, ids, par, perm_term, port_names, ptrans,
    ptrans_ladder, seq, sort_of, sym_term,
)
from .errors import InvariantViolation, NotRational, NotSF, SigflowError
from .matrix import Matrix, rational_form
from .relation import (
    BEND_LEFT, BEND_RIGHT, LinRel, Move, apply_move_to_ports, as_graph, as_kernel_matrix,
    reindex,
)
from .semantics import dsem


@dataclass(frozen=True)
class IoPartition:
    inputs: tuple
    outputs: tuple


@dataclass(frozen=True)
class Realisation:
    source_sort: Sort
    sf_term: Term
    io: IoPartition
    transfer: Matrix
    bend_log: tuple
    rewired: Term

    def source_relation(self) -> LinRel:
        """Semantics of ``sf_term`` moved back onto the source ports."""
        return reindex(dsem(self.sf_term), self.bend_log)


# ---------------------------------------------------------------------------
# Rational blocks


def rational_block(f, check: bool = True) -> Term:
    """Signal flow graph of sort (1,1) multiplying by the rational ``f``.

    With ``f = p/q`` and ``q = q0 + x*qt``, the block is ``ptrans(p)``
    followed by a feedback loop computing ``y = (u - qt*(x*y)) / q0``.
    """
    f = f if isinstance(f, Frac) else Frac(f)
    if not is_rational_fraction(f):
        raise NotRational(f"{f} is not a rational fraction")
    # scale so the denominator has constant term 1; then no amp is needed
    k = 1 / f.den.coeffs[0]
    p, q = f.num * k, f.den * k
    head = [] if p == 1 else [_scalar(p)]
    if q == 1:
        block = head[0] if head else ID
    else:
        loop_in = _scalar(Poly(q.coeffs[1:]) * -1)
        body = seq(Par(loop_in, ID), ADD, COPY)
        block = seq(*head, Feedback(body)) if head else Feedback(body)
    if check:
        got = dsem(block)
        want = LinRel._canonical(1, 1, [(FONE, f)])
        if got != want:
            raise InvariantViolation(f"rational block for {f} has semantics {got}")
    return block


def _scalar(p: Poly) -> Term:
    if not p.coeffs:
        return Seq(DISCARD, ZERO)
    if p == 1:
        return ID
    if len(p.coeffs) == 1:
        return amp(p.coeffs[0])
    if p == X:
        return DELAY
    return ptrans(p)


def direct_form(f: Frac, inputs) -> list:
    """Run ``q0*y[t] = (p*u)[t] - sum_{i>=1} q[i]*y[t-i]`` on a finite input."""
    if not is_rational_fraction(f):
        raise NotRational(f"{f} is not a rational fraction")
    p, q = f.num.coeffs, f.den.coeffs
    u = [rat(v) for v in inputs]
    y = []
    for t in range(len(u)):
        acc = sum((p[i] * u[t - i] for i in range(min(t, len(p) - 1) + 1)), mpq(0))
        acc -= sum((q[i] * y[t - i] for i in range(1, min(t, len(q) - 1) + 1)), mpq(0))
        y.append(acc / q[0])
    return y


# ---------------------------------------------------------------------------
# Matrix form


def _fan_out(k: int) -> Term:
    if k == 0:
        return DISCARD
    if k == 1:
        return ID
    return Seq(COPY, Par(ID, _fan_out(k - 1)))


def _fan_in(k: int) -> Term:
    if k == 0:
        return ZERO
    if k == 1:
        return ID
    return Seq(Par(ID, _fan_in(k - 1)), ADD)


def _is_wiring(t: Term) -> bool:
    if isinstance(t, Gen):
        return t.kind in ("id", "id0")
    if isinstance(t, Par):
        return _is_wiring(t.top) and _is_wiring(t.bottom)
    return False


def _layers(*terms) -> Term:
    kept = [t for t in terms if not _is_wiring(t)]
    if not kept:
        return terms[0]
    return seq(*kept)


def matrix_form_circuit(A: Matrix, check: bool = False) -> Term:
    """Copy fan-out, one rational block per nonzero entry, add fan-in."""
    k_out, k_in = A.rows, A.cols
    entries = [[Frac(A[j, i]) if not isinstance(A[j, i], Frac) else A[j, i] for i in range(k_in)]
               for j in range(k_out)]
    for row in entries:
        for f in row:
            if not is_rational_fraction(f):
                raise NotRational(f"matrix entry {f} is not a rational fraction")
    pairs = [(i, j) for i in range(k_in) for j in range(k_out) if entries[j][i]]
    fan_out = par(*[_fan_out(sum(1 for (a, _) in pairs if a == i)) for i in range(k_in)])
    blocks = par(*[rational_block(entries[j][i], check) for i, j in pairs])
    by_output = sorted(range(len(pairs)), key=lambda k: (pairs[k][1], pairs[k][0]))
    wiring = perm_term(by_output)
    fan_in = par(*[_fan_in(sum(1 for (_, b) in pairs if b == j)) for j in range(k_out)])
    term = _layers(fan_out, blocks, wiring, fan_in)
    if sort_of(term) != Sort(k_in, k_out):
        raise InvariantViolation("matrix form circuit has the wrong sort")
    return term


def as_rational_matrix(t: Term) -> Matrix:
    """Transfer matrix of a signal flow graph; every entry is rational."""
    if not classify(t).sf:
        raise NotSF("as_rational_matrix needs a signal flow graph")
    A = as_graph(dsem(t))
    if A is None:
        raise InvariantViolation("signal flow graph with non-functional semantics")
    for row in A.entries:
        for f in row:
            if not is_rational_fraction(f):
                raise InvariantViolation(f"signal flow graph with non-rational entry {f}")
    return A


# ---------------------------------------------------------------------------
# Rewiring


def plan_moves(cur_left, cur_right, tgt_left, tgt_right) -> list:
    """Moves taking ports ``(cur_left, cur_right)`` to ``(tgt_left, tgt_right)``.

    Everything is bent to the left, permuted, and bent back out.
    """
    moves = [BEND_RIGHT] * len(cur_right)
    left, right = list(cur_left), list(cur_right)
    for mv in moves:
        left, right = apply_move_to_ports(mv, left, right)
    want = list(reversed(tgt_right)) + list(tgt_left)
    if sorted(want) != sorted(left):
        raise SigflowError("port sets differ")
    perm = tuple(left.index(p) for p in want)
    if perm != tuple(range(len(perm))):
        moves.append(Move("permute_left", perm))
    moves += [BEND_LEFT] * len(tgt_right)
    return moves


def apply_moves_to_term(t: Term, moves) -> Term:
    for mv in moves:
        if mv.kind == "bend_left":
            t = bend_left(t)
        elif mv.kind == "bend_right":
            t = bend_right(t)
        elif mv.kind == "permute_left":
            inv = [0] * len(mv.perm)
            for i, p in enumerate(mv.perm):
                inv[p] = i
            t = Seq(perm_term(inv), t)
        elif mv.kind == "permute_right":
            t = Seq(t, perm_term(mv.perm))
        else:
            raise SigflowError(f"unknown move {mv.kind!r}")
    return t


def realise(t: Term, prefer_inputs=()) -> Realisation:
    """Rewire ``t`` into a signal flow graph with the same semantics."""
    s = sort_of(t)
    S = dsem(t)
    left, right = port_names(s)
    order = right + left
    P = reindex(S, plan_moves(left, right, order, []))
    M = as_kernel_matrix(P)
    prefer = list(prefer_inputs)
    for p in prefer:
        if p not in order:
            raise SigflowError(f"no port {p} in a circuit of sort {s}")
    rf = rational_form(M, avoid=[order.index(p) for p in prefer])
    pivots = [rf.pivot[r] for r in sorted(rf.pivot)]
    clash = [order[c] for c in pivots if order[c] in prefer]
    if clash:
        raise SigflowError(f"cannot make {', '.join(clash)} an input: no rational pivot avoids it")
    canonical = left + right
    out_ports = sorted((order[c] for c in pivots), key=canonical.index)
    in_ports = [p for p in canonical if p not in out_ports]
    row_of = {order[c]: r for r, c in rf.pivot.items()}
    grid = [[-rf.Mhat[row_of[o], order.index(i)] for i in in_ports] for o in out_ports]
    transfer = Matrix._raw(tuple(tuple(r) for r in grid), "FieldQx", len(in_ports))
    if len(in_ports) != S.dim:
        raise InvariantViolation(f"{len(in_ports)} inputs for a relation of dimension {S.dim}")
    sf = matrix_form_circuit(transfer)
    moves = tuple(plan_moves(in_ports, out_ports, left, right))
    rewired = apply_moves_to_term(sf, moves)
    real = Realisation(s, sf, IoPartition(tuple(in_ports), tuple(out_ports)), transfer, moves, rewired)
    if real.source_relation() != S:
        raise InvariantViolation("realisation does not reproduce the source semantics")
    return real


# ---------------------------------------------------------------------------
# Trace form


@dataclass(frozen=True)
class TraceForm:
    z: int
    core: Term

    def term(self) -> Term:
        """``core`` with its top ``z`` ports looped back through delays."""
        t = self.core
        for _ in range(self.z):
            t = Feedback(t)
        return t


def trace_form(t: Term) -> TraceForm:
    """Pull every delay of a signal flow graph out into feedback loops."""
    if not classify(t).sf:
        raise NotSF("trace form needs a signal flow graph")
    z, core = _trace(t)
    return TraceForm(z, core)


def _trace(t):
    if isinstance(t, Gen):
        if t.kind == "delay":
            return 1, SWAP
        if t.kind == "ptrans":
            return _trace(ptrans_ladder(t.param))
        return 0, t
    if isinstance(t, Feedback):
        z, c = _trace(t.body)
        return z + 1, c
    if isinstance(t, Par):
        za, ca = _trace(t.top)
        zb, cb = _trace(t.bottom)
        na, ma = sort_of(t.top)
        nb, mb = sort_of(t.bottom)
        core = _layers(
            _wide(ids(za), sym_term(zb, na), ids(nb)),
            Par(ca, cb),
            _wide(ids(za), sym_term(ma, zb), ids(mb)),
        )
        return za + zb, core
    za, ca = _trace(t.left)
    zb, cb = _trace(t.right)
    n, k = sort_of(t.left)
    core = _layers(
        _wide(ids(za), sym_term(zb, n)),
        _wide(ca, ids(zb)),
        _wide(ids(za), sym_term(k, zb)),
        _wide(ids(za), cb),
    )
    return za + zb, core


def _wide(*terms) -> Term:
    """Parallel composite skipping empty wiring."""
    kept = [x for x in terms if x != ID0]
    return par(*kept) if kept else ID0


__all__ = [
    "IoPartition", "Realisation", "rational_block", "direct_form", "matrix_form_circuit",
    "as_rational_matrix", "plan_moves", "apply_moves_to_term", "realise", "TraceForm",
    "trace_form",
]
