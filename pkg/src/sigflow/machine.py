"""Operational semantics: one-step transition relations over Q.

A circuit with ``r`` registers (one per delay or codelay, in left-to-right
in-order traversal) behaves at each tick as a subspace of
``Q^n x Q^m x Q^r x Q^r`` with coordinates ``[left | right | regs | regs']``.
Sequential composition shares the middle wires and projects them out,
parallel composition is a direct sum.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .algebra import rat
from .circuit import (
    Feedback, Gen, Seq, Sort, Term, mirror, parse_port, port_names, ptrans_ladder, sort_of,
    unfold_feedback,
)
from .errors import InputLengthMismatch, Nondeterministic, SigflowError
from .matrix import nullspace, rank_of, rref, solve
from .relation import compose_rows, direct_sum_rows, permute_rows

Q0 = mpq(0)
Q1 = mpq(1)


@dataclass(frozen=True)
class StepRelation:
    n: int
    m: int
    registers: tuple
    rows: tuple

    @property
    def r(self) -> int:
        return len(self.registers)

    @property
    def width(self) -> int:
        return self.n + self.m + 2 * self.r

    def block(self, name: str) -> range:
        n, m, r = self.n, self.m, self.r
        return {
            "left": range(0, n),
            "right": range(n, n + m),
            "regs": range(n + m, n + m + r),
            "next": range(n + m + r, n + m + 2 * r),
        }[name]


def _rel(n, m, regs, vecs):
    width = n + m + 2 * len(regs)
    rows = rref([[mpq(v) for v in vec] for vec in vecs], width)[0]
    return StepRelation(n, m, tuple(regs), tuple(rows))


_STATELESS = {
    "id": (1, 1, [(1, 1)]),
    "id0": (0, 0, []),
    "swap": (2, 2, [(1, 0, 0, 1), (0, 1, 1, 0)]),
    "copy": (1, 2, [(1, 1, 1)]),
    "discard": (1, 0, [(1,)]),
    "add": (2, 1, [(1, 0, 1), (0, 1, 1)]),
    "zero": (0, 1, []),
    "cocopy": (2, 1, [(1, 1, 1)]),
    "codiscard": (0, 1, [(1,)]),
    "coadd": (1, 2, [(1, 1, 0), (1, 0, 1)]),
    "cozero": (1, 0, []),
}


def _path_name(kind, path):
    return f"{kind}@" + (".".join(map(str, path)) if path else "root")


def step_relation(t: Term) -> StepRelation:
    """One-step transition relation, built compositionally."""
    sort_of(t)
    return _step(t, ())


def _step(t, path):
    if isinstance(t, Gen):
        k = t.kind
        if k in _STATELESS:
            n, m, vecs = _STATELESS[k]
            return _rel(n, m, (), vecs)
        if k == "amp":
            return _rel(1, 1, (), [(Q1, t.param)])
        if k == "coamp":
            return _rel(1, 1, (), [(t.param, Q1)])
        if k == "delay":
            # right = reg, reg' = left
            return _rel(1, 1, (_path_name("delay", path),), [(1, 0, 0, 1), (0, 1, 1, 0)])
        if k == "codelay":
            # left = reg, reg' = right
            return _rel(1, 1, (_path_name("codelay", path),), [(1, 0, 1, 0), (0, 1, 0, 1)])
        ladder = ptrans_ladder(t.param)
        if k == "coptrans":
            ladder = mirror(ladder)
        return _step(ladder, path + (k,))
    if isinstance(t, Feedback):
        return _step(unfold_feedback(t), path + ("fb",))
    if isinstance(t, Seq):
        return seq_step(_step(t.left, path + (0,)), _step(t.right, path + (1,)))
    return par_step(_step(t.top, path + (0,)), _step(t.bottom, path + (1,)))


def seq_step(a: StepRelation, b: StepRelation) -> StepRelation:
    if a.m != b.n:
        raise SigflowError("step relations do not compose")
    ra, rb = a.r, b.r
    # a as (left, regs, regs' | right), b as (left | right, regs, regs')
    A = permute_rows(a.rows, list(a.block("left")) + list(a.block("regs")) + list(a.block("next"))
                     + list(a.block("right")))
    B = b.rows
    nx = a.n + 2 * ra
    ny = b.m + 2 * rb
    rows = compose_rows(A, nx, a.m, B, ny, Q0, Q1)
    # now (la, sa, sa', rb, sb, sb') -> (la, rb, sa, sb, sa', sb')
    la = list(range(a.n))
    sa = list(range(a.n, a.n + ra))
    sa2 = list(range(a.n + ra, nx))
    rgt = list(range(nx, nx + b.m))
    sb = list(range(nx + b.m, nx + b.m + rb))
    sb2 = list(range(nx + b.m + rb, nx + ny))
    order = la + rgt + sa + sb + sa2 + sb2
    regs = a.registers + b.registers
    width = len(order)
    return StepRelation(a.n, b.m, regs, tuple(rref(permute_rows(rows, order), width)[0]))


def par_step(a: StepRelation, b: StepRelation) -> StepRelation:
    wa = a.width
    rows = direct_sum_rows(a.rows, wa, b.rows, b.width, Q0)

    def shift(rng):
        return [wa + i for i in rng]

    order = (list(a.block("left")) + shift(b.block("left"))
             + list(a.block("right")) + shift(b.block("right"))
             + list(a.block("regs")) + shift(b.block("regs"))
             + list(a.block("next")) + shift(b.block("next")))
    width = len(order)
    return StepRelation(a.n + b.n, a.m + b.m, a.registers + b.registers,
                        tuple(rref(permute_rows(rows, order), width)[0]))


def _as_step(t) -> StepRelation:
    return t if isinstance(t, StepRelation) else step_relation(t)


def _project_rank(sr: StepRelation, coords) -> int:
    return rank_of([[row[j] for j in coords] for row in sr.rows], len(coords))


@dataclass(frozen=True)
class Receptiveness:
    state_total: bool
    input_receptive: bool


def check_receptive(t) -> Receptiveness:
    """Does every state (and every state with every left input) have a step?"""
    sr = _as_step(t)
    regs = list(sr.block("regs"))
    total = _project_rank(sr, regs) == sr.r
    recv = _project_rank(sr, regs + list(sr.block("left"))) == sr.r + sr.n
    return Receptiveness(total, recv)


def check_init_free(t) -> bool:
    """Do zero boundary values from the zero state force the zero next state?"""
    sr = _as_step(t)
    fixed = list(sr.block("left")) + list(sr.block("right")) + list(sr.block("regs"))
    d = len(sr.rows)
    eqs = [[row[j] for row in sr.rows] for j in fixed]
    combos = nullspace(eqs, d, Q0, Q1) if d else []
    for c in combos:
        for j in sr.block("next"):
            if sum((ci * row[j] for ci, row in zip(c, sr.rows) if ci), Q0):
                return False
    return True


@dataclass(frozen=True)
class AffineSet:
    """``point + span(directions)`` over the coordinates named in ``coords``.

    ``point`` is None for the empty set.
    """

    coords: tuple
    point: tuple | None
    directions: tuple

    @property
    def empty(self) -> bool:
        return self.point is None

    @property
    def dimension(self) -> int:
        return -1 if self.point is None else len(self.directions)


def _coord_labels(sr: StepRelation):
    left, right = port_names(sort_of_step(sr))
    return left + right + [f"{r}" for r in sr.registers] + [f"{r}'" for r in sr.registers]


def sort_of_step(sr: StepRelation) -> Sort:
    return Sort(sr.n, sr.m)


def _boundary_index(sr: StepRelation, port: str) -> int:
    side, i = parse_port(port, sort_of_step(sr))
    return i if side == "L" else sr.n + i


def step(t, state, io_assignment) -> AffineSet:
    """All transitions from ``state`` consistent with the assigned ports.

    ``io_assignment`` maps port names (``"L1"``, ``"R2"``) to values.  The
    result ranges over the unassigned ports followed by the next state.
    """
    sr = _as_step(t)
    state = [rat(v) for v in state]
    if len(state) != sr.r:
        raise InputLengthMismatch(f"state has {len(state)} values, circuit has {sr.r} registers")
    fixed = {}
    for port, v in io_assignment.items():
        fixed[_boundary_index(sr, port)] = rat(v)
    for j, v in zip(sr.block("regs"), state):
        fixed[j] = v
    free = [j for j in range(sr.n + sr.m) if j not in fixed] + list(sr.block("next"))
    labels = _coord_labels(sr)
    d = len(sr.rows)
    keys = sorted(fixed)
    eqs = [[row[j] for row in sr.rows] for j in keys]
    sol, kernel = solve(eqs, [fixed[j] for j in keys], d, Q0, Q1)
    coords = tuple(labels[j] for j in free)
    if sol is None:
        return AffineSet(coords, None, ())
    point = tuple(sum((c * row[j] for c, row in zip(sol, sr.rows) if c), Q0) for j in free)
    dirs = [[sum((c * row[j] for c, row in zip(k, sr.rows) if c), Q0) for j in free] for k in kernel]
    dirs = rref(dirs, len(free))[0]
    return AffineSet(coords, point, tuple(dirs))


@dataclass(frozen=True)
class StepRecord:
    inputs: tuple
    outputs: tuple
    state: tuple


@dataclass(frozen=True)
class TraceRecord:
    registers: tuple
    inputs: tuple
    outputs: tuple
    steps: tuple
    deadlock: int | None = None

    def output_stream(self, port: str) -> list:
        i = self.outputs.index(port)
        return [s.outputs[i] for s in self.steps]


class Stepper:
    """Deterministic stepping with a precomputed linear update when possible."""

    def __init__(self, t, input_ports):
        self.sr = sr = _as_step(t)
        s = sort_of_step(sr)
        left, right = port_names(s)
        self.input_ports = tuple(input_ports)
        for p in self.input_ports:
            parse_port(p, s)
        self.output_ports = tuple(p for p in left + right if p not in self.input_ports)
        self.known = [_boundary_index(sr, p) for p in self.input_ports] + list(sr.block("regs"))
        self.unknown = [_boundary_index(sr, p) for p in self.output_ports] + list(sr.block("next"))
        self.update = self._linear_update()

    def _linear_update(self):
        sr = self.sr
        d = len(sr.rows)
        if d != len(self.known):
            return None
        A = [[row[j] for row in sr.rows] for j in self.known]  # |K| x d, A c = k
        if rank_of(A, d) != d:
            return None
        # Solve A C = I column by column to get c = C k.
        inv_cols = []
        for i in range(d):
            e = [Q1 if r == i else Q0 for r in range(d)]
            sol, _ = solve(A, e, d, Q0, Q1)
            inv_cols.append(sol)
        # unknown_j = sum_i c_i row_i[j] = sum_i sum_k C[i][k] k_k row_i[j]
        F = []
        for j in self.unknown:
            F.append([sum((inv_cols[k][i] * sr.rows[i][j] for i in range(d) if inv_cols[k][i]), Q0)
                      for k in range(d)])
        return F

    @property
    def deterministic(self) -> bool:
        return self.update is not None

    def step(self, state, values, index=0):
        """Returns ``(outputs, next_state)`` or None on deadlock."""
        if self.update is not None:
            k = list(values) + list(state)
            out = [sum((f * v for f, v in zip(row, k) if f and v), Q0) for row in self.update]
            no = len(self.output_ports)
            return tuple(out[:no]), tuple(out[no:])
        res = step(self.sr, state, dict(zip(self.input_ports, values)))
        if res.empty:
            return None
        if res.directions:
            raise Nondeterministic(index, len(res.directions))
        no = len(self.output_ports)
        return res.point[:no], res.point[no:]


def simulate(t, inputs: dict, T: int | None = None) -> TraceRecord:
    """Run from the zero state; ``inputs`` maps each input port to a stream.

    Every port not in ``inputs`` is treated as an output.
    """
    streams = {p: [rat(v) for v in vs] for p, vs in inputs.items()}
    if T is None:
        T = max((len(v) for v in streams.values()), default=0)
    for p, vs in streams.items():
        if len(vs) != T:
            raise InputLengthMismatch(f"port {p} has {len(vs)} values, expected {T}")
    left, right = port_names(sort_of(t) if isinstance(t, Term) else sort_of_step(t))
    ports = [p for p in left + right if p in streams]
    unknown = set(streams) - set(left + right)
    if unknown:
        raise SigflowError(f"no such port: {', '.join(sorted(unknown))}")
    st = Stepper(t, ports)
    state = (Q0,) * st.sr.r
    steps = []
    deadlock = None
    for k in range(T):
        values = tuple(streams[p][k] for p in ports)
        res = st.step(state, values, k)
        if res is None:
            deadlock = k
            break
        out, state = res
        steps.append(StepRecord(values, tuple(out), tuple(state)))
    return TraceRecord(st.sr.registers, tuple(ports), st.output_ports, tuple(steps), deadlock)


def is_functional(t, input_ports) -> bool:
    """True when every (state, inputs) pair has exactly one transition."""
    return Stepper(t, input_ports).deterministic


__all__ = [
    "StepRelation", "step_relation", "seq_step", "par_step", "Receptiveness", "check_receptive",
    "check_init_free", "AffineSet", "step", "StepRecord", "TraceRecord", "Stepper", "simulate",
    "is_functional",
]
