"""Circuit terms: AST, concrete syntax, sorts and structural classifiers.

Terms are built from generators with ``Seq`` (``;``, left to right) and
``Par`` (``|``, top over bottom), plus ``Feedback``, which loops the topmost
right port back to the topmost left port through a delay.

>>> from sigflow.circuit import parse, sort_of, to_dsl
>>> t = parse("copy ; (amp(2) | id) ; add")
>>> sort_of(t)
Sort(n=1, m=1)
>>> to_dsl(t)
'copy ; amp(2) | id ; add'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple

from .algebra import Poly, format_poly, format_rat, parse_poly, rat
from .errors import CircuitSyntaxError, SigflowError, SortMismatch, UnknownGenerator


class Sort(NamedTuple):
    n: int
    m: int

    def __str__(self):
        return f"({self.n},{self.m})"


GEN_SORTS = {
    "id": (1, 1), "id0": (0, 0), "swap": (2, 2),
    "copy": (1, 2), "discard": (1, 0), "add": (2, 1), "zero": (0, 1),
    "amp": (1, 1), "delay": (1, 1), "ptrans": (1, 1),
    "cocopy": (2, 1), "codiscard": (0, 1), "coadd": (1, 2), "cozero": (1, 0),
    "coamp": (1, 1), "codelay": (1, 1), "coptrans": (1, 1),
}
STRUCTURAL = frozenset({"id", "id0", "swap"})
FORWARD = frozenset({"copy", "discard", "add", "zero", "amp", "delay", "ptrans"}) | STRUCTURAL
BACKWARD = frozenset({"cocopy", "codiscard", "coadd", "cozero", "coamp", "codelay", "coptrans"}) | STRUCTURAL
PARAMETRIC = frozenset({"amp", "coamp", "ptrans", "coptrans"})
MIRROR = {k: ("co" + k if "co" + k in GEN_SORTS else k) for k in FORWARD}
MIRROR.update({v: k for k, v in MIRROR.items()})


class Term:
    """Base class of circuit terms.  Instances are immutable and hashable."""

    __slots__ = ("_hash", "_sort")

    def __setattr__(self, key, value):
        raise AttributeError("terms are immutable")

    def _init(self, **fields):
        for k, v in fields.items():
            object.__setattr__(self, k, v)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_sort", None)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self._key())
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return self._key() == other._key()

    def __repr__(self):
        return f"{type(self).__name__}({to_dsl(self)!r})"

    def __str__(self):
        return to_dsl(self)


class Gen(Term):
    """A generator; ``param`` is an ``mpq`` for amplifiers, a ``Poly`` for ptrans."""

    __slots__ = ("kind", "param")

    def __init__(self, kind: str, param=None):
        if kind not in GEN_SORTS:
            raise SigflowError(f"unknown generator {kind!r}")
        if kind in ("amp", "coamp"):
            param = rat(param)
        elif kind in ("ptrans", "coptrans"):
            param = param if isinstance(param, Poly) else Poly(param if isinstance(param, (list, tuple)) else (param,))
        elif param is not None:
            raise SigflowError(f"generator {kind!r} takes no parameter")
        self._init(kind=kind, param=param)

    def _key(self):
        return ("Gen", self.kind, self.param)


class Seq(Term):
    __slots__ = ("left", "right")

    def __init__(self, left: Term, right: Term):
        self._init(left=left, right=right)

    def _key(self):
        return ("Seq", self.left, self.right)


class Par(Term):
    __slots__ = ("top", "bottom")

    def __init__(self, top: Term, bottom: Term):
        self._init(top=top, bottom=bottom)

    def _key(self):
        return ("Par", self.top, self.bottom)


class Feedback(Term):
    __slots__ = ("body",)

    def __init__(self, body: Term):
        self._init(body=body)

    def _key(self):
        return ("Feedback", self.body)


ID = Gen("id")
ID0 = Gen("id0")
SWAP = Gen("swap")
COPY = Gen("copy")
DISCARD = Gen("discard")
ADD = Gen("add")
ZERO = Gen("zero")
COCOPY = Gen("cocopy")
CODISCARD = Gen("codiscard")
COADD = Gen("coadd")
COZERO = Gen("cozero")
DELAY = Gen("delay")
CODELAY = Gen("codelay")
CAP = Seq(CODISCARD, COPY)
CUP = Seq(COCOPY, DISCARD)


def amp(k) -> Gen:
    return Gen("amp", k)


def coamp(k) -> Gen:
    return Gen("coamp", k)


def ptrans(p) -> Gen:
    return Gen("ptrans", p)


def coptrans(p) -> Gen:
    return Gen("coptrans", p)


def seq(*terms) -> Term:
    out = terms[0]
    for t in terms[1:]:
        out = Seq(out, t)
    return out


def par(*terms) -> Term:
    if not terms:
        return ID0
    out = terms[0]
    for t in terms[1:]:
        out = Par(out, t)
    return out


def ids(n: int) -> Term:
    return par(*([ID] * n)) if n else ID0


# ---------------------------------------------------------------------------
# Sorts


def sort_of(t: Term) -> Sort:
    s = t._sort
    if s is not None:
        return s
    if isinstance(t, Gen):
        s = Sort(*GEN_SORTS[t.kind])
    elif isinstance(t, Seq):
        a, b = sort_of(t.left), sort_of(t.right)
        if a.m != b.n:
            raise SortMismatch(f"in {_clip(t)}: left part has {a.m} right ports but right part has {b.n} left ports")
        s = Sort(a.n, b.m)
    elif isinstance(t, Par):
        a, b = sort_of(t.top), sort_of(t.bottom)
        s = Sort(a.n + b.n, a.m + b.m)
    elif isinstance(t, Feedback):
        a = sort_of(t.body)
        if a.n < 1 or a.m < 1:
            raise SortMismatch(f"in {_clip(t)}: feedback needs a body of sort (n+1,m+1), got {a}")
        s = Sort(a.n - 1, a.m - 1)
    else:
        raise TypeError(f"not a term: {t!r}")
    object.__setattr__(t, "_sort", s)
    return s


def _clip(t: Term, width: int = 60) -> str:
    text = to_dsl(t)
    return repr(text if len(text) <= width else text[: width - 3] + "...")


def size(t: Term) -> int:
    """Number of generator occurrences."""
    if isinstance(t, Gen):
        return 1
    if isinstance(t, Feedback):
        return size(t.body)
    return sum(size(c) for c in children(t))


def children(t: Term) -> tuple:
    if isinstance(t, Seq):
        return (t.left, t.right)
    if isinstance(t, Par):
        return (t.top, t.bottom)
    if isinstance(t, Feedback):
        return (t.body,)
    return ()


# ---------------------------------------------------------------------------
# Classification


@dataclass(frozen=True)
class Classification:
    forward: bool
    backward: bool
    span: bool
    cospan: bool
    sf: bool

    def as_dict(self):
        return {"forward": self.forward, "backward": self.backward, "span": self.span,
                "cospan": self.cospan, "sf": self.sf}


def classify(t: Term) -> Classification:
    """Structural flags.

    ``span``/``cospan`` are decided by a syntactic recursion: generators are
    both, ``a | b`` is span iff both are, and ``a ; b`` is span iff ``a`` is
    backward and ``b`` span, or ``a`` span and ``b`` forward (dually for
    cospan).  This recognises the factored shapes only.
    """
    return Classification(*_classify(t))


def _classify(t):
    if isinstance(t, Gen):
        f = t.kind in FORWARD
        b = t.kind in BACKWARD
        return f, b, True, True, f
    if isinstance(t, Feedback):
        f, b, sp, co, sf = _classify(t.body)
        return False, False, False, False, sf
    if isinstance(t, Par):
        x, y = _classify(t.top), _classify(t.bottom)
        return tuple(p and q for p, q in zip(x, y))
    x, y = _classify(t.left), _classify(t.right)
    fa, ba, spa, coa, sfa = x
    fb, bb, spb, cob, sfb = y
    span = (ba and spb) or (spa and fb)
    cospan = (fa and cob) or (coa and bb)
    return fa and fb, ba and bb, span, cospan, sfa and sfb


def is_forward(t: Term) -> bool:
    return _classify(t)[0]


# ---------------------------------------------------------------------------
# Derived constructions


def feedback(t: Term) -> Term:
    """Close the topmost right port onto the topmost left port via a delay."""
    s = sort_of(t)
    if s.n < 1 or s.m < 1:
        raise SortMismatch(f"feedback needs sort (n+1,m+1), got {s}")
    return Feedback(t)


def unfold_feedback(t: Feedback) -> Term:
    """The cap/delay/cup wiring that ``Feedback`` abbreviates."""
    s = sort_of(t.body)
    n, m = s.n - 1, s.m - 1
    return seq(
        Par(CAP, ids(n)) if n else CAP,
        Par(ID, t.body),
        par(ID, DELAY, *([ids(m)] if m else [])),
        Par(CUP, ids(m)) if m else CUP,
    )


def bend_left(t: Term) -> Term:
    """Turn the first left port into the first right port: (n+1,m) -> (n,1+m)."""
    s = sort_of(t)
    if s.n < 1:
        raise SortMismatch(f"bend_left needs a left port, sort is {s}")
    n = s.n - 1
    return Seq(Par(CAP, ids(n)) if n else CAP, Par(ID, t))


def bend_right(t: Term) -> Term:
    """Turn the first right port into the first left port: (n,1+m) -> (1+n,m)."""
    s = sort_of(t)
    if s.m < 1:
        raise SortMismatch(f"bend_right needs a right port, sort is {s}")
    m = s.m - 1
    return Seq(Par(ID, t), Par(CUP, ids(m)) if m else CUP)


def ptrans_ladder(p: Poly) -> Term:
    """Forward 1 -> 1 circuit multiplying by ``p``: copy, scale, delay, add."""
    c = p.coeffs
    if not c:
        return Seq(DISCARD, ZERO)
    if len(c) == 1:
        return amp(c[0])
    rest = ptrans_ladder(Poly._raw(c[1:]))
    tail = Seq(DELAY, rest)
    if not c[0]:
        return tail
    return seq(COPY, Par(amp(c[0]), tail), ADD)


def mirror(t: Term) -> Term:
    """Reflect left-right: generators become their mirror images."""
    if isinstance(t, Gen):
        return Gen(MIRROR[t.kind], t.param)
    if isinstance(t, Seq):
        return Seq(mirror(t.right), mirror(t.left))
    if isinstance(t, Par):
        return Par(mirror(t.top), mirror(t.bottom))
    return mirror(unfold_feedback(t))


def desugar(t: Term, feedback: bool = False) -> Term:
    """Expand ``ptrans``/``coptrans`` (and ``Feedback`` if asked) into generators."""
    if isinstance(t, Gen):
        if t.kind == "ptrans":
            return ptrans_ladder(t.param)
        if t.kind == "coptrans":
            return mirror(ptrans_ladder(t.param))
        return t
    if isinstance(t, Seq):
        return Seq(desugar(t.left, feedback), desugar(t.right, feedback))
    if isinstance(t, Par):
        return Par(desugar(t.top, feedback), desugar(t.bottom, feedback))
    body = desugar(t.body, feedback)
    return desugar(unfold_feedback(Feedback(body)), feedback) if feedback else Feedback(body)


def perm_term(perm) -> Term:
    """Wiring of sort (k,k) whose right port ``i`` is left port ``perm[i]``."""
    k = len(perm)
    if sorted(perm) != list(range(k)):
        raise SigflowError(f"{perm} is not a permutation")
    cur = list(range(k))
    layers = []
    target_pos = {w: i for i, w in enumerate(perm)}
    # bubble sort cur into perm with adjacent swaps
    changed = True
    while changed:
        changed = False
        for j in range(k - 1):
            if target_pos[cur[j]] > target_pos[cur[j + 1]]:
                cur[j], cur[j + 1] = cur[j + 1], cur[j]
                layers.append(par(*([ids(j)] if j else []), SWAP, *([ids(k - j - 2)] if k - j - 2 else [])))
                changed = True
    if not layers:
        return ids(k)
    return seq(*layers)


def sym_term(a: int, b: int) -> Term:
    """Block swap of sort (a+b, b+a)."""
    return perm_term(list(range(a, a + b)) + list(range(a)))


# ---------------------------------------------------------------------------
# Concrete syntax


def to_dsl(t: Term) -> str:
    """Print with the fewest parentheses that re-parse to the same tree."""
    return _show(t, 0)


def _show(t, ctx):
    # ctx 0: anywhere; 1: right operand of ';'; 2: left operand of '|'; 3: right operand of '|'
    if isinstance(t, Gen):
        if t.kind in ("amp", "coamp"):
            return f"{t.kind}({format_rat(t.param)})"
        if t.kind in ("ptrans", "coptrans"):
            return f"{t.kind}({format_poly(t.param)})"
        return t.kind
    if isinstance(t, Feedback):
        return "fb{ " + _show(t.body, 0) + " }"
    if isinstance(t, Seq):
        s = f"{_show(t.left, 0)} ; {_show(t.right, 1)}"
        return f"({s})" if ctx else s
    s = f"{_show(t.top, 2)} | {_show(t.bottom, 3)}"
    return f"({s})" if ctx == 3 else s


_TOKEN = re.compile(r"[A-Za-z_][A-Za-z_0-9]*|[;|(){}]")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self):
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch.isspace():
                self.pos += 1
            elif ch == "#":
                nl = text.find("\n", self.pos)
                self.pos = len(text) if nl < 0 else nl
            else:
                break

    def _where(self, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, msg, pos=None, cls=CircuitSyntaxError):
        return cls(msg, *self._where(pos))

    def peek(self):
        self._skip()
        if self.pos >= len(self.text):
            return None
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            raise self.error(f"unexpected character {self.text[self.pos]!r}")
        return m.group()

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            raise self.error(f"expected {expected!r}, found end of input" if expected else "unexpected end of input")
        if expected is not None and tok != expected:
            raise self.error(f"expected {expected!r}, found {tok!r}")
        self.pos += len(tok)
        return tok

    def term(self):
        t = self.layer()
        while self.peek() == ";":
            self.take()
            t = Seq(t, self.layer())
        return t

    def layer(self):
        t = self.atom()
        while self.peek() == "|":
            self.take()
            t = Par(t, self.atom())
        return t

    def atom(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            t = self.term()
            self.take(")")
            return t
        if tok is None:
            raise self.error("expected a circuit, found end of input")
        tok_pos = self.pos
        self.take()
        if tok == "fb":
            self.take("{")
            body = self.term()
            self.take("}")
            return Feedback(body)
        if tok in PARAMETRIC:
            self.take("(")
            close = self.text.find(")", self.pos)
            if close < 0:
                raise self.error(f"unclosed argument of {tok}")
            arg = self.text[self.pos:close]
            arg_pos = self.pos
            self.pos = close + 1
            try:
                if tok in ("amp", "coamp"):
                    return Gen(tok, rat(arg))
                return Gen(tok, parse_poly(arg))
            except SigflowError as exc:
                raise self.error(str(exc), arg_pos) from None
        if tok in GEN_SORTS:
            return Gen(tok)
        if re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", tok):
            raise self.error(f"unknown generator {tok!r}", tok_pos, UnknownGenerator)
        raise self.error(f"unexpected {tok!r}", tok_pos)


def parse(text: str) -> Term:
    """Parse the circuit DSL; ``|`` binds tighter than ``;``."""
    p = _Parser(text)
    t = p.term()
    if p.peek() is not None:
        raise p.error(f"unexpected {p.peek()!r}")
    return t


def parse_file(path) -> Term:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# ---------------------------------------------------------------------------
# Ports


def port_names(s: Sort):
    return [f"L{i + 1}" for i in range(s.n)], [f"R{j + 1}" for j in range(s.m)]


def parse_port(name: str, s: Sort):
    """``"L2"`` -> ``("L", 1)`` with range checking against sort ``s``."""
    m = re.fullmatch(r"([LR])(\d+)", name.strip())
    if not m:
        raise SigflowError(f"bad port name {name!r}; use L1..Ln or R1..Rm")
    side, idx = m.group(1), int(m.group(2))
    limit = s.n if side == "L" else s.m
    if not 1 <= idx <= limit:
        raise SigflowError(f"port {name} out of range for sort {s}")
    return side, idx - 1


__all__ = [
    "Sort", "Term", "Gen", "Seq", "Par", "Feedback", "Classification",
    "ID", "ID0", "SWAP", "COPY", "DISCARD", "ADD", "ZERO", "COCOPY", "CODISCARD",
    "COADD", "COZERO", "DELAY", "CODELAY", "CAP", "CUP",
    "amp", "coamp", "ptrans", "coptrans", "seq", "par", "ids",
    "sort_of", "size", "classify", "is_forward", "feedback", "unfold_feedback",
    "bend_left", "bend_right", "ptrans_ladder", "mirror", "desugar", "perm_term", "sym_term",
    "to_dsl", "parse", "parse_file", "port_names", "parse_port", "children",
]
