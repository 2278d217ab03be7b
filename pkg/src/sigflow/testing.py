"""Random circuits for property tests.

Every generator takes a ``random.Random`` so runs are reproducible; the
environment variable ``SIGFLOW_SEED`` picks the base seed.  Terms are built
top-down for a requested sort: a node is a generator of that sort, a
sequential or parallel split, or (for signal flow graphs) a feedback loop
around a wider body.  When the budget runs out an adapter of the right sort
closes the term off.
"""

from __future__ import annotations

import os
import random

from gmpy2 import mpq

from .algebra import Poly
from .circuit import (
    ADD, COPY, DELAY, DISCARD, ID, ID0, SWAP, ZERO, Feedback, Par, Seq, Term, amp, coamp,
    coptrans, mirror, ptrans, size,
)

SCALARS = (mpq(-2), mpq(-1), mpq(0), mpq(1), mpq(2), mpq(3), mpq(1, 2), mpq(-2, 3))


def base_seed() -> int:
    return int(os.environ.get("SIGFLOW_SEED", "0"))


def rng_for(label: str) -> random.Random:
    """A generator seeded from ``SIGFLOW_SEED`` and a per-test label."""
    return random.Random(f"{base_seed()}:{label}")


def random_scalar(rng: random.Random) -> mpq:
    return rng.choice(SCALARS)


def random_poly(rng: random.Random, max_degree: int = 2) -> Poly:
    d = rng.randint(0, max_degree)
    return Poly([mpq(rng.randint(-2, 2)) for _ in range(d + 1)])


def _forward_leaf(rng, n, m, delays):
    if (n, m) == (1, 1):
        pool = ["id", "amp"] + (["delay", "delay", "ptrans"] if delays else [])
        k = rng.choice(pool)
        if k == "id":
            return ID
        if k == "amp":
            return amp(random_scalar(rng))
        if k == "delay":
            return DELAY
        return ptrans(random_poly(rng))
    return {(2, 2): SWAP, (1, 2): COPY, (1, 0): DISCARD, (2, 1): ADD, (0, 1): ZERO, (0, 0): ID0}.get((n, m))


def forward_adapter(n: int, m: int) -> Term:
    """Some forward circuit of sort (n, m): sum the inputs, then copy."""
    if n == 0:
        t = ZERO
    else:
        t = ID
        for _ in range(n - 1):
            t = Seq(Par(t, ID), ADD)
    if m == 0:
        return ID0 if n == 0 else Seq(t, DISCARD)
    out = ID
    for _ in range(m - 1):
        out = Seq(COPY, Par(ID, out))
    if n == 0 and m == 1:
        return ZERO
    return Seq(t, out) if t is not ID else out


def _forward(rng, n, m, budget, delays, loops):
    leaf = _forward_leaf(rng, n, m, delays)
    if budget <= 1:
        return leaf if leaf is not None else forward_adapter(n, m)
    choices = ["seq", "par"] + (["leaf"] * 2 if leaf is not None else [])
    if loops:
        choices.append("fb")
    k = rng.choice(choices)
    if k == "leaf":
        return leaf
    if k == "fb":
        return Feedback(_forward(rng, n + 1, m + 1, budget - 1, delays, loops))
    if k == "seq":
        mid = rng.randint(0, 3)
        split = rng.randint(1, budget - 1)
        return Seq(_forward(rng, n, mid, split, delays, loops),
                   _forward(rng, mid, m, budget - split, delays, loops))
    if n + m == 0:
        return ID0
    n1 = rng.randint(0, n)
    m1 = rng.randint(0, m)
    split = rng.randint(1, budget - 1)
    return Par(_forward(rng, n1, m1, split, delays, loops),
               _forward(rng, n - n1, m - m1, budget - split, delays, loops))


def _sized(rng, make, max_size):
    for _ in range(200):
        t = make()
        if size(t) <= max_size:
            return t
    raise RuntimeError("could not generate a small enough term")


def random_sort(rng: random.Random, max_ports: int = 3):
    return rng.randint(0, max_ports), rng.randint(0, max_ports)


def _fill_sort(rng, n, m):
    a, b = random_sort(rng)
    return (a if n is None else n), (b if m is None else m)


def random_forward(rng, n=None, m=None, max_size=12, delays=True) -> Term:
    """Forward circuit without feedback."""
    n, m = _fill_sort(rng, n, m)
    return _sized(rng, lambda: _forward(rng, n, m, rng.randint(1, max_size), delays, False), max_size)


def random_sf(rng, n=None, m=None, max_size=12) -> Term:
    """Signal flow graph: forward generators closed under delayed feedback."""
    n, m = _fill_sort(rng, n, m)
    return _sized(rng, lambda: _forward(rng, n, m, rng.randint(1, max_size), True, True), max_size)


def random_backward(rng, n=None, m=None, max_size=12) -> Term:
    n, m = _fill_sort(rng, n, m)
    return mirror(random_forward(rng, m, n, max_size))


def random_span(rng, n=None, m=None, max_size=12) -> Term:
    """A backward circuit followed by a forward one."""
    n, m = _fill_sort(rng, n, m)
    k = rng.randint(0, 3)
    half = max(1, max_size // 2)
    return Seq(random_backward(rng, n, k, half), random_forward(rng, k, m, half))


def random_cospan(rng, n=None, m=None, max_size=12) -> Term:
    """A forward circuit followed by a backward one."""
    n, m = _fill_sort(rng, n, m)
    k = rng.randint(0, 3)
    half = max(1, max_size // 2)
    return Seq(random_forward(rng, n, k, half), random_backward(rng, k, m, half))


def _general(rng, n, m, budget):
    if budget <= 1 or rng.random() < 0.25:
        if rng.random() < 0.5:
            return _forward(rng, n, m, 1, True, False)
        leaf = _forward(rng, m, n, 1, True, False)
        return mirror(leaf)
    k = rng.choice(["seq", "seq", "par", "fb"])
    if k == "fb":
        return Feedback(_general(rng, n + 1, m + 1, budget - 1))
    split = rng.randint(1, budget - 1)
    if k == "seq":
        mid = rng.randint(0, 3)
        return Seq(_general(rng, n, mid, split), _general(rng, mid, m, budget - split))
    n1, m1 = rng.randint(0, n), rng.randint(0, m)
    return Par(_general(rng, n1, m1, split), _general(rng, n - n1, m - m1, budget - split))


def random_term(rng, n=None, m=None, max_size=12) -> Term:
    """Any circuit: forward and backward generators mixed, feedback allowed."""
    n, m = _fill_sort(rng, n, m)
    return _sized(rng, lambda: _general(rng, n, m, rng.randint(1, max_size)), max_size)


def random_rational(rng) -> "Frac":
    from .algebra import Frac
    num = random_poly(rng)
    den = random_poly(rng)
    den = Poly([rng.choice([mpq(1), mpq(-1), mpq(2), mpq(1, 2)])] + list(den.coeffs[1:]))
    return Frac(num, den)


__all__ = [
    "SCALARS", "base_seed", "rng_for", "random_scalar", "random_poly", "random_sort",
    "forward_adapter", "random_forward", "random_sf", "random_backward", "random_span",
    "random_cospan", "random_term", "random_rational", "coamp", "coptrans",
]
