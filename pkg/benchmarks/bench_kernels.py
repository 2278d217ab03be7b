"""Compare the compiled and pure-Python polynomial kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Kernel workloads call both modules directly on the same inputs.  The
end-to-end workload realises a batch of random circuits in a subprocess per
backend, because the backend is chosen once at import.
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit

from gmpy2 import mpq

from sigflow import _kernels_py as py

try:
    from sigflow import _kernels_c as cy
except ImportError:
    cy = None


def _poly(rng, degree, bound=9):
    cs = [mpq(rng.randint(-bound, bound), rng.randint(1, 4)) for _ in range(degree + 1)]
    cs[-1] = cs[-1] or mpq(1)
    return tuple(cs)


def _fracs(rng, count, degree):
    out = []
    for _ in range(count):
        out.append(py.frac_norm(_poly(rng, degree), _poly(rng, degree)))
    return out


def small_fraction_arithmetic(k):
    rng = random.Random(1)
    fs = _fracs(rng, 40, 2)

    def run():
        return [(k.frac_add(*f, *g), k.frac_mul(*f, *g)) for f, g in zip(fs, fs[1:])]
    return run


def large_gcd(k):
    rng = random.Random(2)
    common = _poly(rng, 10)
    a = py.pmul(_poly(rng, 20), common)
    b = py.pmul(_poly(rng, 20), common)

    def run():
        return k.pgcd(a, b)
    return run


def polynomial_products(k):
    rng = random.Random(3)
    ps = [_poly(rng, 8) for _ in range(30)]

    def run():
        acc = (mpq(1),)
        for p in ps:
            acc = k.trim(k.pmul(acc, p)[:24])
        return acc
    return run


WORKLOADS = [
    ("fraction add/mul, degree 2", small_fraction_arithmetic, 200),
    ("polynomial products, degree 8", polynomial_products, 200),
    ("gcd, degree 30", large_gcd, 20),
]

END_TO_END = """
import time
from sigflow.realise import realise
from sigflow.testing import random_term, rng_for
rng = rng_for("bench")
terms = [random_term(rng) for _ in range(200)]
t0 = time.perf_counter()
for t in terms:
    realise(t)
print(time.perf_counter() - t0)
"""


def end_to_end(pure: bool) -> float:
    env = dict(os.environ)
    if pure:
        env["SIGFLOW_PURE"] = "1"
    else:
        env.pop("SIGFLOW_PURE", None)
    proc = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True,
                          text=True, check=True)
    return float(proc.stdout.strip())


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if cy is None:
        sys.exit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    print(f"{'workload':34} {'python':>10} {'cython':>10} {'speedup':>8}")
    for name, make, number in WORKLOADS:
        if make(py)() != make(cy)():
            sys.exit(f"backends disagree on {name}")
        tp = min(timeit.repeat(make(py), number=number, repeat=args.repeat))
        tc = min(timeit.repeat(make(cy), number=number, repeat=args.repeat))
        print(f"{name:34} {tp:9.3f}s {tc:9.3f}s {tp / tc:7.2f}x")
    tp, tc = end_to_end(True), end_to_end(False)
    print(f"{'realise 200 random circuits':34} {tp:9.3f}s {tc:9.3f}s {tp / tc:7.2f}x")


if __name__ == "__main__":
    main()
