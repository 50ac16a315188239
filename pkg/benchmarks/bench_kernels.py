"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--order 16]

Kernel timings call both implementations on identical inputs in-process.
The end-to-end timing runs a normalization in a subprocess per backend
(``BRUNONF_PURE_PYTHON`` selects the fallback).
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

import gmpy2

from brunonf import _pykernels as py
from brunonf.series import monomials_upto

try:
    from brunonf import _ckernels as cy
except ImportError:
    cy = None


def series_terms(rng, n, deg, density=0.7):
    return {m: gmpy2.mpq(rng.randint(-9, 9), rng.randint(1, 5))
            for m in monomials_upto(n, deg) if rng.random() < density}


def field_terms(rng, n, deg, density=0.4):
    return {m: [gmpy2.mpq(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)]
            for m in monomials_upto(n, deg) if rng.random() < density}


def kernel_cases(order):
    rng = random.Random(0)
    a = series_terms(rng, 3, order - 1)
    b = series_terms(rng, 3, order - 1)
    d1 = field_terms(rng, 3, 4)
    d2 = field_terms(rng, 3, 4)
    z = gmpy2.mpq(0)
    return {
        "mul (n=3)": lambda k: k.mul_terms(a, b, order),
        "apply (n=3)": lambda k: k.apply_terms(d1, a, order, z),
        "bracket (n=3)": lambda k: k.bracket_terms(d1, d2, order, z),
        "omega float (n=3, 32)": lambda k: k.omega_shells_float([1.0, -1.618, 0.3], [0.0] * 3,
                                                               32, True, 1e-12),
        "omega int (n=3, 32)": lambda k: k.omega_shells_int([2, -3, 5], [0, 0, 0], 32, True),
    }


END_TO_END = """
import time
from brunonf.derivation import LogDerivation as L
from brunonf.normalize import newton_normalize
from brunonf.scalars import QQ
N = {order}
d = (L.diagonal((1, -1, 2), N, QQ) + L.monomial((1, 0, 0), (0, 1, 1), N, QQ)
     + L.monomial((0, 1, 1), (1, 2, 0), N, QQ) + L.monomial((1, 1, 0), (3, 0, -1), N, QQ))
t = time.perf_counter()
newton_normalize(d, N)
print(time.perf_counter() - t)
"""


def end_to_end(order, pure):
    env = dict(os.environ, BRUNONF_PURE_PYTHON="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", END_TO_END.format(order=order)], env=env,
                         capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--order", type=int, default=16)
    args = ap.parse_args(argv)
    if cy is None:
        print("compiled kernels are not built; only the fallback is available")
    print(f"{'kernel':28s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for name, fn in kernel_cases(args.order).items():
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat)) * 1e3
        if cy is None:
            print(f"{name:28s} {t_py:12.2f} {'-':>12s} {'-':>8s}")
            continue
        t_cy = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:28s} {t_py:12.2f} {t_cy:12.2f} {t_py / t_cy:7.1f}x")
    t_py = end_to_end(args.order, True)
    line = f"{'newton_normalize (n=3)':28s} {t_py * 1e3:12.2f}"
    if cy is not None:
        t_cy = end_to_end(args.order, False)
        line += f" {t_cy * 1e3:12.2f} {t_py / t_cy:7.1f}x"
    print(line)


if __name__ == "__main__":
    main()
