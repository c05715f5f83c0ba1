"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import random
import timeit

import mpmath

from moontrace import _pykernels

try:
    from moontrace import _ckernels
except ImportError:
    _ckernels = None


def cases():
    rng = random.Random(0)
    a = [rng.randint(-10**30, 10**30) for _ in range(400)]
    b = [rng.randint(-10**30, 10**30) for _ in range(400)]
    yield "convolve_trunc n=400", lambda k: k.convolve_trunc(a, b, 400)
    for bits, y in ((320, 0.3), (640, 0.3), (640, 0.05)):
        with mpmath.workprec(bits):
            tau = mpmath.mpc(0.1, y)
            q = mpmath.exp(2j * mpmath.pi * tau)
        nterms = int((bits * 0.7 / (2 * 3.1416 * y) * 2 / 3) ** 0.5) + 2
        yield f"pentagonal_sum {bits}b Im={y} K={nterms}", (
            lambda k, q=q, n=nterms, b=bits: k.pentagonal_sum(q, n, b))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=20)
    ns = ap.parse_args()
    print(f"{'kernel':42s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for name, fn in cases():
        t_py = min(timeit.repeat(lambda: fn(_pykernels), number=ns.number, repeat=ns.repeat)) / ns.number
        if _ckernels is None:
            print(f"{name:42s} {t_py * 1e3:10.3f} {'n/a':>10s}")
            continue
        t_c = min(timeit.repeat(lambda: fn(_ckernels), number=ns.number, repeat=ns.repeat)) / ns.number
        print(f"{name:42s} {t_py * 1e3:10.3f} {t_c * 1e3:10.3f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
