"""Compiled vs pure-Python integer kernels.

    python benchmarks/bench_kernels.py [--sizes 40 120 240] [--repeat 3] [--pipeline]

Prints best-of timings per kernel and the speedup. Inputs are shaped like
the pipeline's matrices: sparse +-1 coboundaries for Hermite forms and
nonnegative substitution counts for products and characteristic
polynomials, plus the real chair matrices. A "fallback" mark means the
compiled kernel overflowed int64 and handed over to Python. ``--pipeline``
times the whole chair run under each backend in a subprocess.
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit

from apktheory.exactlin import _pykernels

try:
    from apktheory.exactlin import _ckernels
except ImportError:  # extension not built
    _ckernels = None

P = 2_147_483_629  # prime below 2^31


def coboundary(m: int, n: int, rng: random.Random) -> list[list[int]]:
    rows = []
    for _ in range(m):
        r = [0] * n
        for j in rng.sample(range(n), min(n, 3)):
            r[j] = rng.choice((-1, 1))
        rows.append(r)
    return rows


def counts(n: int, rng: random.Random) -> list[list[int]]:
    return [[rng.choice((0, 0, 0, 0, 1, 1, 2)) for _ in range(n)] for _ in range(n)]


def best(fn, repeat: int) -> float:
    number = 1
    while timeit.timeit(fn, number=number) < 0.05 and number < 1000:
        number *= 4
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def fell_back(call) -> bool:
    hits = []
    orig = _pykernels.hermite

    def spy(*args, **kw):
        hits.append(1)
        return orig(*args, **kw)

    _pykernels.hermite = spy
    try:
        call(_ckernels)
    finally:
        _pykernels.hermite = orig
    return bool(hits)


def row(name: str, size: str, call, repeat: int) -> None:
    py = best(lambda: call(_pykernels), repeat)
    if _ckernels is None:
        print(f"{name:<22}{size:>9}{py * 1e3:>12.2f}{'-':>12}{'-':>9}")
        return
    assert call(_pykernels) == call(_ckernels), name
    cy = best(lambda: call(_ckernels), repeat)
    note = "  fallback" if name.startswith("hermite") and fell_back(call) else ""
    print(f"{name:<22}{size:>9}{py * 1e3:>12.2f}{cy * 1e3:>12.2f}{py / cy:>8.1f}x{note}")


def synthetic(sizes, repeat: int) -> None:
    rng = random.Random(0)
    for n in sizes:
        d = coboundary(n, (2 * n) // 3, rng)
        s, t = counts(n, rng), counts(n, rng)
        size = f"{n}"
        row("hermite (coboundary)", size, lambda k: k.hermite(d, len(d[0])), repeat)
        row("matmul (counts)", size, lambda k: k.matmul(s, t, n, n), repeat)
        row("charpoly_mod (counts)", size, lambda k: k.charpoly_mod(s, P), repeat)


def chair(repeat: int) -> None:
    from apktheory.cli import load_rule
    from apktheory.pipeline import build

    cs = build(load_rule("builtin:chair")).cochains
    d1, s1 = cs.delta1.tolist(), cs.sigma1.tolist()
    n = len(s1)
    size = f"{cs.delta1.rows}x{cs.delta1.cols}"
    row("hermite (chair d1)", size, lambda k: k.hermite(d1, cs.delta1.cols), repeat)
    row("matmul (chair s1)", f"{n}", lambda k: k.matmul(s1, s1, n, n), repeat)
    row("charpoly_mod (chair s1)", f"{n}", lambda k: k.charpoly_mod(s1, P), repeat)


def pipeline() -> None:
    code = ("import time; from apktheory.cli import load_rule; from apktheory.pipeline import analyze;"
            "from apktheory.exactlin.kernels import BACKEND; t = time.monotonic();"
            "analyze(load_rule('builtin:chair')); print(BACKEND, round(time.monotonic() - t, 2))")
    for pure in ("0", "1"):
        env = dict(os.environ, APKT_PURE_PYTHON=pure)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        backend, secs = out.stdout.split()
        print(f"chair pipeline, {backend} kernels: {secs} s")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[40, 120, 240])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--pipeline", action="store_true")
    args = ap.parse_args()
    print(f"{'kernel':<22}{'n':>9}{'python ms':>12}{'cython ms':>12}{'speedup':>9}", flush=True)
    synthetic(args.sizes, args.repeat)
    chair(args.repeat)
    if args.pipeline:
        pipeline()


if __name__ == "__main__":
    main()
