"""Benchmark the compiled kernels against the pure numpy fallback.

Run from the repository root after building the extension in place:

    python setup.py build_ext --inplace
    python benchmarks/bench_kernels.py [--repeat N]

The quadrature engine calls the kernels on short wavenumber blocks and the
sweep front end calls the aperture kernel point by point, so per-call
overhead (not asymptotic numpy throughput) is what matters; that is where
the compiled core pays off.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from greens_coulomb.kernels import _ref  # noqa: E402

try:
    from greens_coulomb.kernels import _fast
except ImportError:
    _fast = None


def timeit(fn, repeat: int) -> float:
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_hole(mod, pairs):
    def run():
        for row in pairs:
            mod.hole_greens(*row)
    return run


def bench_cavity(mod, blocks):
    def run():
        for k in blocks:
            mod.cavity_integrand(k, 0.3, 1.2, 0.9, 1.0, 0.7, 1.0)
    return run


def bench_screening(mod, blocks):
    def run():
        for k in blocks:
            mod.screening_integrand(k, 0.5, 2.0, 3.0)
    return run


def bench_chain(mod, cells, r, rp, alpha):
    def run():
        for pts, w in cells:
            mod.alpha_chain_sum(pts, w, r, rp, alpha)
    return run


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, default=2000, help="workload size")
    args = ap.parse_args()

    rng = np.random.default_rng(11)
    pairs = []
    while len(pairs) < args.n:
        rho, rhop = rng.uniform(0, 3, 2)
        z = rng.uniform(0.05, 3.0)
        zp = rng.uniform(-3.0, 3.0)
        if abs(zp) < 0.05:
            continue
        pairs.append((rho, rng.uniform(0, 6.28), z, rhop, rng.uniform(0, 6.28),
                      zp, rng.uniform(0.1, 2.0)))
    # 16-node Gauss blocks, the shape the quadrature engine produces
    blocks = [np.sort(rng.uniform(0.01, 30.0, 16)) for _ in range(args.n)]
    cells = [(rng.uniform(-1, 1, (125, 3)), rng.uniform(0, 1, 125))
             for _ in range(args.n // 10)]
    r = np.array([0.0, 0.1, 2.0])
    rp = np.array([0.2, -0.3, 1.5])
    alpha = np.diag([2.0, 1.5, 3.0])

    rows = [
        ("aperture Green fn (scalar)", bench_hole(_ref, pairs),
         None if _fast is None else bench_hole(_fast, pairs)),
        ("gap integrand (16-node blocks)", bench_cavity(_ref, blocks),
         None if _fast is None else bench_cavity(_fast, blocks)),
        ("screening integrand (16-node blocks)", bench_screening(_ref, blocks),
         None if _fast is None else bench_screening(_fast, blocks)),
        ("Born cell sums (125 nodes)", bench_chain(_ref, cells, r, rp, alpha),
         None if _fast is None else bench_chain(_fast, cells, r, rp, alpha)),
    ]

    print(f"{'kernel':38s} {'pure (s)':>10s} {'compiled (s)':>13s} {'speedup':>8s}")
    for name, ref_fn, fast_fn in rows:
        t_ref = timeit(ref_fn, args.repeat)
        if fast_fn is None:
            print(f"{name:38s} {t_ref:10.4f} {'n/a':>13s} {'n/a':>8s}")
        else:
            t_fast = timeit(fast_fn, args.repeat)
            print(f"{name:38s} {t_ref:10.4f} {t_fast:13.4f} {t_ref / t_fast:8.1f}")
    if _fast is None:
        print("\ncompiled backend not built; run: python setup.py build_ext --inplace")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
