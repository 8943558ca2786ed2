#!/usr/bin/env python3
"""Benchmark the compiled hot kernels against the NumPy fallback.

Times the full-state evolution with per-step moments (the dominant loop of
every long run) and the compensated Fourier propagation.  Run after an
editable install:

    python benchmarks/bench_kernels.py [--t 500 2000 4000] [--repeats 3]
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from oqwalk import _kernels_py
from oqwalk._dd import build_twisted_dd
from oqwalk.spectral import conjugation_superop
from oqwalk.walk import WalkParameters, build_kraus

try:
    from oqwalk import _core
except ImportError:
    _core = None


def best_of(fn, repeats):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--t", type=int, nargs="+", default=[500, 2000, 4000])
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    params = WalkParameters(theta0=math.pi / 6, theta1=math.pi / 3, p=0.75)
    kraus = build_kraus(params)
    rho0 = np.diag([params.p, 1.0 - params.p]).astype(complex)
    backends = [("numpy", _kernels_py)] + ([("compiled", _core)] if _core else [])
    if _core is None:
        print("compiled extension not available; timing the fallback only")

    print(f"{'kernel':<22}{'t':>6}" + "".join(f"{name:>12}" for name, _ in backends) + f"{'speedup':>10}")
    for t in args.t:
        times = [
            best_of(lambda m=mod: m.evolve_moments(kraus.P, kraus.Q, rho0, t), args.repeats)
            for _, mod in backends
        ]
        ratio = f"{times[0] / times[-1]:9.1f}x" if len(times) == 2 else ""
        print(f"{'evolve_moments':<22}{t:>6}" + "".join(f"{s:>11.3f}s" for s in times) + ratio)

    lp = conjugation_superop(kraus.P).real
    lq = conjugation_superop(kraus.Q).real
    ur, ui = build_twisted_dd(lp, lq, 1e-4)
    for t in args.t:
        times = [
            best_of(lambda m=mod: m.propagate_dd(ur, ui, params.p, t), args.repeats)
            for _, mod in backends
        ]
        ratio = f"{times[0] / times[-1]:9.1f}x" if len(times) == 2 else ""
        print(f"{'propagate_dd':<22}{t:>6}" + "".join(f"{s:>11.3f}s" for s in times) + ratio)


if __name__ == "__main__":
    main()
