"""Backend benchmark: numba kernel vs pure-numpy fallback.

Times the raw order-4 polynomial multiply and the full generic per-point
pipeline (metric, connection, torsions, curvatures, Ricci, scalar) on both
backends.  Run as ``python -m jetfinsler.bench [--points N] [--kernel-reps N]``.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from . import _backend
from . import difftools as dt
from .connection_engine import NonlinearConnection, PointContext
from .jetspace import CubicForm, JetPoint, TemporalMetric


def _bench_kernel(reps: int) -> float:
    rng = np.random.default_rng(0)
    a = rng.standard_normal(dt.NCOEF[4])
    b = rng.standard_normal(dt.NCOEF[4])
    ta = dt.Taylor(a, 4)
    tb = dt.Taylor(b, 4)
    ta * tb  # warm (JIT compile on the numba path)
    start = time.perf_counter()
    for _ in range(reps):
        ta * tb
    return (time.perf_counter() - start) / reps


def _bench_pipeline(n_points: int) -> float:
    cubic = CubicForm.berwald_moor()
    tm = TemporalMetric("exp(2*t)")
    nlc = NonlinearConnection.apriori(tm)
    rng = np.random.default_rng(42)
    points = [
        JetPoint.of(rng.uniform(-1, 1), rng.uniform(-1, 1, 3), rng.uniform(0.2, 5, 3))
        for _ in range(n_points)
    ]
    ctx = PointContext(cubic, tm, nlc, points[0])
    ctx.curvatures()  # warm
    start = time.perf_counter()
    for p in points:
        ctx = PointContext(cubic, tm, nlc, p)
        ctx.cartan()
        ctx.torsions()
        ctx.curvatures()
        ctx.scalar_curvature()
    return (time.perf_counter() - start) / n_points


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="python -m jetfinsler.bench")
    parser.add_argument("--points", type=int, default=50)
    parser.add_argument("--kernel-reps", type=int, default=20000)
    args = parser.parse_args(argv)

    rows = []
    for backend in _backend.available_backends():
        _backend.use_backend(backend)
        kernel = _bench_kernel(args.kernel_reps)
        pipeline = _bench_pipeline(args.points)
        rows.append((backend, kernel, pipeline))

    print(f"{'backend':8s} {'order-4 mul':>14s} {'point pipeline':>16s}")
    for backend, kernel, pipeline in rows:
        print(f"{backend:8s} {kernel * 1e6:>11.2f} us {pipeline * 1e3:>13.2f} ms")
    timings = dict((b, (k, p)) for b, k, p in rows)
    if {"numba", "numpy"} <= set(timings):
        print(
            f"numba speedup: kernel x{timings['numpy'][0] / timings['numba'][0]:.2f}, "
            f"pipeline x{timings['numpy'][1] / timings['numba'][1]:.2f}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
