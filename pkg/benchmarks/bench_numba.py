"""Time the numba backend against the pure-numpy fallback.

Covers the two hot paths that dispatch through tacnode_lab._accel: the
simulator event loop and the separable double-contour sum.  The jitted
functions are warmed up before timing so compilation is excluded.
"""

from __future__ import annotations

import argparse
import time

from tacnode_lab import _accel
from tacnode_lab.finite_kernel import GridPoint, ModelParams, kernel_finite
from tacnode_lab.simulate import SimConfig, run_trials


def timed(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_simulator(levels, trials, repeats):
    sim = SimConfig(levels=levels, eps_rate=0.3, t_end=1.0, trials=trials,
                    seed=1234)

    def drain():
        for _ in run_trials(sim):
            pass

    return timed(drain, repeats)


def bench_quadrature(repeats):
    params = ModelParams(eps_rate=0.3, t=0.5)
    pairs = [(GridPoint(m, x2), GridPoint(m, -x2))
             for m in (3, 5, 7) for x2 in (0, 2)
             if (x2 + m + 1) % 2 == 0]

    def sweep():
        for a, b in pairs:
            kernel_finite(a, b, params, tol=1e-11)

    return timed(sweep, repeats)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", type=int, default=8)
    ap.add_argument("--trials", type=int, default=2000)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    if not _accel.HAS_NUMBA:
        print("numba unavailable or disabled; benchmarking fallback only")

    results = {}
    for backend in ("numba", "numpy"):
        if backend == "numba" and not _accel.HAS_NUMBA:
            continue
        _accel.HAS_NUMBA = backend == "numba"
        # warm up jit compilation and caches outside the timed region
        bench_simulator(3, 50, 1)
        bench_quadrature(1)
        results[backend] = (
            bench_simulator(args.levels, args.trials, args.repeats),
            bench_quadrature(args.repeats),
        )

    print(f"{'path':<28}" + "".join(f"{b:>12}" for b in results))
    for i, name in enumerate(("simulator event loop", "contour double sum")):
        row = f"{name:<28}"
        for backend in results:
            row += f"{results[backend][i]:>11.3f}s"
        print(row)
    if len(results) == 2:
        for i, name in enumerate(("simulator", "quadrature")):
            ratio = results["numpy"][i] / results["numba"][i]
            print(f"{name} speedup: {ratio:.1f}x")


if __name__ == "__main__":
    main()
