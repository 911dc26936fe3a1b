"""Compare the compiled and pure-Python kernel backends.

Usage::

    python3 benchmarks/bench_kernels.py [--points 64] [--repeat 5]

Times the Hermite-function recurrence, the anchor penalty scan and a full
unanchored reconstruction, and checks both backends return identical output.
"""
import argparse
import time

import numpy as np

from photonmix import kernels, profiling
from photonmix.modes import TransverseMode, eval_mode
from photonmix.profiling import synthesize_array
from photonmix.quantum import LOState


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def setup(points):
    xs = np.linspace(-4.0, 4.0, points)
    pts = np.column_stack([xs, np.zeros_like(xs)])
    u_lo, u_ph = TransverseMode(), TransverseMode(1, 0)
    ref = (1.2, 0.0)
    meas = synthesize_array(LOState.coherent(2.0), u_lo, u_ph, ref, pts)
    a = eval_mode(u_lo, pts[:, 0], pts[:, 1])
    b = eval_mode(u_lo, *ref)
    rho = np.sqrt(meas.values / meas.n_mean)
    geo = profiling.walk_geometry(pts, ref)
    return meas, u_lo, a, b, rho, geo


def run_cases(backend, data, repeat):
    meas, u_lo, a, b, rho, geo = data
    xi = np.linspace(-8.0, 8.0, 200_000)
    grid = np.linspace(0.0, 1.0, profiling.ANCHOR_GRID)
    original = (kernels.branch_walk, kernels.penalty_scan)
    cases = {
        "hermite_function(n=8, 2e5 pts)": lambda: backend.hermite_function(8, xi),
        f"penalty_scan({len(grid)} anchors)": lambda: backend.penalty_scan(a, rho, b, grid, *geo),
    }
    results = {name: best_of(fn, repeat) for name, fn in cases.items()}
    # reconstruct looks the kernels up through photonmix.kernels; swap them in
    kernels.branch_walk, kernels.penalty_scan = backend.branch_walk, backend.penalty_scan
    try:
        results["reconstruct (unanchored)"] = best_of(lambda: profiling.reconstruct(meas, u_lo).amplitudes, repeat)
    finally:
        kernels.branch_walk, kernels.penalty_scan = original
    return results


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--points", type=int, default=64, help="array points on the line")
    parser.add_argument("--repeat", type=int, default=5, help="timing repetitions (best is kept)")
    args = parser.parse_args(argv)

    data = setup(args.points)
    found = kernels.backends()
    timings = {name: run_cases(mod, data, args.repeat) for name, mod in sorted(found.items())}
    names = list(next(iter(timings.values())))
    print(f"active backend: {kernels.BACKEND}; array points: {args.points}")
    header = f"{'case':34s}" + "".join(f"{b:>12s}" for b in timings) + ("     speedup" if len(timings) > 1 else "")
    print(header)
    for case in names:
        row = f"{case:34s}" + "".join(f"{timings[b][case][0] * 1e3:10.3f}ms" for b in timings)
        if "cython" in timings and "python" in timings:
            row += f"{timings['python'][case][0] / timings['cython'][case][0]:11.1f}x"
            same = np.array_equal(np.asarray(timings["python"][case][1]), np.asarray(timings["cython"][case][1]))
            row += "" if same else "  (outputs differ)"
        print(row)
    if "cython" not in found:
        print("compiled extension not built; only the Python backend was timed")


if __name__ == "__main__":
    main()
