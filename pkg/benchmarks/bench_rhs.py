"""Compare the compiled and pure-Python kernel backends.

Times the aggregation and breakage right-hand sides on refined power meshes
and the discrete (DPBE) right-hand side, checks that both backends agree,
and prints one row per case::

    python3 benchmarks/bench_rhs.py [--repeat N] [--csv results.csv]
"""
from __future__ import annotations

import argparse
import csv
import sys
import timeit

import numpy as np

from pbedg import backend
from pbedg.assembly import precompute, residual
from pbedg.kernels import KernelSet, builtin_beta, builtin_breakage
from pbedg.mesh import Basis, build_power_mesh
from pbedg.reference import dpbe_rhs


def _dg_case(L: int, k: int, process: str):
    mesh = build_power_mesh(10.0, L, 3.0)
    basis = Basis(k)
    if process == "aggregation":
        kernels = KernelSet(beta=builtin_beta("brownian"))
    else:
        rate, daughter = builtin_breakage("uniform_linear")
        kernels = KernelSet(rate=rate, daughter=daughter)
    data = precompute(mesh, basis, kernels)
    c = np.random.default_rng(L).uniform(0.0, 1.0, (L, k + 1))
    return f"{process} L={L} k={k}", lambda: residual(data, c, 0.0)


def _dpbe_case(K: int):
    sizes = np.arange(1, K + 1) * (10.0 / K)
    beta = builtin_beta("brownian")(sizes[:, None], sizes[None, :])
    counts = np.exp(-sizes / 0.15)
    return f"dpbe K={K}", lambda: dpbe_rhs(beta, counts)


def time_case(fn, repeat: int) -> float:
    """Best-of-``repeat`` wall time of one call, in milliseconds."""
    n, _ = timeit.Timer(fn).autorange()
    return 1e3 * min(timeit.repeat(fn, number=n, repeat=repeat)) / n


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--csv", help="also write the table to this CSV file")
    args = ap.parse_args(argv)

    if "cython" not in backend.available():
        print("compiled extension not built; only the python backend is available",
              file=sys.stderr)
        return 1

    cases = [_dg_case(L, 2, p) for p in ("aggregation", "breakage") for L in (15, 30, 60)]
    cases += [_dg_case(15, 4, "aggregation"), _dpbe_case(1000), _dpbe_case(2000)]

    rows = []
    print(f"{'case':28s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s} {'max rel diff':>13s}")
    for label, fn in cases:
        results, times = {}, {}
        for which in ("python", "cython"):
            backend.use(which)
            results[which] = np.array(fn())
            times[which] = time_case(fn, args.repeat)
        scale = max(np.max(np.abs(results["python"])), 1e-300)
        diff = float(np.max(np.abs(results["python"] - results["cython"])) / scale)
        speed = times["python"] / times["cython"]
        rows.append([label, times["python"], times["cython"], speed, diff])
        print(f"{label:28s} {times['python']:10.3f} {times['cython']:10.3f} {speed:8.2f} {diff:13.2e}")
    backend.use("cython")

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["case", "python_ms", "cython_ms", "speedup", "max_rel_diff"])
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
