"""Timing comparison of the compiled and pure-Python factorization backends.

Two views: raw factor/logdet/solve micro-kernels on random SPD matrices, and
the end-to-end mutual-information pipeline they feed. Run from the repo root:

    python3 benchmarks/bench_kernels.py [--reps 400] [--sizes 4,8,16,32]
"""
import argparse
import math
import time

import numpy as np

from lossymem.channel_model import ChannelParams
from lossymem.information import _baseline, mutual_information
from lossymem.matrix_core import available_backends, set_backend, spd_factor


def random_spd(rng, dim):
    g = rng.standard_normal((dim, dim))
    return g.T @ g + dim * np.eye(dim)


def time_kernels(mats, reps):
    rhs = {m.shape[0]: np.eye(m.shape[0]) for m in mats}
    best = math.inf
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(reps):
            for m in mats:
                f = spd_factor(m)
                f.logdet()
                f.solve(rhs[m.shape[0]])
        best = min(best, (time.perf_counter() - t0) / (reps * len(mats)))
    return best


def time_pipeline(reps):
    params = [ChannelParams(n=2, eta=0.1 * k, s=s, n_eff=2.0)
              for k in range(2, 9) for s in (0.0, 2.0)]
    best = math.inf
    for _ in range(3):
        _baseline.cache_clear()
        t0 = time.perf_counter()
        for _ in range(reps):
            for p in params:
                mutual_information(p, 0.4)
        best = min(best, (time.perf_counter() - t0) / (reps * len(params)))
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--reps", type=int, default=400, help="micro-kernel repetitions")
    parser.add_argument("--pipeline-reps", type=int, default=20)
    parser.add_argument("--sizes", default="4,8,16,32",
                        help="comma list of matrix dimensions")
    args = parser.parse_args()
    sizes = [int(v) for v in args.sizes.split(",")]

    backends = available_backends()
    if len(backends) < 2:
        print("note: only the %s backend is installed" % backends[0])

    rng = np.random.default_rng(0)
    suites = {dim: [random_spd(rng, dim) for _ in range(8)] for dim in sizes}

    micro = {}
    pipe = {}
    for name in backends:
        set_backend(name)
        micro[name] = {dim: time_kernels(suites[dim], args.reps) for dim in sizes}
        pipe[name] = time_pipeline(args.pipeline_reps)
    set_backend(backends[0])

    print("factor + logdet + solve (microseconds per matrix)")
    header = "  dim " + "".join("%12s" % b for b in backends)
    if len(backends) == 2:
        header += "%10s" % "speedup"
    print(header)
    for dim in sizes:
        row = "  %3d " % dim + "".join("%12.2f" % (micro[b][dim] * 1e6) for b in backends)
        if len(backends) == 2:
            row += "%9.2fx" % (micro[backends[1]][dim] / micro[backends[0]][dim])
        print(row)

    print("full mutual-information evaluation (n=2, microseconds per point)")
    row = "      " + "".join("%12.2f" % (pipe[b] * 1e6) for b in backends)
    if len(backends) == 2:
        row += "%9.2fx" % (pipe[backends[1]] / pipe[backends[0]])
    print(row)


if __name__ == "__main__":
    main()
