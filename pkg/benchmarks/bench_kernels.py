"""Compare the compiled and pure-Python kernels on identical workloads.

    python benchmarks/bench_kernels.py [--sizes 8,12,16] [--repeat 3] [--seed 0]

Each workload is run on both backends; results must agree exactly before a
timing is reported.  Timings are best-of-``repeat`` wall clock.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from dupcut.cutgraph import i_table
from dupcut.kernels import HAVE_COMPILED, HyperedgeTable
from dupcut.simgen import random_forest_uniform
from dupcut.solver import _min_prefix_size, _prefix_problem


def _best(fn, repeat):
    best, out = None, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, out


def _tables(forest):
    base, _ = i_table(forest)
    groups = []
    masks, ptr = base._masks, base._ptr
    for i in range(len(ptr) - 1):
        groups.append([int(m) for m in masks[int(ptr[i]):int(ptr[i + 1])]])
    return {b: HyperedgeTable(base.n, groups, b) for b in ("cython", "python")}


def bench_enumeration(k, seed, repeat):
    forest = random_forest_uniform(k, 8, 8, seed)
    tables = _tables(forest)
    out = {}
    for name, table in tables.items():
        out[name] = _best(lambda: table.minimum(True), repeat)
    assert out["cython"][1] == out["python"][1], "backends disagree on minimum"
    return forest.k, out


def bench_audit(k, seed, repeat, pairs=20000):
    forest = random_forest_uniform(k, 8, 8, seed)
    tables = _tables(forest)
    rng = np.random.default_rng(seed)
    full = (1 << tables["python"].n) - 1
    a = [int(x) & full for x in rng.integers(0, 1 << 62, size=pairs)]
    b = [int(x) & full for x in rng.integers(0, 1 << 62, size=pairs)]
    out = {name: _best(lambda: t.pair_slack(a, b), repeat) for name, t in tables.items()}
    assert out["cython"][1] == out["python"][1], "backends disagree on pair slack"
    return forest.k, out


def bench_prefix(k, seed, repeat):
    forest = random_forest_uniform(k, 6, 8, seed)
    problem = _prefix_problem(forest)
    out = {name: _best(lambda: _min_prefix_size(problem, name), repeat) for name in ("cython", "python")}
    assert out["cython"][1][0] == out["python"][1][0], "backends disagree on prefix size"
    return forest.k, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="8,12,16")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not HAVE_COMPILED:
        print("compiled kernels are not built; nothing to compare", file=sys.stderr)
        return 1
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"{'workload':<12}{'k':>4}{'cython ms':>12}{'python ms':>12}{'speedup':>10}")
    for label, fn in (("enumerate", bench_enumeration), ("audit", bench_audit), ("prefix", bench_prefix)):
        for k in sizes:
            if label == "prefix" and k > 10:
                continue  # pure-Python prefix search grows too slowly to wait for
            n, out = fn(k, args.seed, args.repeat)
            c, p = out["cython"][0] * 1000, out["python"][0] * 1000
            print(f"{label:<12}{n:>4}{c:>12.2f}{p:>12.2f}{p / max(c, 1e-9):>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
