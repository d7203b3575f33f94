#!/usr/bin/env python3
"""Benchmark the compiled geometry kernel against the pure-NumPy fallback.

Two workloads:

1. synthetic facet-adjacency calls at sizes seen during real cuts;
2. full elicitation runs, re-executed with the kernel backend swapped.

Run after `pip install -e .`:

    python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import argparse
import subprocess
import sys
import time

import numpy as np

from matroid_elicit import _facetadj_py as pure

try:
    from matroid_elicit import _facetadj as compiled
except ImportError:
    compiled = None


def synthetic_case(rng: np.random.Generator, k: int, m: int, dim: int):
    normals = rng.integers(-9, 10, size=(m, dim)).astype(float)
    tight = np.zeros((k, m), dtype=bool)
    for i in range(k):
        size = int(rng.integers(dim - 1, dim + 4))
        tight[i, rng.choice(m, size=min(size, m), replace=False)] = True
    return tight, normals


def bench_adjacency(repeats: int = 3) -> None:
    rng = np.random.default_rng(0)
    print(f"{'k':>6} {'m':>4} {'dim':>4} {'compiled':>12} {'pure':>12} {'speedup':>9}")
    for k, m, dim in [(30, 12, 3), (100, 20, 5), (300, 30, 7), (800, 40, 7)]:
        tight, normals = synthetic_case(rng, k, m, dim)
        rows = {}
        for name, impl in (("compiled", compiled), ("pure", pure)):
            if impl is None:
                rows[name] = float("nan")
                continue
            best = min(
                _timed(lambda: impl.facet_adjacency_pairs(tight, normals, dim))
                for _ in range(repeats)
            )
            rows[name] = best
        speedup = rows["pure"] / rows["compiled"] if compiled else float("nan")
        print(
            f"{k:>6} {m:>4} {dim:>4} {rows['compiled']:>11.4f}s "
            f"{rows['pure']:>11.4f}s {speedup:>8.1f}x"
        )


def _timed(fn) -> float:
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


RUN_SNIPPET = """
import time
import numpy as np
from matroid_elicit import kernels
from matroid_elicit.instances import generate_instance
from matroid_elicit.elicitation import run
from matroid_elicit.regret import SimulatedOracle

start = time.perf_counter()
for seed in range({seeds}):
    instance, Y = generate_instance("{kind}", {n}, {p}, seed)
    oracle = SimulatedOracle.random(Y, np.random.default_rng([seed, 1]))
    run(instance, Y, oracle, tau=0.0, sense="min")
print(f"{{kernels.BACKEND}}: {{time.perf_counter() - start:.2f}}s")
"""


def bench_full_runs(kind: str = "scheduling", n: int = 30, p: int = 6,
                    seeds: int = 3) -> None:
    snippet = RUN_SNIPPET.format(kind=kind, n=n, p=p, seeds=seeds)
    print(f"\nfull elicitation runs ({kind}, n={n}, p={p}, {seeds} seeds):",
          flush=True)
    for env_value in ("0", "1"):
        subprocess.run(
            [sys.executable, "-c", snippet],
            env={"MATROID_ELICIT_PURE": env_value, "PATH": "/usr/bin:/bin"},
            check=True,
        )


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--full", action="store_true",
                        help="also time full elicitation runs per backend")
    parser.add_argument("--n", type=int, default=30)
    parser.add_argument("--p", type=int, default=6)
    args = parser.parse_args()
    if compiled is None:
        print("compiled kernel unavailable; showing pure timings only")
    bench_adjacency()
    if args.full:
        bench_full_runs(n=args.n, p=args.p)
