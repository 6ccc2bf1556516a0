"""Wall-clock scaling harness for the reconstruction algorithms."""
from __future__ import annotations

import math
import statistics
import time

import numpy as np

from .recon import ALGORITHMS
from .samples import SampleSet


def circle_sample(n: int, seed: int = 0, jitter: float = 0.25) -> SampleSet:
    """n points on the unit circle, angles perturbed by up to ``jitter`` of
    the spacing (dense, so a valid sample for any reasonable eps)."""
    rng = np.random.default_rng(seed)
    h = 2.0 * math.pi / n
    th = np.arange(n) * h + rng.uniform(-jitter, jitter, n) * h
    return SampleSet(np.stack([np.cos(th), np.sin(th)], axis=1))


def time_call(fn, reps: int = 5) -> float:
    """Median wall time of ``reps`` calls after one warm-up call."""
    fn()
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def run_bench(sizes, algorithms=("nn-compatible", "compatible-crust"), reps: int = 5, seed: int = 0,
              backend: str | None = "auto") -> list[dict]:
    rows = []
    for algo in algorithms:
        fn = ALGORITHMS[algo]
        for n in sizes:
            s = circle_sample(int(n), seed)
            t = time_call(lambda: fn(s, backend=backend), reps)
            rows.append({"n": int(n), "algorithm": algo, "seconds": t})
    return rows


def growth(rows, algorithm: str, n0: int, n1: int) -> float:
    t = {r["n"]: r["seconds"] for r in rows if r["algorithm"] == algorithm}
    return t[n1] / t[n0]


def format_csv(rows) -> str:
    return "n,algorithm,seconds\n" + "".join(f"{r['n']},{r['algorithm']},{r['seconds']!r}\n" for r in rows)
