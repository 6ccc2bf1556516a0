"""Compare the compiled core with the pure-Python fallback.

    python benchmarks/bench_backends.py [--sizes 500,1000,2000] [--reps 3]

Prints a CSV of (n, algorithm, backend, seconds) and the speed-up per row.
"""
import argparse
import sys

from curverecon import _backend
from curverecon.bench import run_bench


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=lambda s: [int(v) for v in s.split(",")], default=[500, 1000, 2000])
    p.add_argument("--reps", type=int, default=3)
    a = p.parse_args(argv)
    if _backend.core is None:
        print("compiled core not built; only the python backend is available", file=sys.stderr)
        return 1
    algos = ["nn-compatible", "compatible-crust"]
    fast = run_bench(a.sizes, algos, reps=a.reps, backend="cython")
    slow = run_bench(a.sizes, algos, reps=a.reps, backend="python")
    print("n,algorithm,backend,seconds,speedup")
    for f, s in zip(fast, slow):
        print(f"{f['n']},{f['algorithm']},python,{s['seconds']:.6f},1.0")
        print(f"{f['n']},{f['algorithm']},cython,{f['seconds']:.6f},{s['seconds'] / f['seconds']:.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
