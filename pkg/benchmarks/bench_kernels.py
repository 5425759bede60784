"""Time the exact integer kernels under both backends.

    python3 benchmarks/bench_kernels.py [--repeat N] [--seed S]

Kernel timings call each backend module directly on identical inputs. The
end-to-end row runs a balanced-set enumeration in a subprocess per backend,
since the backend is chosen once at import.
"""
from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import timeit

from balanced_covers import kernels
from balanced_covers.balanced import PointConfig, nonbalanced_complex
from balanced_covers.simplicial import boundary_matrices


def _matrix(rng, n, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]


def _lp(rng, d, m):
    """Balancedness system for ``m`` random points: ``sum x_i q_i = 0, sum x_i = 1``."""
    pts = [[rng.randint(-9, 9) for _ in range(d)] for _ in range(m)]
    a = [[p[t] for p in pts] for t in range(d)] + [[1] * m]
    return a, [0] * d + [1]


def _boundary(rng):
    pts = [(rng.randint(-6, 6), rng.randint(-6, 6), rng.randint(-6, 6)) for _ in range(9)]
    cfg = PointConfig.of(pts, (0, 0, 0))
    mats = boundary_matrices(nonbalanced_complex(cfg))
    return max(mats, key=lambda mat: len(mat) * len(mat[0]) if mat else 0)


def workloads(seed):
    rng = random.Random(seed)
    mats = [_matrix(rng, 10) for _ in range(20)]
    systems = [(_matrix(rng, 10), [rng.randint(-9, 9) for _ in range(10)]) for _ in range(20)]
    lps = [_lp(rng, 4, 14) for _ in range(40)]
    bd = _boundary(rng)
    return {
        "det 10x10 (x20)": lambda k: [k.det(a) for a in mats],
        "solve 10x10 (x20)": lambda k: [k.solve(a, b) for a, b in systems],
        "rank 10x10 (x20)": lambda k: [k.rank(a) for a in mats],
        "phase_one 5x14 (x40)": lambda k: [k.phase_one(a, b) for a, b in lps],
        f"smith {len(bd)}x{len(bd[0])}": lambda k: k.smith_diagonal(bd),
    }


END_TO_END = """
import random
from balanced_covers.balanced import PointConfig, enumerate_minimal_balanced
rng = random.Random({seed})
for _ in range(10):
    pts = [tuple(rng.randint(-5, 5) for _ in range(4)) for _ in range(12)]
    enumerate_minimal_balanced(PointConfig.of(pts, (0, 0, 0, 0)))
"""


def end_to_end(backend, seed, repeat):
    env = dict(os.environ, BALANCED_COVERS_KERNELS=backend)
    code = (
        "import timeit; print(min(timeit.repeat(%r, number=1, repeat=%d)))" % (END_TO_END.format(seed=seed), repeat)
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    try:
        compiled = kernels.backend("compiled")
    except ImportError:
        print("compiled extension not built; only the Python backend is available")
        compiled = None
    python = kernels.backend("python")
    print(f"{'workload':28s} {'python ms':>10s} {'compiled ms':>12s} {'speedup':>8s}")
    for name, fn in workloads(args.seed).items():
        tp = min(timeit.repeat(lambda: fn(python), number=1, repeat=args.repeat)) * 1e3
        if compiled is None:
            print(f"{name:28s} {tp:10.2f} {'-':>12s} {'-':>8s}")
            continue
        assert fn(python) == fn(compiled), name
        tc = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:28s} {tp:10.2f} {tc:12.2f} {tp / tc:7.1f}x")
    tp = end_to_end("python", args.seed, args.repeat) * 1e3
    if compiled is not None:
        tc = end_to_end("compiled", args.seed, args.repeat) * 1e3
        print(f"{'enumerate 12 pts in R^4 (x10)':28s} {tp:10.2f} {tc:12.2f} {tp / tc:7.1f}x")
    else:
        print(f"{'enumerate 12 pts in R^4 (x10)':28s} {tp:10.2f} {'-':>12s} {'-':>8s}")


if __name__ == "__main__":
    main()
