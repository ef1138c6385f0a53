"""Benchmark: compiled kernel backend vs the pure numpy reference.

Run from the repository root after building the extension in place:

    python setup.py build_ext --inplace
    python benchmarks/bench_kernels.py
"""

import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from seppack import bodies  # noqa: E402
from seppack.kernels import get_backend  # noqa: E402


def timeit(fn, repeats=2):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ref = get_backend("reference")
    try:
        com = get_backend("compiled")
    except Exception:
        print("compiled backend not built; run `python setup.py build_ext --inplace`")
        return 1

    rng = np.random.default_rng(0)
    spiky = bodies.smoothed_polytope(
        np.vstack([np.eye(3), -np.eye(3), [[0.9] * 3], [[-0.9] * 3]]), 0.01
    )
    ball = bodies.ball(2)
    octa = bodies.polytope_v(np.vstack([np.eye(3), -np.eye(3)]))
    grid_centers = np.array([[2.0 * i, 2.0 * j] for i in range(10) for j in range(10)])

    X3 = rng.standard_normal((100_000, 3)) * 1.4
    X2 = rng.uniform(-2.0, 20.0, size=(200_000, 2))
    Xg = rng.standard_normal((5_000, 3)) * 1.4

    cases = [
        ("member: spiky body, 100k pts", lambda b: b.member_many(spiky.kernel_spec, X3, 1.0)),
        ("member: octahedron, 100k pts", lambda b: b.member_many(octa.kernel_spec, X3, 1.0)),
        ("gauge: spiky body (bisection), 5k pts", lambda b: b.gauge_many(spiky.kernel_spec, Xg)),
        ("gauge: octahedron, 100k pts", lambda b: b.gauge_many(octa.kernel_spec, X3)),
        (
            "union member: 100-disk grid, 200k pts",
            lambda b: b.union_member_many(ball.kernel_spec, grid_centers, 2.0, X2),
        ),
        (
            "shell member: spiky body, 100k pts",
            lambda b: b.shell_member_many(spiky.kernel_spec, X3, 0.05),
        ),
    ]

    print(f"{'case':45s} {'reference':>12s} {'compiled':>12s} {'speedup':>9s}")
    for label, fn in cases:
        t_ref, out_ref = timeit(lambda: fn(ref))
        t_com, out_com = timeit(lambda: fn(com))
        agree = np.allclose(np.asarray(out_ref, float), np.asarray(out_com, float), atol=1e-10)
        mark = "" if agree else "  (MISMATCH!)"
        print(f"{label:45s} {t_ref * 1e3:10.1f}ms {t_com * 1e3:10.1f}ms {t_ref / t_com:8.1f}x{mark}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
