"""Shared test oracles, independent of the library's own code paths."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog


def union_interval_length(intervals) -> float:
    """Total length of a union of 1-D intervals."""
    ivs = sorted((lo, hi) for lo, hi in intervals if hi > lo)
    total = 0.0
    cur_lo, cur_hi = None, None
    for lo, hi in ivs:
        if cur_hi is None or lo > cur_hi:
            if cur_hi is not None:
                total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        else:
            cur_hi = max(cur_hi, hi)
    if cur_hi is not None:
        total += cur_hi - cur_lo
    return total


def disk_union_area(centers, radius, n_slices: int = 200_001) -> float:
    """Area of a union of equal disks by Simpson integration of slice lengths.

    Independent quadrature oracle (no Monte Carlo, no library code); accuracy
    is limited by the boundary kinks, around 1e-6 at the default resolution.
    """
    centers = np.asarray(centers, dtype=float)
    x_lo = centers[:, 0].min() - radius
    x_hi = centers[:, 0].max() + radius
    xs = np.linspace(x_lo, x_hi, n_slices)
    lengths = np.empty_like(xs)
    for k, x in enumerate(xs):
        ivs = []
        for cx, cy in centers:
            h2 = radius * radius - (x - cx) ** 2
            if h2 > 0.0:
                h = np.sqrt(h2)
                ivs.append((cy - h, cy + h))
        lengths[k] = union_interval_length(ivs)
    # composite Simpson
    h = (x_hi - x_lo) / (n_slices - 1)
    return float(h / 3.0 * (lengths[0] + lengths[-1]
                            + 4.0 * lengths[1:-1:2].sum() + 2.0 * lengths[2:-2:2].sum()))


def origin_in_interior_oracle(points, margin: float = 1e-9) -> bool:
    """Independent interiority test via scipy's LP (different solver)."""
    pts = np.asarray(points, dtype=float)
    n, d = pts.shape
    if np.linalg.matrix_rank(pts, tol=1e-12) < d:
        return False
    # max t st sum w_i p_i = 0, sum w_i = 1, w_i >= t  -> vars (w, t)
    c = np.zeros(n + 1)
    c[-1] = -1.0
    A_eq = np.zeros((d + 1, n + 1))
    A_eq[:d, :n] = pts.T
    A_eq[d, :n] = 1.0
    b_eq = np.zeros(d + 1)
    b_eq[d] = 1.0
    A_ub = np.zeros((n, n + 1))
    A_ub[:, :n] = -np.eye(n)
    A_ub[:, -1] = 1.0
    res = linprog(
        c, A_ub=A_ub, b_ub=np.zeros(n), A_eq=A_eq, b_eq=b_eq,
        bounds=[(None, None)] * (n + 1), method="highs",
    )
    return bool(res.status == 0 and -res.fun >= margin)


def min_interior_subset_size(points) -> int | None:
    """Brute-force minimum subset size with the origin interior (oracle)."""
    from itertools import combinations

    pts = np.asarray(points, dtype=float)
    n = pts.shape[0]
    if not origin_in_interior_oracle(pts):
        return None
    for size in range(1, n + 1):
        for idx in combinations(range(n), size):
            if origin_in_interior_oracle(pts[list(idx)]):
                return size
    return n


def random_spd(rng, d: int, lo: float = 0.5, hi: float = 2.0) -> np.ndarray:
    q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    return q @ np.diag(rng.uniform(lo, hi, size=d)) @ q.T


def quad_orthogonal_basis(rng, quad) -> np.ndarray:
    """Random basis orthogonal under <u, quad v>, scaled to the unit level set."""
    d = quad.shape[0]
    while True:
        M = rng.standard_normal((d, d))
        if abs(np.linalg.det(M)) > 1e-3:
            break
    basis = []
    for row in M:
        v = row.copy()
        for b in basis:
            v -= (v @ quad @ b) / (b @ quad @ b) * b
        basis.append(v)
    basis = np.array(basis)
    scale = np.sqrt(np.einsum("id,de,ie->i", basis, quad, basis))
    return basis / scale[:, None]
