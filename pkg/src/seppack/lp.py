"""Small dense linear programming.

Everything this package asks of an LP solver is tiny (tens of variables and
rows), so the solver is a plain two-phase tableau simplex with Bland's rule.
It runs in exact rational arithmetic (fractions.Fraction) whenever every input
entry is an int or Fraction, and in float64 otherwise. Correctness beats speed
at these sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

FLOAT_TOL = 1e-11


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Optional[np.ndarray]
    value: Optional[float]

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


def _is_exact_scalar(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def _all_exact(*arrays) -> bool:
    for arr in arrays:
        if arr is None:
            continue
        for v in np.asarray(arr, dtype=object).ravel():
            if v is not None and not _is_exact_scalar(v):
                return False
    return True


def solve_lp(
    c: Sequence,
    *,
    A_ub=None,
    b_ub=None,
    A_eq=None,
    b_eq=None,
    maximize: bool = False,
    exact: Optional[bool] = None,
) -> LPResult:
    """Solve max/min c.x subject to A_ub x <= b_ub and A_eq x = b_eq, x free.

    Free variables are split internally. `exact=None` auto-detects: rational
    inputs get exact pivoting, anything else the float path.
    """
    if exact is None:
        exact = _all_exact(c, A_ub, b_ub, A_eq, b_eq)

    if exact:
        conv = lambda v: Fraction(v)  # noqa: E731
        zero, one = Fraction(0), Fraction(1)
        tol = Fraction(0)
        dtype = object
    else:
        conv = float
        zero, one = 0.0, 1.0
        tol = FLOAT_TOL
        dtype = np.float64

    c = np.array([conv(v) for v in c], dtype=dtype)
    n = len(c)

    rows = []
    rhs = []
    senses = []  # "<=" or "=="
    if A_ub is not None:
        for row, b in zip(A_ub, b_ub):
            rows.append([conv(v) for v in row])
            rhs.append(conv(b))
            senses.append("<=")
    if A_eq is not None:
        for row, b in zip(A_eq, b_eq):
            rows.append([conv(v) for v in row])
            rhs.append(conv(b))
            senses.append("==")
    m = len(rows)

    # Standard form: x = u - v (both >= 0), slack for every "<=" row.
    n_slack = sum(1 for s in senses if s == "<=")
    width = 2 * n + n_slack
    A = np.zeros((m, width), dtype=dtype)
    b = np.zeros(m, dtype=dtype)
    if exact:
        A[:, :] = zero
        b[:] = zero
    slack_at = 0
    for i in range(m):
        for j in range(n):
            A[i, j] = rows[i][j]
            A[i, n + j] = -rows[i][j]
        if senses[i] == "<=":
            A[i, 2 * n + slack_at] = one
            slack_at += 1
        b[i] = rhs[i]
    obj = np.zeros(width, dtype=dtype)
    if exact:
        obj[:] = zero
    sign = -one if maximize else one  # tableau minimizes
    for j in range(n):
        obj[j] = sign * c[j]
        obj[n + j] = -sign * c[j]

    status, y = _two_phase(A, b, obj, tol, zero, one, exact)
    if status != "optimal":
        return LPResult(status, None, None)
    x = np.array([y[j] - y[n + j] for j in range(n)], dtype=dtype)
    value = sum(ci * xi for ci, xi in zip(c, x))
    return LPResult("optimal", x, value)


def _two_phase(A, b, obj, tol, zero, one, exact):
    m, width = A.shape
    # Flip rows so the right-hand side is nonnegative, then give every row an
    # artificial variable; phase 1 minimizes their sum.
    for i in range(m):
        if b[i] < zero:
            A[i, :] = [-v for v in A[i, :]] if exact else -A[i, :]
            b[i] = -b[i]

    total = width + m
    T = np.zeros((m, total + 1), dtype=A.dtype)
    if exact:
        T[:, :] = zero
    T[:, :width] = A
    for i in range(m):
        T[i, width + i] = one
        T[i, total] = b[i]
    basis = [width + i for i in range(m)]

    # Phase-1 cost row: reduced costs of min sum(artificials).
    cost1 = np.zeros(total + 1, dtype=A.dtype)
    if exact:
        cost1[:] = zero
    for i in range(m):
        cost1 -= T[i, :]
    for i in range(m):
        cost1[width + i] = zero

    status = _iterate(T, basis, cost1, tol, zero, n_cols=total)
    if status == "unbounded":  # cannot happen in phase 1
        return "infeasible", None
    if -cost1[total] > (tol * (1 + abs(sum(b)))) if not exact else -cost1[total] > zero:
        return "infeasible", None

    # Drive leftover artificials out of the basis (degenerate at zero level).
    drop_rows = []
    for i in range(m):
        if basis[i] >= width:
            pivot_col = None
            for j in range(width):
                if (T[i, j] > tol) or (T[i, j] < -tol):
                    pivot_col = j
                    break
            if pivot_col is None:
                drop_rows.append(i)
            else:
                _pivot(T, basis, [cost1], i, pivot_col)
    if drop_rows:
        keep = [i for i in range(m) if i not in drop_rows]
        T = T[keep, :]
        basis = [basis[i] for i in keep]
        m = len(keep)

    # Phase 2: original objective, artificial columns frozen out.
    cost2 = np.zeros(total + 1, dtype=A.dtype)
    if exact:
        cost2[:] = zero
    cost2[:width] = obj
    for i in range(m):
        if cost2[basis[i]] != zero:
            cost2 = cost2 - cost2[basis[i]] * T[i, :]
    status = _iterate(T, basis, cost2, tol, zero, n_cols=width)
    if status == "unbounded":
        return "unbounded", None

    y = np.zeros(total, dtype=A.dtype)
    if exact:
        y[:] = zero
    for i in range(m):
        y[basis[i]] = T[i, total]
    return "optimal", y


def _iterate(T, basis, cost, tol, zero, n_cols):
    m = T.shape[0]
    rhs_col = T.shape[1] - 1
    while True:
        enter = -1
        for j in range(n_cols):  # Bland: lowest eligible index
            if cost[j] < -tol:
                enter = j
                break
        if enter < 0:
            return "optimal"
        leave = -1
        best = None
        for i in range(m):
            a = T[i, enter]
            if a > tol:
                ratio = T[i, rhs_col] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return "unbounded"
        _pivot(T, basis, [cost], leave, enter)


def _pivot(T, basis, cost_rows, i, j):
    piv = T[i, j]
    T[i, :] = T[i, :] / piv
    for r in range(T.shape[0]):
        if r != i and T[r, j] != 0:
            T[r, :] = T[r, :] - T[r, j] * T[i, :]
    for cost in cost_rows:
        if cost[j] != 0:
            cost -= cost[j] * T[i, :]
    basis[i] = j


# ---------------------------------------------------------------------------
# Geometry helpers built on the solver.
# ---------------------------------------------------------------------------


def hull_location(points, geom_tol: float = 0.0, exact: Optional[bool] = None):
    """Locate the origin relative to conv(points).

    Returns the optimum of max t s.t. sum(w_i p_i) = 0, sum(w_i) = 1, w_i >= t
    (None when the equality system is infeasible, i.e. the origin misses the
    affine hull). t >= 0 means the origin is in the hull; t > 0 means it is in
    the relative interior. `geom_tol` relaxes the vector equality to a box, to
    absorb floating error in the input points.
    """
    pts = list(points)
    n = len(pts)
    d = len(pts[0])
    # Variables: w_0..w_{n-1}, t.
    c = [0] * n + [1]
    A_eq = [[1] * n + [0]]
    b_eq = [1]
    A_ub = []
    b_ub = []
    for k in range(d):
        row = [pts[i][k] for i in range(n)] + [0]
        if geom_tol > 0:
            A_ub.append(row)
            b_ub.append(geom_tol)
            A_ub.append([-v for v in row])
            b_ub.append(geom_tol)
        else:
            A_eq.append(row)
            b_eq.append(0)
    for i in range(n):  # t - w_i <= 0
        row = [0] * (n + 1)
        row[i] = -1
        row[n] = 1
        A_ub.append(row)
        b_ub.append(0)
    res = solve_lp(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, maximize=True, exact=exact)
    if not res.optimal:
        return None
    return res.value


def origin_in_hull(points, margin: float = 1e-9) -> bool:
    """Is the origin in conv(points), with `margin` forgiveness?"""
    pts = np.asarray(points, dtype=float)
    scale = float(np.max(np.abs(pts))) if pts.size else 1.0
    t = hull_location(pts, geom_tol=margin * max(scale, 1.0), exact=False)
    return t is not None and t >= -margin


def origin_in_interior(points, margin: float = 1e-9) -> bool:
    """Is the origin in the interior of conv(points) (full-dimensional)?"""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < pts.shape[1] + 1:
        return False
    if np.linalg.matrix_rank(pts, tol=1e-12) < pts.shape[1]:
        return False
    scale = float(np.max(np.abs(pts)))
    t = hull_location(pts, geom_tol=margin * max(scale, 1.0), exact=False)
    return t is not None and t >= margin


def max_over_polyhedron(direction, rows, offsets, exact: Optional[bool] = None) -> LPResult:
    """max direction.x subject to rows_i . x <= offsets_i."""
    return solve_lp(direction, A_ub=rows, b_ub=offsets, maximize=True, exact=exact)


def face_certificate(points, k: int, li: int, margin: float = 1e-9):
    """Functional vanishing on points[k], points[li] and <= -s elsewhere.

    Searches g with |g_j| <= 1, g(points[k]) = g(points[li]) = 0 and
    g(points[m]) <= -s for every other index, maximizing s. Returns the
    optimal s (0.0 when infeasible), so the caller compares against `margin`.
    """
    pts = np.asarray(points, dtype=float)
    n, d = pts.shape
    # Variables: g_0..g_{d-1}, s.
    c = [0] * d + [1]
    A_eq = [list(pts[k]) + [0], list(pts[li]) + [0]]
    b_eq = [0, 0]
    A_ub = []
    b_ub = []
    for m_idx in range(n):
        if m_idx in (k, li):
            continue
        A_ub.append(list(pts[m_idx]) + [1])
        b_ub.append(0)
    for j in range(d):  # box |g_j| <= 1 keeps the LP bounded
        row = [0] * (d + 1)
        row[j] = 1
        A_ub.append(list(row))
        b_ub.append(1)
        row2 = [0] * (d + 1)
        row2[j] = -1
        A_ub.append(row2)
        b_ub.append(1)
    row = [0] * (d + 1)
    row[d] = 1
    A_ub.append(row)
    b_ub.append(2.0 * float(np.max(np.abs(pts))) + 1.0)
    res = solve_lp(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, maximize=True, exact=False)
    if not res.optimal:
        return 0.0, None
    return float(res.value), np.asarray(res.x[:d], dtype=float)
