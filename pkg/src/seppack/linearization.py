"""Vector/functional pair systems.

A configuration of touching translates 2x_i + K linearizes into pairs
(x_i, f_i): the boundary point x_i and the supporting functional f_i of the
hyperplane separating K from 2x_i + K. The conditions checked here:

    lin       f_i(x_i) = 1 and f_i(x_j) in [-1, 0] for i != j
    strict    f_i(x_j) = -1  iff  x_j = -x_i        (strict convexity)
    smooth    f_i(x_j) = -1  iff  f_j = -f_i        (smoothness)
    open-lin  f_i(x_i) = 1 and f_i(x_j) in (-1, 0]
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import lp
from .bodies import ConvexBody, slab_intersection
from .config import LP_MARGIN, MAX_SYSTEM_SIZE, NUMERIC_TOL, VECTOR_EQ_TOL
from .errors import InvalidArgumentError, PreconditionError, UnboundedBodyError

CONDITIONS = ("lin", "strict", "smooth", "open-lin")
_ALIASES = {
    "lin": "lin",
    "strictc": "strict",
    "strict": "strict",
    "smooth": "smooth",
    "openlin": "open-lin",
    "open-lin": "open-lin",
    "open_lin": "open-lin",
}


def normalize_condition_name(which: str) -> str:
    key = which.strip().lower()
    if key not in _ALIASES:
        raise InvalidArgumentError(f"unknown condition {which!r}; use one of {CONDITIONS}")
    return _ALIASES[key]


@dataclass(eq=False)
class PairSystem:
    dim: int
    xs: np.ndarray  # (n, d)
    fs: np.ndarray  # (n, d)

    def __post_init__(self):
        self.xs = _pair_array(self.xs, self.dim)
        self.fs = _pair_array(self.fs, self.dim)
        if self.xs.shape != self.fs.shape:
            raise InvalidArgumentError("vector and functional counts differ")
        for i in range(self.n):
            v = float(self.fs[i] @ self.xs[i])
            if abs(v - 1.0) > 1e-9:
                raise InvalidArgumentError(
                    f"pair {i} is not normalized: f_{i}(x_{i}) = {v!r}"
                )

    @property
    def n(self) -> int:
        return self.xs.shape[0]

    def values(self) -> np.ndarray:
        """Matrix V[i, j] = f_i(x_j)."""
        return self.fs @ self.xs.T

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "pairs": [
                {"x": list(map(float, x)), "f": list(map(float, f))}
                for x, f in zip(self.xs, self.fs)
            ],
        }


def _pair_array(data, dim: int) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.size == 0:
        return np.zeros((0, dim))
    return np.atleast_2d(arr).reshape(-1, dim)


@dataclass
class ConditionReport:
    condition: str
    holds: bool
    violations: List[Tuple[int, int, float, str]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "condition": self.condition,
            "holds": self.holds,
            "violations": [
                {"i": i, "j": j, "value": v, "clause": c} for i, j, v, c in self.violations
            ],
        }


def check_condition(system: PairSystem, which: str, tol: float = NUMERIC_TOL) -> ConditionReport:
    which = normalize_condition_name(which)
    V = system.values()
    n = system.n
    violations: List[Tuple[int, int, float, str]] = []

    for i in range(n):
        if abs(V[i, i] - 1.0) > tol:
            violations.append((i, i, float(V[i, i]), "normalization"))

    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            v = float(V[i, j])
            if which in ("lin", "open-lin"):
                if v < -1.0 - tol or v > tol:
                    violations.append((i, j, v, "range"))
                elif which == "open-lin" and v <= -1.0 + tol:
                    violations.append((i, j, v, "open-end"))
            elif which == "strict":
                antipodal = _vec_close(system.xs[j], -system.xs[i])
                if abs(v + 1.0) <= tol and not antipodal:
                    violations.append((i, j, v, "value-without-antipode"))
                if antipodal and abs(v + 1.0) > tol:
                    violations.append((i, j, v, "antipode-without-value"))
            elif which == "smooth":
                opposite = _vec_close(system.fs[j], -system.fs[i])
                if abs(v + 1.0) <= tol and not opposite:
                    violations.append((i, j, v, "value-without-opposite"))
                if opposite and abs(v + 1.0) > tol:
                    violations.append((i, j, v, "opposite-without-value"))
    return ConditionReport(condition=which, holds=not violations, violations=violations)


def _vec_close(a: np.ndarray, b: np.ndarray, tol: float = VECTOR_EQ_TOL) -> bool:
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return float(np.max(np.abs(a - b))) <= tol * scale


def from_configuration(body: ConvexBody, touching_vectors, boundary_tol: float = 1e-6) -> PairSystem:
    """Linearize touching vectors (gauge 2) into a pair system.

    Requires a smooth body: the supporting functional at each half-vector must
    be unique for the linearization to be canonical.
    """
    if not body.smooth:
        raise PreconditionError("from_configuration needs a smooth body")
    vecs = np.atleast_2d(np.asarray(touching_vectors, dtype=float))
    xs = []
    fs = []
    for v in vecs:
        g = body.gauge(v)
        if abs(g - 2.0) > 2.0 * boundary_tol:
            raise PreconditionError(f"touching vector has gauge {g:.9g}, expected 2")
        x = v / 2.0
        xs.append(x)
        fs.append(body.supporting_functional(x))
    return PairSystem(dim=body.dim, xs=np.array(xs), fs=np.array(fs))


def slab_body(system: PairSystem) -> ConvexBody:
    """Intersection of the slabs |f_i(x)| <= 1; every x_i lies on its boundary."""
    if np.linalg.matrix_rank(system.fs, tol=1e-12) < system.dim:
        raise UnboundedBodyError("functionals do not span the space")
    return slab_intersection(system.fs)


# ---------------------------------------------------------------------------
# Origin-in-hull machinery
# ---------------------------------------------------------------------------


def steinitz_core(points, margin: float = LP_MARGIN) -> Optional[dict]:
    """Minimum subset keeping the origin interior to its convex hull.

    Brute force by increasing subset size (lexicographic tie-break). Returns
    None when the origin is not interior to the hull of all points; otherwise
    {"subset", "size", "is_cross_polytope"}, the last flag marking the
    extremal structure of d direction-antipodal pairs spanning the space.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n, d = pts.shape
    if d > 5 or n > MAX_SYSTEM_SIZE:
        raise PreconditionError(f"brute-force scope is d <= 5, n <= {MAX_SYSTEM_SIZE}")
    if not lp.origin_in_interior(pts, margin=margin):
        return None
    for size in range(d + 1, n + 1):
        for idx in combinations(range(n), size):
            sub = pts[list(idx)]
            if (sub.max(axis=0) <= 0).any() or (sub.min(axis=0) >= 0).any():
                continue  # some open halfspace contains every point
            if np.linalg.matrix_rank(sub, tol=1e-12) < d:
                continue
            if lp.origin_in_interior(sub, margin=margin):
                return {
                    "subset": tuple(int(k) for k in idx),
                    "size": size,
                    "is_cross_polytope": bool(size == 2 * d and is_cross_polytope(sub)),
                }
    return {"subset": tuple(range(n)), "size": n, "is_cross_polytope": is_cross_polytope(pts)}


def is_cross_polytope(points, tol: float = VECTOR_EQ_TOL) -> bool:
    """d direction-antipodal pairs of points spanning the space."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n, d = pts.shape
    if n != 2 * d:
        return False
    norms = np.linalg.norm(pts, axis=1)
    if np.any(norms < 1e-12):
        return False
    dirs = pts / norms[:, None]
    unused = set(range(n))
    reps = []
    while unused:
        i = min(unused)
        unused.remove(i)
        mate = None
        for j in list(unused):
            if np.max(np.abs(dirs[j] + dirs[i])) <= tol:
                mate = j
                break
        if mate is None:
            return False
        unused.remove(mate)
        reps.append(pts[i])
    return np.linalg.matrix_rank(np.array(reps), tol=1e-12) == d


def check_interior_bound(system: PairSystem) -> dict:
    """When the origin is interior to conv{x_i}: n <= 2d must hold, and at
    n = 2d the points must form a cross-polytope."""
    pre = check_condition(system, "lin")
    if not pre.holds:
        raise PreconditionError("lin condition does not hold")
    if not lp.origin_in_interior(system.xs):
        return {"applicable": False, "n": system.n}
    n, d = system.n, system.dim
    ok = n <= 2 * d
    out = {
        "applicable": True,
        "n": n,
        "bound": 2 * d,
        "ok": ok,
        "theorem_violation": not ok,
    }
    if n == 2 * d:
        out["cross_polytope"] = is_cross_polytope(system.xs)
    return out


def check_face_property(system: PairSystem, margin: float = LP_MARGIN) -> dict:
    """Every triangle conv{o, x_k, x_l} must be a face of conv({x_i} u {o}).

    Certified pair by pair with an LP searching a functional vanishing on
    {o, x_k, x_l} and strictly negative on the other points.
    """
    if not check_condition(system, "open-lin").holds:
        raise PreconditionError("open-lin condition does not hold")
    if lp.origin_in_hull(system.xs):
        raise PreconditionError("origin must avoid the hull of the vectors")
    failing = []
    certificates: Dict[Tuple[int, int], list] = {}
    for k, li in combinations(range(system.n), 2):
        s_opt, g = lp.face_certificate(system.xs, k, li, margin=margin)
        if s_opt >= margin and g is not None:
            certificates[(k, li)] = [float(v) for v in g]
        else:
            failing.append((k, li))
    return {
        "pairs_checked": system.n * (system.n - 1) // 2,
        "failing_pairs": failing,
        "holds": not failing,
        "certificates": certificates,
    }


def reduce_dimension(system: PairSystem, return_report: bool = False):
    """Strip direction-antipodal vector pairs, descending one dimension each.

    Whenever x_l = -x_k, every other functional vanishes on x_k, so both pairs
    can be removed and the remaining system projected to the orthogonal
    complement of x_k. Projected points closer than 1e-7 are flagged, not
    merged.
    """
    if not check_condition(system, "lin").holds:
        raise PreconditionError("lin condition does not hold")
    xs, fs, d = system.xs.copy(), system.fs.copy(), system.dim
    removed = 0
    warnings: List[Tuple[int, int]] = []
    while True:
        pair = _find_antipodal(xs)
        if pair is None:
            break
        k, li = pair
        axis = xs[k] / np.linalg.norm(xs[k])
        keep = [m for m in range(xs.shape[0]) if m not in (k, li)]
        xs = xs[keep]
        fs = fs[keep]
        Q = _orthonormal_complement(axis)
        xs = xs @ Q
        fs = fs @ Q
        d -= 1
        removed += 1
        for a, b in combinations(range(xs.shape[0]), 2):
            if np.linalg.norm(xs[a] - xs[b]) < 1e-7:
                warnings.append((a, b))
    out = PairSystem(dim=d, xs=xs, fs=fs) if removed else system
    if return_report:
        return out, {"removed_pairs": removed, "coincident_projections": warnings}
    return out


def _find_antipodal(xs: np.ndarray, tol: float = VECTOR_EQ_TOL) -> Optional[Tuple[int, int]]:
    n = xs.shape[0]
    for k in range(n):
        for li in range(k + 1, n):
            if _vec_close(xs[li], -xs[k], tol):
                return k, li
    return None


def _orthonormal_complement(axis: np.ndarray) -> np.ndarray:
    """Columns form an orthonormal basis of axis-perp (shape (d, d-1))."""
    d = axis.size
    _, _, vt = np.linalg.svd(axis[None, :])
    return vt[1:].T.reshape(d, d - 1)


def one_sided_check(system: PairSystem, margin: float = LP_MARGIN) -> dict:
    return {
        "x_hull_avoids_o": not lp.origin_in_hull(system.xs, margin=margin),
        "f_hull_avoids_o": not lp.origin_in_hull(system.fs, margin=margin),
    }


def obtuse_projection(vectors, y, tol: float = NUMERIC_TOL) -> np.ndarray:
    """Project unit vectors with pairwise non-acute angles off a common
    positive direction y; the projections become pairwise strictly obtuse."""
    X = np.atleast_2d(np.asarray(vectors, dtype=float))
    y = np.asarray(y, dtype=float)
    bad = []
    if abs(np.linalg.norm(y) - 1.0) > 1e-9:
        raise PreconditionError("y must be a unit vector")
    for i, x in enumerate(X):
        if abs(np.linalg.norm(x) - 1.0) > 1e-9:
            bad.append((i, "not-unit"))
        if float(y @ x) <= 0:
            bad.append((i, "not-positive-side"))
    G = X @ X.T
    n = X.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            if G[i, j] > tol or G[i, j] <= -1.0 + tol:
                bad.append((i, j, "pairwise-angle"))
    if bad:
        raise PreconditionError(f"obtuse_projection preconditions violated: {bad}")
    proj = X - np.outer(X @ y, y)
    P = proj @ proj.T
    for i in range(n):
        for j in range(i + 1, n):
            assert P[i, j] < 0.0, "projected vectors must be pairwise obtuse"
    return proj


def hsep_recursion_bound(d: int, h_table) -> int:
    """max over l = 0..d of 2l + h_table[d - l]."""
    table = dict(h_table)
    for k in range(d + 1):
        if k not in table:
            raise InvalidArgumentError(f"h_table is missing entry {k}")
    return max(2 * li + int(table[d - li]) for li in range(d + 1))
