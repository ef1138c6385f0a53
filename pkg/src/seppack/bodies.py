"""Symmetric convex bodies as support/gauge/membership oracles.

A body is immutable after construction; every derived representation (facet
form, vertex form, kernel spec) is computed up front so instances can be
shared freely across threads. Supported kinds:

    ball                 unit Euclidean ball
    ellipsoid            {x : x.A.x <= 1}, A positive definite
    p-ball               {x : sum |x_k|^p <= 1}, 1 < p < inf
    polytope-H           intersection of halfspaces normal.x <= offset
    polytope-V           convex hull of vertices
    smoothed-polytope    polytope + eps * unit ball
    slab-intersection    {x : |f_i(x)| <= 1} for functionals f_i

Polytope kinds may be non-symmetric (the Minkowski symmetrization entry point
accepts them); gauge queries then require the origin in the interior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial import ConvexHull
from scipy.special import ellipe, gamma

from . import kernels, lp
from .config import BOUNDARY_TOL, MAX_DIM
from .errors import (
    InvalidArgumentError,
    NotSupportedError,
    PreconditionError,
    UnboundedBodyError,
)

KINDS = (
    "ball",
    "ellipsoid",
    "p-ball",
    "polytope-H",
    "polytope-V",
    "smoothed-polytope",
    "slab-intersection",
)


@dataclass(eq=False)
class ConvexBody:
    dim: int
    kind: str
    smooth: bool
    strictly_convex: bool
    osym: bool
    # kind-dependent payload
    quad: Optional[np.ndarray] = None  # ellipsoid matrix A
    quad_inv: Optional[np.ndarray] = None
    p: Optional[float] = None
    verts: Optional[np.ndarray] = None  # vertex form (polytope kinds)
    rows: Optional[np.ndarray] = None  # normalized facet form: max(rows.x) = gauge
    halfspaces: Optional[np.ndarray] = None  # raw (normal, offset) input, shape (m, d+1)
    functionals: Optional[np.ndarray] = None  # slab functionals
    epsilon: float = 0.0
    _spec: Optional[kernels.KernelSpec] = field(default=None, repr=False)

    # -- bounds ------------------------------------------------------------

    @property
    def inradius(self) -> float:
        return self._spec.r_in if self._spec is not None else 0.0

    @property
    def circumradius(self) -> float:
        if self._spec is not None:
            return self._spec.r_out
        return float(np.max(np.linalg.norm(self.verts, axis=1))) + self.epsilon

    @property
    def kernel_spec(self) -> kernels.KernelSpec:
        if self._spec is None:
            raise NotSupportedError(
                "gauge oracle unavailable: origin is not interior (symmetrize first)"
            )
        return self._spec

    # -- core oracles --------------------------------------------------------

    def support(self, u) -> float:
        """h(u) = max of <u, x> over the body."""
        u = _as_vector(u, self.dim)
        if not np.any(u):
            raise InvalidArgumentError("support direction must be nonzero")
        if self.kind == "ball":
            return float(np.linalg.norm(u))
        if self.kind == "ellipsoid":
            return float(math.sqrt(u @ self.quad_inv @ u))
        if self.kind == "p-ball":
            q = self.p / (self.p - 1.0)
            return float(np.power(np.abs(u), q).sum() ** (1.0 / q))
        if self.kind == "polytope-V":
            return float(np.max(self.verts @ u))
        if self.kind == "smoothed-polytope":
            return float(np.max(self.verts @ u) + self.epsilon * np.linalg.norm(u))
        # polytope-H and slab-intersection: small LP over the facet form
        res = lp.max_over_polyhedron(u, self.rows, np.ones(len(self.rows)), exact=False)
        if not res.optimal:
            raise UnboundedBodyError("support LP did not solve; body unbounded?")
        return float(res.value)

    def gauge(self, x) -> float:
        """Minkowski functional min{t >= 0 : x in tK}."""
        x = _as_vector(x, self.dim)
        return float(kernels.gauge_many(self.kernel_spec, x[None, :])[0])

    def gauge_many(self, X) -> np.ndarray:
        return kernels.gauge_many(self.kernel_spec, np.asarray(X, dtype=float))

    def member_many(self, X, t: float = 1.0) -> np.ndarray:
        """Vectorized x in t*K test."""
        return kernels.member_many(self.kernel_spec, np.asarray(X, dtype=float), t)

    def boundary_point(self, u) -> np.ndarray:
        """Intersection of ray through u with the boundary."""
        u = _as_vector(u, self.dim)
        if not np.any(u):
            raise InvalidArgumentError("direction must be nonzero")
        return u / self.gauge(u)

    def supporting_functional(self, b, return_unique: bool = False):
        """Functional f with f(b) = 1 and f <= 1 on the body.

        `b` must lie on the boundary (gauge 1 within the boundary tolerance).
        At polytope ridges the normalized average of the active facet rows is
        returned and flagged non-unique.
        """
        b = _as_vector(b, self.dim)
        g = self.gauge(b)
        if abs(g - 1.0) > BOUNDARY_TOL:
            raise PreconditionError(f"point is not on the boundary (gauge {g:.9g})")
        unique = True
        if self.kind == "ball":
            f = b / float(b @ b)
        elif self.kind == "ellipsoid":
            grad = self.quad @ b
            f = grad / float(grad @ b)
        elif self.kind == "p-ball":
            grad = np.sign(b) * np.power(np.abs(b), self.p - 1.0)
            f = grad / float(grad @ b)
        elif self.kind == "smoothed-polytope":
            proj = _project_to_polytope(self.kernel_spec, b)
            normal = b - proj
            nn = float(np.linalg.norm(normal))
            if nn < 0.25 * self.epsilon:
                raise PreconditionError("point is too deep inside the smoothed body")
            f = normal / float(normal @ b)
        else:  # polytope-H / polytope-V / slab-intersection
            vals = self.rows @ b
            active = vals >= np.max(vals) - 1e-9 * max(1.0, abs(float(np.max(vals))))
            act_rows = self.rows[active]
            unique = int(active.sum()) == 1
            f = act_rows.mean(axis=0)
            f = f / float(f @ b)
        if return_unique:
            return f, unique
        return f

    # -- sanity -------------------------------------------------------------

    def symmetry_defect(self, n_dirs: int = 100, seed: int = 0) -> float:
        """max |h(u) - h(-u)| over sampled directions."""
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(n_dirs):
            u = rng.standard_normal(self.dim)
            if not np.any(u):
                continue
            worst = max(worst, abs(self.support(u) - self.support(-u)))
        return worst

    def to_json(self) -> dict:
        params: dict = {}
        if self.kind == "ellipsoid":
            params["matrix"] = self.quad.tolist()
        elif self.kind == "p-ball":
            params["p"] = self.p
        elif self.kind == "polytope-H":
            params["halfspaces"] = [
                {"normal": list(row[:-1]), "offset": row[-1]} for row in self.halfspaces.tolist()
            ]
        elif self.kind == "polytope-V":
            params["vertices"] = self.verts.tolist()
        elif self.kind == "smoothed-polytope":
            params["vertices"] = self.verts.tolist()
            params["epsilon"] = self.epsilon
        elif self.kind == "slab-intersection":
            params["functionals"] = self.functionals.tolist()
        return {"dim": self.dim, "kind": self.kind, "params": params}


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def ball(dim: int) -> ConvexBody:
    _check_dim(dim)
    return ConvexBody(
        dim=dim,
        kind="ball",
        smooth=True,
        strictly_convex=True,
        osym=True,
        _spec=kernels.make_ball_spec(dim),
    )


def ellipsoid(matrix) -> ConvexBody:
    quad = np.asarray(matrix, dtype=float)
    if quad.ndim != 2 or quad.shape[0] != quad.shape[1]:
        raise InvalidArgumentError("ellipsoid matrix must be square")
    _check_dim(quad.shape[0])
    if np.max(np.abs(quad - quad.T)) > 1e-12 * max(1.0, np.max(np.abs(quad))):
        raise InvalidArgumentError("ellipsoid matrix must be symmetric")
    if np.any(np.linalg.eigvalsh(quad) <= 0):
        raise InvalidArgumentError("ellipsoid matrix must be positive definite")
    return ConvexBody(
        dim=quad.shape[0],
        kind="ellipsoid",
        smooth=True,
        strictly_convex=True,
        osym=True,
        quad=quad,
        quad_inv=np.linalg.inv(quad),
        _spec=kernels.make_ellipsoid_spec(quad),
    )


def p_ball(p: float, dim: int) -> ConvexBody:
    _check_dim(dim)
    if not (1.0 < p < math.inf):
        raise InvalidArgumentError("p must satisfy 1 < p < inf")
    return ConvexBody(
        dim=dim,
        kind="p-ball",
        smooth=True,
        strictly_convex=True,
        osym=True,
        p=float(p),
        _spec=kernels.make_pball_spec(p, dim),
    )


def polytope_v(vertices) -> ConvexBody:
    verts = np.asarray(vertices, dtype=float)
    if verts.ndim != 2:
        raise InvalidArgumentError("vertices must be a 2-D array")
    _check_dim(verts.shape[1])
    verts = _hull_vertices(verts)
    rows = _v_to_h(verts)
    osym = _is_symmetric_set(verts)
    spec = kernels.make_polytope_spec(rows, verts) if rows is not None else None
    return ConvexBody(
        dim=verts.shape[1],
        kind="polytope-V",
        smooth=False,
        strictly_convex=False,
        osym=osym,
        verts=verts,
        rows=rows,
        _spec=spec,
    )


def polytope_h(halfspaces) -> ConvexBody:
    """halfspaces: iterable of (normal, offset) with normal.x <= offset."""
    normals = []
    offsets = []
    for item in halfspaces:
        if isinstance(item, dict):
            normals.append(item["normal"])
            offsets.append(item["offset"])
        else:
            normals.append(item[0])
            offsets.append(item[1])
    normals = np.asarray(normals, dtype=float)
    offsets = np.asarray(offsets, dtype=float)
    _check_dim(normals.shape[1])
    if np.any(offsets <= 0):
        raise InvalidArgumentError("halfspace offsets must be positive (origin interior)")
    rows = normals / offsets[:, None]
    verts = _h_to_v(rows)
    osym = _is_symmetric_set(rows)
    return ConvexBody(
        dim=normals.shape[1],
        kind="polytope-H",
        smooth=False,
        strictly_convex=False,
        osym=osym,
        verts=verts,
        rows=rows,
        halfspaces=np.hstack([normals, offsets[:, None]]),
        _spec=kernels.make_polytope_spec(rows, verts),
    )


def smoothed_polytope(vertices, epsilon: float) -> ConvexBody:
    if not (epsilon > 0):
        raise InvalidArgumentError("epsilon must be positive")
    verts = _hull_vertices(np.asarray(vertices, dtype=float))
    _check_dim(verts.shape[1])
    rows = _v_to_h(verts)  # None when o is not interior to the polytope part
    try:
        spec = kernels.make_smoothed_spec(rows, verts, epsilon)
    except NotSupportedError as exc:
        raise InvalidArgumentError(str(exc)) from exc
    return ConvexBody(
        dim=verts.shape[1],
        kind="smoothed-polytope",
        smooth=True,
        strictly_convex=False,
        osym=_is_symmetric_set(verts),
        verts=verts,
        rows=rows,
        epsilon=float(epsilon),
        _spec=spec,
    )


def slab_intersection(functionals) -> ConvexBody:
    F = np.asarray(functionals, dtype=float)
    if F.ndim != 2:
        raise InvalidArgumentError("functionals must be a 2-D array")
    _check_dim(F.shape[1])
    if np.linalg.matrix_rank(F, tol=1e-12) < F.shape[1]:
        raise UnboundedBodyError("slab functionals do not span the space")
    rows = np.vstack([F, -F])
    verts = _h_to_v(rows)
    return ConvexBody(
        dim=F.shape[1],
        kind="slab-intersection",
        smooth=False,
        strictly_convex=False,
        osym=True,
        verts=verts,
        rows=rows,
        functionals=F,
        _spec=kernels.make_polytope_spec(rows, verts),
    )


# ---------------------------------------------------------------------------
# Derived operations
# ---------------------------------------------------------------------------


def minkowski_symmetrize(body: ConvexBody) -> ConvexBody:
    """Central symmetrization (K + (-K))/2; identity on symmetric bodies."""
    if body.osym:
        return body
    if body.kind in ("polytope-V", "polytope-H"):
        v = body.verts
        diffs = 0.5 * (v[:, None, :] - v[None, :, :]).reshape(-1, body.dim)
        return polytope_v(_hull_vertices(diffs))
    if body.kind == "smoothed-polytope":
        v = body.verts
        diffs = 0.5 * (v[:, None, :] - v[None, :, :]).reshape(-1, body.dim)
        return smoothed_polytope(_hull_vertices(diffs), body.epsilon)
    return body


def is_auerbach_basis(body: ConvexBody, points, tol: float = 1e-7) -> bool:
    """d boundary points forming a basis, each supported parallel to the rest.

    For each point the functional vanishing on the other d-1 must be a
    supporting functional: its support value must equal its value there.
    """
    pts = np.asarray(points, dtype=float)
    d = body.dim
    if pts.shape != (d, d):
        raise PreconditionError(f"need exactly {d} points of dimension {d}")
    for x in pts:
        g = body.gauge(x)
        if abs(g - 1.0) > BOUNDARY_TOL:
            raise PreconditionError(f"basis point off the boundary (gauge {g:.9g})")
    if abs(np.linalg.det(pts)) <= 1e-9:
        return False
    for i in range(d):
        others = np.delete(pts, i, axis=0)
        normal = _null_direction(others)
        if normal is None:
            return False
        val = float(normal @ pts[i])
        if val < 0:
            normal, val = -normal, -val
        h = body.support(normal)
        if abs(h - val) > tol * max(1.0, abs(h)):
            return False
    return True


def _null_direction(rows: np.ndarray) -> Optional[np.ndarray]:
    """Unit vector orthogonal to all rows (rows has shape (d-1, d))."""
    _, s, vt = np.linalg.svd(np.atleast_2d(rows))
    v = vt[-1]
    if rows.size and np.max(np.abs(rows @ v)) > 1e-8 * max(1.0, np.max(np.abs(rows))):
        return None
    return v


# ---------------------------------------------------------------------------
# Volume and surface area
# ---------------------------------------------------------------------------


def ball_volume(d: int) -> float:
    return math.pi ** (d / 2.0) / gamma(d / 2.0 + 1.0)


def analytic_volume(body: ConvexBody) -> Optional[float]:
    d = body.dim
    if body.kind == "ball":
        return ball_volume(d)
    if body.kind == "ellipsoid":
        return ball_volume(d) / math.sqrt(float(np.linalg.det(body.quad)))
    if body.kind == "p-ball":
        p = body.p
        return float((2.0 * gamma(1.0 + 1.0 / p)) ** d / gamma(1.0 + d / p))
    if body.kind in ("polytope-V", "polytope-H", "slab-intersection"):
        if d == 1:
            return float(body.verts.max() - body.verts.min())
        if d == 2:
            return float(ConvexHull(body.verts).volume)
        return None  # d >= 3 polytopes go through Monte Carlo
    if body.kind == "smoothed-polytope" and d == 2:
        hull = ConvexHull(body.verts)
        return float(hull.volume + hull.area * body.epsilon + math.pi * body.epsilon**2)
    return None


def analytic_surface(body: ConvexBody) -> Optional[float]:
    d = body.dim
    if body.kind == "ball":
        return d * ball_volume(d)
    if body.kind == "ellipsoid" and d == 2:
        axes = np.sort(1.0 / np.sqrt(np.linalg.eigvalsh(body.quad)))
        b, a = float(axes[0]), float(axes[1])
        return float(4.0 * a * ellipe(1.0 - (b / a) ** 2))
    if body.kind == "p-ball" and d == 2:
        return _polyline_perimeter(body)
    if body.kind in ("polytope-V", "polytope-H", "slab-intersection") and d in (2, 3):
        return float(ConvexHull(body.verts).area)
    if body.kind == "smoothed-polytope" and d == 2:
        return float(ConvexHull(body.verts).area + 2.0 * math.pi * body.epsilon)
    return None


def _polyline_perimeter(body: ConvexBody, n: int = 1 << 17) -> float:
    theta = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    dirs = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    pts = dirs / body.gauge_many(dirs)[:, None]
    return float(np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1).sum())


def volume_estimate(body: ConvexBody, samples: int, seed: int):
    """Monte Carlo volume over the bounding box; (estimate, stderr)."""
    from . import mc

    if samples < 10**4:
        raise InvalidArgumentError("volume_estimate needs samples >= 1e4")
    spec = body.kernel_spec
    R = spec.r_out
    lo, hi = np.full(body.dim, -R), np.full(body.dim, R)
    (count,) = mc.indicator_counts(lo, hi, samples, seed, [lambda X: kernels.member_many(spec, X, 1.0)])
    box_vol = float(np.prod(hi - lo))
    return mc.scaled_estimate(count, samples, box_vol)


def surface_area_estimate(body: ConvexBody, samples: int, seed: int, method: str = "auto"):
    """Boundary measure; analytic where known, else an eps-shell estimate.

    The numeric path measures (vol(K + eps*B) - vol(K))/eps with shared
    samples, eps = 1e-3 * circumradius. Returns (estimate, stderr), stderr 0
    for analytic values.
    """
    from . import mc

    if method not in ("auto", "analytic", "numeric"):
        raise InvalidArgumentError(f"unknown method {method!r}")
    if method != "numeric":
        exact = analytic_surface(body)
        if exact is not None:
            return float(exact), 0.0
        if method == "analytic":
            raise NotSupportedError(f"no analytic surface area for kind {body.kind}")
    if samples < 10**4:
        raise InvalidArgumentError("surface_area_estimate needs samples >= 1e4")
    spec = body.kernel_spec
    eps = 1e-3 * spec.r_out
    R = spec.r_out + eps
    lo, hi = np.full(body.dim, -R), np.full(body.dim, R)
    (shell,) = mc.indicator_counts(
        lo,
        hi,
        samples,
        seed,
        [
            lambda X: kernels.shell_member_many(spec, X, eps)
            & ~kernels.member_many(spec, X, 1.0)
        ],
    )
    box_vol = float(np.prod(hi - lo))
    shell_vol, shell_err = mc.scaled_estimate(shell, samples, box_vol)
    return shell_vol / eps, shell_err / eps


# ---------------------------------------------------------------------------
# Internals
# ---------------------------------------------------------------------------


def _check_dim(d: int):
    if not (1 <= d <= MAX_DIM):
        raise InvalidArgumentError(f"dimension must be in 1..{MAX_DIM}")


def _as_vector(x, dim: int) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (dim,):
        raise InvalidArgumentError(f"expected a vector of dimension {dim}")
    if not np.all(np.isfinite(v)):
        raise InvalidArgumentError("vector entries must be finite")
    return v


def _hull_vertices(points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    d = points.shape[1]
    if d == 1:
        return np.array([[points.min()], [points.max()]])
    hull = ConvexHull(points)
    return points[hull.vertices]


def _v_to_h(verts: np.ndarray) -> Optional[np.ndarray]:
    """Normalized facet rows (gauge = max rows.x); None if o not interior."""
    d = verts.shape[1]
    if d == 1:
        lo, hi = float(verts.min()), float(verts.max())
        if not (lo < 0 < hi):
            return None
        return np.array([[1.0 / hi], [1.0 / lo]])
    hull = ConvexHull(verts)
    normals = hull.equations[:, :-1]
    offsets = -hull.equations[:, -1]
    if np.any(offsets <= 1e-12):
        return None
    rows = normals / offsets[:, None]
    return _dedupe_rows(rows)


def _h_to_v(rows: np.ndarray) -> np.ndarray:
    """Vertices of {x : rows.x <= 1} via polar duality (origin interior)."""
    d = rows.shape[1]
    if d == 1:
        r = rows.ravel()
        pos = r[r > 0]
        neg = r[r < 0]
        if pos.size == 0 or neg.size == 0:
            raise UnboundedBodyError("halfspaces do not bound the line segment")
        return np.array([[1.0 / pos.max()], [1.0 / neg.min()]])
    try:
        polar = ConvexHull(rows)
    except Exception as exc:  # qhull degenerate input
        raise UnboundedBodyError("halfspaces do not bound a body") from exc
    normals = polar.equations[:, :-1]
    offsets = -polar.equations[:, -1]
    if np.any(offsets <= 1e-12):
        raise UnboundedBodyError("halfspaces do not bound a body")
    return _dedupe_rows(normals / offsets[:, None])


def _dedupe_rows(rows: np.ndarray, digits: int = 9) -> np.ndarray:
    seen = {}
    for row in rows:
        seen[tuple(np.round(row, digits))] = row
    return np.array(list(seen.values()))


def _is_symmetric_set(points: np.ndarray, tol: float = 1e-9) -> bool:
    pts = np.asarray(points, dtype=float)
    scale = max(1.0, float(np.max(np.abs(pts))))
    for q in -pts:
        if np.min(np.linalg.norm(pts - q, axis=1)) > tol * scale:
            return False
    return True


def _project_to_polytope(spec: kernels.KernelSpec, x: np.ndarray) -> np.ndarray:
    """Euclidean projection of one point onto the polytope of `spec`."""
    if spec.sub_base is None:
        raise NotSupportedError("no projection tables for this polytope")
    if float(np.max(spec.rows @ x)) <= 1.0:
        return np.asarray(x, dtype=float)
    Y = x[None, :] - spec.sub_base  # (S, d)
    bary = np.einsum("sjd,sd->sj", spec.sub_mat, Y)
    valid = (bary >= -1e-12).all(axis=1) & (bary.sum(axis=1) <= 1.0 + 1e-12)
    proj = spec.sub_base + np.einsum("sdj,sj->sd", spec.sub_edge, bary)
    d2 = ((x[None, :] - proj) ** 2).sum(axis=1)
    d2[~valid] = np.inf
    return proj[int(np.argmin(d2))]
