"""Flat numeric description of a body, shared by both kernel backends.

A KernelSpec reduces every body kind to plain float arrays so the hot loops
(batch gauge, membership, Euclidean-shell membership) never touch Python-level
body objects. Polytope distance queries use exact projection via enumeration
of affinely independent vertex subsets: the Euclidean projection of a point
onto conv(V) lies in the affine hull of some subset of at most d+1 affinely
independent vertices with nonnegative barycentric coordinates, so the minimum
of the per-subset projections equals the true distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from ..errors import NotSupportedError

KIND_BALL = 0
KIND_ELLIPSOID = 1
KIND_PBALL = 2
KIND_POLY_H = 3
KIND_SMOOTHED = 4

MAX_PROJECTION_SUBSETS = 20000


@dataclass(eq=False)
class KernelSpec:
    kind: int
    dim: int
    # ellipsoid: quadratic form and its eigendecomposition
    quad: Optional[np.ndarray] = None
    evals: Optional[np.ndarray] = None
    evecs: Optional[np.ndarray] = None
    # p-ball exponent
    p: float = 0.0
    # polytopes: normalized facet rows (gauge = max rows.x) and vertices
    rows: Optional[np.ndarray] = None
    verts: Optional[np.ndarray] = None
    # smoothed polytope rounding radius
    eps: float = 0.0
    # projection tables (see build_projection_tables)
    sub_base: Optional[np.ndarray] = None
    sub_mat: Optional[np.ndarray] = None
    sub_edge: Optional[np.ndarray] = None
    # inradius / circumradius bounds of the whole body
    r_in: float = 0.0
    r_out: float = 0.0
    _csort: dict = field(default_factory=dict, repr=False)

    @property
    def has_projection(self) -> bool:
        return self.sub_base is not None


def build_projection_tables(verts: np.ndarray):
    """Per-subset affine projection data for exact distance to conv(verts).

    Returns (base, mat, edge) with shapes (S, d), (S, d, d), (S, d, d); rows
    of mat/edge beyond the subset size are zero so a single padded batch
    contraction evaluates every subset at once:

        bary = mat[s] @ (x - base[s])          (padded entries stay 0)
        proj = base[s] + edge[s] @ bary
        valid iff bary >= 0 and sum(bary) <= 1

    and dist(x, conv(verts)) = min over valid subsets of |x - proj|.
    """
    verts = np.asarray(verts, dtype=float)
    m, d = verts.shape
    bases, mats, edges = [], [], []
    count = 0
    for k in range(1, min(m, d + 1) + 1):
        for idx in combinations(range(m), k):
            count += 1
            if count > MAX_PROJECTION_SUBSETS:
                raise NotSupportedError(
                    "polytope too large for projection tables "
                    f"({m} vertices in dimension {d})"
                )
            v0 = verts[idx[0]]
            B = verts[list(idx[1:])] - v0  # (k-1, d)
            if k > 1:
                G = B @ B.T
                if abs(np.linalg.det(G)) <= 1e-12 * max(1.0, np.trace(G) ** (k - 1)):
                    continue  # affinely dependent subset
                M = np.linalg.solve(G, B)  # (k-1, d)
            else:
                M = np.zeros((0, d))
            mat = np.zeros((d, d))
            edge = np.zeros((d, d))
            mat[: k - 1, :] = M
            edge[:, : k - 1] = B.T
            bases.append(v0)
            mats.append(mat)
            edges.append(edge)
    return (
        np.ascontiguousarray(bases, dtype=float),
        np.ascontiguousarray(mats, dtype=float),
        np.ascontiguousarray(edges, dtype=float),
    )


def make_ball_spec(dim: int) -> KernelSpec:
    return KernelSpec(kind=KIND_BALL, dim=dim, r_in=1.0, r_out=1.0)


def make_ellipsoid_spec(quad: np.ndarray) -> KernelSpec:
    quad = np.ascontiguousarray(quad, dtype=float)
    evals, evecs = np.linalg.eigh(quad)
    axes = 1.0 / np.sqrt(evals)
    return KernelSpec(
        kind=KIND_ELLIPSOID,
        dim=quad.shape[0],
        quad=quad,
        evals=evals,
        evecs=evecs,
        r_in=float(axes.min()),
        r_out=float(axes.max()),
    )


def make_pball_spec(p: float, dim: int) -> KernelSpec:
    # Euclidean norm of the diagonal boundary point of the unit p-ball.
    r_diag = dim ** (0.5 - 1.0 / p)
    return KernelSpec(
        kind=KIND_PBALL,
        dim=dim,
        p=float(p),
        r_in=min(1.0, r_diag),
        r_out=max(1.0, r_diag),
    )


def make_polytope_spec(rows: np.ndarray, verts: np.ndarray) -> KernelSpec:
    rows = np.ascontiguousarray(rows, dtype=float)
    verts = np.ascontiguousarray(verts, dtype=float)
    d = rows.shape[1]
    spec = KernelSpec(
        kind=KIND_POLY_H,
        dim=d,
        rows=rows,
        verts=verts,
        r_in=1.0 / float(np.max(np.linalg.norm(rows, axis=1))),
        r_out=float(np.max(np.linalg.norm(verts, axis=1))),
    )
    try:
        spec.sub_base, spec.sub_mat, spec.sub_edge = build_projection_tables(verts)
    except NotSupportedError:
        pass  # distance queries will refuse; gauge/membership still work
    return spec


def make_smoothed_spec(rows: Optional[np.ndarray], verts: np.ndarray, eps: float) -> KernelSpec:
    """rows may be None when the origin is not interior to the polytope part;
    the facet form is only a fast-accept shortcut, distances come from the
    projection tables either way."""
    verts = np.ascontiguousarray(verts, dtype=float)
    d = verts.shape[1]
    base, mat, edge = build_projection_tables(verts)
    if rows is not None:
        rows = np.ascontiguousarray(rows, dtype=float)
        r_in = 1.0 / float(np.max(np.linalg.norm(rows, axis=1))) + float(eps)
    else:
        rows = np.zeros((0, d))
        dist_o = math.sqrt(_tables_dist2_origin(base, mat, edge))
        if dist_o >= eps:
            raise NotSupportedError("origin is not interior to the smoothed body")
        r_in = float(eps) - dist_o
    r_out_poly = float(np.max(np.linalg.norm(verts, axis=1)))
    return KernelSpec(
        kind=KIND_SMOOTHED,
        dim=d,
        rows=rows,
        verts=verts,
        eps=float(eps),
        sub_base=base,
        sub_mat=mat,
        sub_edge=edge,
        r_in=r_in,
        r_out=r_out_poly + float(eps),
    )


def _tables_dist2_origin(base, mat, edge) -> float:
    bary = np.einsum("sjd,sd->sj", mat, -base)
    valid = (bary >= -1e-12).all(axis=1) & (bary.sum(axis=1) <= 1.0 + 1e-12)
    proj = base + np.einsum("sdj,sj->sd", edge, bary)
    d2 = (proj**2).sum(axis=1)
    d2[~valid] = np.inf
    return float(d2.min())
