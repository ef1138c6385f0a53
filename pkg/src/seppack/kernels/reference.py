"""Pure numpy kernel backend.

Vectorized over point batches; the compiled backend in `_core.pyx` implements
the same contract with per-point loops and early exits. Keep the two in lock
step: `tests/test_kernels.py` checks them against each other.
"""

from __future__ import annotations

import numpy as np

from ..errors import NotSupportedError
from .spec import KIND_BALL, KIND_ELLIPSOID, KIND_PBALL, KIND_POLY_H, KIND_SMOOTHED, KernelSpec

BACKEND = "reference"

_GAUGE_REL_TOL = 1e-12
_PROJ_CHUNK = 2048


def _poly_dist2(spec: KernelSpec, X: np.ndarray) -> np.ndarray:
    """Squared Euclidean distance from each row of X to conv(spec.verts)."""
    if spec.sub_base is None:
        raise NotSupportedError("no projection tables for this polytope")
    out = np.empty(X.shape[0])
    if spec.rows is not None and spec.rows.shape[0]:
        inside = (X @ spec.rows.T).max(axis=1) <= 1.0
    else:
        inside = np.zeros(X.shape[0], dtype=bool)
    out[inside] = 0.0
    todo = np.flatnonzero(~inside)
    for start in range(0, todo.size, _PROJ_CHUNK):
        idx = todo[start : start + _PROJ_CHUNK]
        Y = X[idx][:, None, :] - spec.sub_base[None, :, :]  # (n, S, d)
        bary = np.einsum("sjd,nsd->nsj", spec.sub_mat, Y)
        valid = (bary >= -1e-12).all(axis=2) & (bary.sum(axis=2) <= 1.0 + 1e-12)
        proj = spec.sub_base[None] + np.einsum("sdj,nsj->nsd", spec.sub_edge, bary)
        diff = X[idx][:, None, :] - proj
        d2 = np.einsum("nsd,nsd->ns", diff, diff)
        d2[~valid] = np.inf
        out[idx] = d2.min(axis=1)
    return out


def gauge_many(spec: KernelSpec, X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if spec.kind == KIND_BALL:
        return np.linalg.norm(X, axis=1)
    if spec.kind == KIND_ELLIPSOID:
        return np.sqrt(np.maximum(np.einsum("nd,de,ne->n", X, spec.quad, X), 0.0))
    if spec.kind == KIND_PBALL:
        return np.power(np.abs(X), spec.p).sum(axis=1) ** (1.0 / spec.p)
    if spec.kind == KIND_POLY_H:
        return np.maximum((X @ spec.rows.T).max(axis=1), 0.0)
    if spec.kind == KIND_SMOOTHED:
        return _gauge_smoothed(spec, X)
    raise NotSupportedError(f"unknown kind {spec.kind}")


def _gauge_smoothed(spec: KernelSpec, X: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(X, axis=1)
    out = np.zeros(X.shape[0])
    nz = norms > 0.0
    if not nz.any():
        return out
    Xn = X[nz]
    lo = norms[nz] / spec.r_out  # infeasible (or exactly the gauge)
    hi = norms[nz] / spec.r_in  # feasible: x is in hi*K
    eps2 = spec.eps * spec.eps
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        member = _poly_dist2(spec, Xn / mid[:, None]) <= eps2
        hi = np.where(member, mid, hi)
        lo = np.where(member, lo, mid)
        if np.all(hi - lo <= _GAUGE_REL_TOL * hi):
            break
    out[nz] = 0.5 * (lo + hi)
    return out


def member_many(spec: KernelSpec, X: np.ndarray, t: float) -> np.ndarray:
    """Is gauge(x) <= t, i.e. x in t*K, for each row of X."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if t <= 0.0:
        return (X == 0.0).all(axis=1) & (t == 0.0)
    if spec.kind == KIND_BALL:
        return np.einsum("nd,nd->n", X, X) <= t * t
    if spec.kind == KIND_ELLIPSOID:
        return np.einsum("nd,de,ne->n", X, spec.quad, X) <= t * t
    if spec.kind == KIND_PBALL:
        return np.power(np.abs(X), spec.p).sum(axis=1) <= t**spec.p
    if spec.kind == KIND_POLY_H:
        return (X @ spec.rows.T).max(axis=1) <= t
    if spec.kind == KIND_SMOOTHED:
        return _poly_dist2(spec, X / t) <= spec.eps * spec.eps
    raise NotSupportedError(f"unknown kind {spec.kind}")


def shell_member_many(spec: KernelSpec, X: np.ndarray, eps: float) -> np.ndarray:
    """Is dist(x, K) <= eps (Euclidean) for each row of X."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if spec.kind == KIND_BALL:
        r = 1.0 + eps
        return np.einsum("nd,nd->n", X, X) <= r * r
    if spec.kind == KIND_POLY_H:
        return _poly_dist2(spec, X) <= eps * eps
    if spec.kind == KIND_SMOOTHED:
        r = spec.eps + eps
        return _poly_dist2(spec, X) <= r * r
    if spec.kind == KIND_ELLIPSOID:
        return _ellipsoid_dist2(spec, X) <= eps * eps
    raise NotSupportedError("no Euclidean-shell oracle for this body kind")


def _ellipsoid_dist2(spec: KernelSpec, X: np.ndarray) -> np.ndarray:
    """Squared distance to the ellipsoid x.quad.x <= 1 via its eigenbasis."""
    Z = X @ spec.evecs  # coordinates in the eigenbasis
    alpha = spec.evals[None, :]
    out = np.zeros(X.shape[0])
    outside = np.einsum("nd,nd->n", Z * alpha, Z) > 1.0
    if not outside.any():
        return out
    Zo = Z[outside]
    a = spec.evals[None, :]

    def g(t):
        return (a * Zo**2 / (1.0 + t[:, None] * a) ** 2).sum(axis=1)

    hi = np.full(Zo.shape[0], 1.0)
    for _ in range(200):
        bad = g(hi) > 1.0
        if not bad.any():
            break
        hi[bad] *= 2.0
    lo = np.zeros_like(hi)
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        over = g(mid) > 1.0
        lo = np.where(over, mid, lo)
        hi = np.where(over, hi, mid)
    t = 0.5 * (lo + hi)
    resid = (t[:, None] * a * Zo) / (1.0 + t[:, None] * a)
    out[outside] = np.einsum("nd,nd->n", resid, resid)
    return out


def union_member_many(spec: KernelSpec, centers: np.ndarray, scale: float, X: np.ndarray) -> np.ndarray:
    """Is x in the union of centers[i] + scale*K, for each row of X."""
    if scale <= 0.0:
        raise NotSupportedError("union membership needs scale > 0")
    X = np.atleast_2d(np.asarray(X, dtype=float))
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    out = np.zeros(X.shape[0], dtype=bool)
    todo = np.arange(X.shape[0])
    reach = scale * spec.r_out
    for c in centers:
        if todo.size == 0:
            break
        sub = X[todo] - c[None, :]
        near = np.einsum("nd,nd->n", sub, sub) <= reach * reach
        hit = np.zeros(todo.size, dtype=bool)
        if near.any():
            hit[near] = member_many(spec, sub[near], scale)
        out[todo[hit]] = True
        todo = todo[~hit]
    return out


def union_shell_member_many(
    spec: KernelSpec, centers: np.ndarray, scale: float, X: np.ndarray, eps: float
) -> np.ndarray:
    """Is dist(x, union of centers[i] + scale*K) <= eps, per row of X."""
    if scale <= 0.0:
        raise NotSupportedError("union membership needs scale > 0")
    X = np.atleast_2d(np.asarray(X, dtype=float))
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    out = np.zeros(X.shape[0], dtype=bool)
    todo = np.arange(X.shape[0])
    reach = scale * spec.r_out + eps
    for c in centers:
        if todo.size == 0:
            break
        sub = X[todo] - c[None, :]
        near = np.einsum("nd,nd->n", sub, sub) <= reach * reach
        hit = np.zeros(todo.size, dtype=bool)
        if near.any():
            # dist(y, scale*K) = scale * dist(y/scale, K)
            hit[near] = shell_member_many(spec, sub[near] / scale, eps / scale)
        out[todo[hit]] = True
        todo = todo[~hit]
    return out
