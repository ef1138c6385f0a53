# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel backend.

Same contract as `reference.py`, with per-point C loops and early exits on
membership queries. Cold paths (ellipsoid Euclidean shell) delegate to the
reference implementation; the hot paths are gauge/membership batches and
union membership.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, pow, sqrt

from ..errors import NotSupportedError
from . import reference as _ref
from .spec import KIND_BALL, KIND_ELLIPSOID, KIND_PBALL, KIND_POLY_H, KIND_SMOOTHED

BACKEND = "compiled"

cdef double GAUGE_REL_TOL = 1e-12

cdef int C_BALL = KIND_BALL
cdef int C_ELLIPSOID = KIND_ELLIPSOID
cdef int C_PBALL = KIND_PBALL
cdef int C_POLY_H = KIND_POLY_H
cdef int C_SMOOTHED = KIND_SMOOTHED


cdef inline double _gauge_ball(const double* x, Py_ssize_t d) noexcept nogil:
    cdef double s = 0.0
    cdef Py_ssize_t k
    for k in range(d):
        s += x[k] * x[k]
    return sqrt(s)


cdef inline double _gauge_quad(const double* x, const double[:, ::1] A, Py_ssize_t d) noexcept nogil:
    cdef double s = 0.0, row
    cdef Py_ssize_t i, j
    for i in range(d):
        row = 0.0
        for j in range(d):
            row += A[i, j] * x[j]
        s += x[i] * row
    if s < 0.0:
        s = 0.0
    return sqrt(s)


cdef inline double _gauge_pball(const double* x, double p, Py_ssize_t d) noexcept nogil:
    cdef double s = 0.0
    cdef Py_ssize_t k
    for k in range(d):
        s += pow(fabs(x[k]), p)
    return pow(s, 1.0 / p)


cdef inline double _gauge_rows(const double* x, const double[:, ::1] rows, Py_ssize_t d) noexcept nogil:
    cdef double best = 0.0, v
    cdef Py_ssize_t i, k
    for i in range(rows.shape[0]):
        v = 0.0
        for k in range(d):
            v += rows[i, k] * x[k]
        if v > best:
            best = v
    return best


cdef double _poly_dist2_point(
    const double* x,
    const double[:, ::1] rows,
    const double[:, ::1] base,
    const double[:, :, ::1] mat,
    const double[:, :, ::1] edge,
    Py_ssize_t d,
    double stop_below,
) noexcept nogil:
    """Squared distance from x to the polytope; may return early once the
    running minimum drops to `stop_below` (pass 0 for an exact minimum)."""
    cdef double best, v, s, d2, diff
    cdef Py_ssize_t si, j, k
    cdef double y[8]
    cdef double bary[8]
    cdef double proj[8]
    if rows.shape[0] > 0 and _gauge_rows(x, rows, d) <= 1.0:
        return 0.0
    best = 1e300
    for si in range(base.shape[0]):
        s = 0.0
        for k in range(d):
            y[k] = x[k] - base[si, k]
        v = 0.0
        for j in range(d):
            s = 0.0
            for k in range(d):
                s += mat[si, j, k] * y[k]
            bary[j] = s
            if s < -1e-12:
                v = 1.0
                break
        if v == 1.0:
            continue
        s = 0.0
        for j in range(d):
            s += bary[j]
        if s > 1.0 + 1e-12:
            continue
        d2 = 0.0
        for k in range(d):
            v = 0.0
            for j in range(d):
                v += edge[si, k, j] * bary[j]
            proj[k] = base[si, k] + v
            diff = x[k] - proj[k]
            d2 += diff * diff
        if d2 < best:
            best = d2
            if best <= stop_below:
                return best
    return best


cdef double _gauge_smoothed_point(
    const double* x,
    const double[:, ::1] rows,
    const double[:, ::1] base,
    const double[:, :, ::1] mat,
    const double[:, :, ::1] edge,
    Py_ssize_t d,
    double eps2,
    double r_in,
    double r_out,
) noexcept nogil:
    cdef double nrm = _gauge_ball(x, d)
    cdef double lo, hi, mid
    cdef double y[8]
    cdef Py_ssize_t k, it
    if nrm == 0.0:
        return 0.0
    lo = nrm / r_out
    hi = nrm / r_in
    for it in range(200):
        mid = 0.5 * (lo + hi)
        for k in range(d):
            y[k] = x[k] / mid
        if _poly_dist2_point(y, rows, base, mat, edge, d, eps2) <= eps2:
            hi = mid
        else:
            lo = mid
        if hi - lo <= GAUGE_REL_TOL * hi:
            break
    return 0.5 * (lo + hi)


def gauge_many(spec, X):
    X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=np.float64)))
    cdef double[:, ::1] Xv = X
    cdef Py_ssize_t n = Xv.shape[0], d = Xv.shape[1], i
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef int kind = spec.kind
    cdef double p = spec.p, eps2
    cdef double[:, ::1] quad_v, rows_v, base_v
    cdef double[:, :, ::1] mat_v, edge_v
    cdef double r_in, r_out
    if kind == C_BALL:
        for i in range(n):
            ov[i] = _gauge_ball(&Xv[i, 0], d)
    elif kind == C_ELLIPSOID:
        quad_v = spec.quad
        for i in range(n):
            ov[i] = _gauge_quad(&Xv[i, 0], quad_v, d)
    elif kind == C_PBALL:
        for i in range(n):
            ov[i] = _gauge_pball(&Xv[i, 0], p, d)
    elif kind == C_POLY_H:
        rows_v = spec.rows
        for i in range(n):
            ov[i] = _gauge_rows(&Xv[i, 0], rows_v, d)
    elif kind == C_SMOOTHED:
        if spec.sub_base is None:
            raise NotSupportedError("no projection tables for this polytope")
        rows_v = spec.rows
        base_v = spec.sub_base
        mat_v = spec.sub_mat
        edge_v = spec.sub_edge
        eps2 = spec.eps * spec.eps
        r_in = spec.r_in
        r_out = spec.r_out
        for i in range(n):
            ov[i] = _gauge_smoothed_point(
                &Xv[i, 0], rows_v, base_v, mat_v, edge_v, d, eps2, r_in, r_out
            )
    else:
        raise NotSupportedError(f"unknown kind {kind}")
    return out


cdef inline bint _member_point(
    const double* x,
    int kind,
    double t,
    double p,
    const double[:, ::1] quad,
    const double[:, ::1] rows,
    const double[:, ::1] base,
    const double[:, :, ::1] mat,
    const double[:, :, ::1] edge,
    Py_ssize_t d,
    double eps2,
) noexcept nogil:
    cdef double y[8]
    cdef Py_ssize_t k
    if kind == 0:  # ball
        return _gauge_ball(x, d) <= t
    if kind == 1:  # ellipsoid
        return _gauge_quad(x, quad, d) <= t
    if kind == 2:  # p-ball
        return _gauge_pball(x, p, d) <= t
    if kind == 3:  # polytope
        return _gauge_rows(x, rows, d) <= t
    for k in range(d):  # smoothed: x in t*K iff dist(x/t, P) <= eps
        y[k] = x[k] / t
    return _poly_dist2_point(y, rows, base, mat, edge, d, eps2) <= eps2


cdef class _SpecView:
    """Typed snapshot of a KernelSpec for nogil loops."""
    cdef int kind
    cdef Py_ssize_t d
    cdef double p, eps2, r_in, r_out
    cdef double[:, ::1] quad, rows, base
    cdef double[:, :, ::1] mat, edge

    def __init__(self, spec):
        cdef double[:, ::1] empty2 = np.zeros((1, 1))
        cdef double[:, :, ::1] empty3 = np.zeros((1, 1, 1))
        self.kind = spec.kind
        self.d = spec.dim
        self.p = spec.p
        self.eps2 = spec.eps * spec.eps
        self.r_in = spec.r_in
        self.r_out = spec.r_out
        self.quad = spec.quad if spec.quad is not None else empty2
        self.rows = spec.rows if spec.rows is not None else empty2
        self.base = spec.sub_base if spec.sub_base is not None else empty2
        self.mat = spec.sub_mat if spec.sub_mat is not None else empty3
        self.edge = spec.sub_edge if spec.sub_edge is not None else empty3


def member_many(spec, X, double t):
    X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=np.float64)))
    cdef double[:, ::1] Xv = X
    cdef Py_ssize_t n = Xv.shape[0], i, k
    out = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] ov = out
    cdef _SpecView s = _SpecView(spec)
    cdef bint zero
    if spec.kind == C_SMOOTHED and spec.sub_base is None:
        raise NotSupportedError("no projection tables for this polytope")
    if t <= 0.0:
        if t == 0.0:
            for i in range(n):
                zero = True
                for k in range(s.d):
                    if Xv[i, k] != 0.0:
                        zero = False
                        break
                ov[i] = 1 if zero else 0
        return out.view(bool)
    for i in range(n):
        ov[i] = _member_point(
            &Xv[i, 0], s.kind, t, s.p, s.quad, s.rows, s.base, s.mat, s.edge, s.d, s.eps2
        )
    return out.view(bool)


def shell_member_many(spec, X, double eps):
    X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=np.float64)))
    cdef double[:, ::1] Xv = X
    cdef Py_ssize_t n = Xv.shape[0], i
    cdef int kind = spec.kind
    cdef double r, r2
    out = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] ov = out
    cdef _SpecView s
    if kind == C_ELLIPSOID:
        return _ref.shell_member_many(spec, X, eps)
    if kind == C_BALL:
        r = 1.0 + eps
        for i in range(n):
            ov[i] = _gauge_ball(&Xv[i, 0], Xv.shape[1]) <= r
        return out.view(bool)
    if kind == C_POLY_H or kind == C_SMOOTHED:
        if spec.sub_base is None:
            raise NotSupportedError("no projection tables for this polytope")
        s = _SpecView(spec)
        r = eps + (spec.eps if kind == C_SMOOTHED else 0.0)
        r2 = r * r
        for i in range(n):
            ov[i] = _poly_dist2_point(&Xv[i, 0], s.rows, s.base, s.mat, s.edge, s.d, r2) <= r2
        return out.view(bool)
    raise NotSupportedError("no Euclidean-shell oracle for this body kind")


def union_member_many(spec, centers, double scale, X):
    X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=np.float64)))
    C = np.ascontiguousarray(np.atleast_2d(np.asarray(centers, dtype=np.float64)))
    cdef double[:, ::1] Xv = X
    cdef double[:, ::1] Cv = C
    cdef Py_ssize_t n = Xv.shape[0], m = Cv.shape[0], d = Xv.shape[1], i, j, k
    out = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] ov = out
    cdef _SpecView s = _SpecView(spec)
    cdef double y[8]
    cdef double reach2 = (scale * s.r_out) * (scale * s.r_out)
    cdef double d2
    if scale <= 0.0:
        raise NotSupportedError("union membership needs scale > 0")
    for i in range(n):
        for j in range(m):
            d2 = 0.0
            for k in range(d):
                y[k] = Xv[i, k] - Cv[j, k]
                d2 += y[k] * y[k]
            if d2 > reach2:
                continue
            if _member_point(y, s.kind, scale, s.p, s.quad, s.rows, s.base, s.mat, s.edge, d, s.eps2):
                ov[i] = 1
                break
    return out.view(bool)


def union_shell_member_many(spec, centers, double scale, X, double eps):
    if scale <= 0.0:
        raise NotSupportedError("union membership needs scale > 0")
    X = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=np.float64)))
    C = np.ascontiguousarray(np.atleast_2d(np.asarray(centers, dtype=np.float64)))
    cdef Py_ssize_t n = X.shape[0], m = C.shape[0], d = X.shape[1], i, j, k
    cdef int kind = spec.kind
    if kind == C_ELLIPSOID or kind == C_PBALL:
        return _ref.union_shell_member_many(spec, C, scale, X, eps)
    cdef double[:, ::1] Xv = X
    cdef double[:, ::1] Cv = C
    out = np.zeros(n, dtype=np.uint8)
    cdef cnp.uint8_t[::1] ov = out
    cdef _SpecView s = _SpecView(spec)
    cdef double y[8]
    cdef double reach = scale * s.r_out + eps
    cdef double reach2 = reach * reach
    cdef double d2, r, r2
    if kind == C_BALL:
        r = scale + eps
    elif kind == C_SMOOTHED:
        r = scale * spec.eps + eps
    else:
        r = eps
    r2 = r * r
    if (kind == C_POLY_H or kind == C_SMOOTHED) and spec.sub_base is None:
        raise NotSupportedError("no projection tables for this polytope")
    for i in range(n):
        for j in range(m):
            d2 = 0.0
            for k in range(d):
                y[k] = Xv[i, k] - Cv[j, k]
                d2 += y[k] * y[k]
            if d2 > reach2:
                continue
            if kind == C_BALL:
                if d2 <= r2:
                    ov[i] = 1
                    break
            else:
                for k in range(d):
                    y[k] = y[k] / scale
                # dist(y, K) <= r/scale with r as set above
                if _poly_dist2_point(y, s.rows, s.base, s.mat, s.edge, d, r2 / (scale * scale)) * scale * scale <= r2:
                    ov[i] = 1
                    break
    return out.view(bool)
