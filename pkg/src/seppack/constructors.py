"""Explicit constructions and a stochastic configuration search."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bodies import ConvexBody, is_auerbach_basis, smoothed_polytope
from .errors import InvalidArgumentError, PreconditionError
from .linearization import PairSystem, check_condition
from .packing import Packing


def cross_polytope_config(body: ConvexBody, auerbach) -> np.ndarray:
    """Touching vectors {+-2 a_i} over an Auerbach basis (2d of them)."""
    auer = np.atleast_2d(np.asarray(auerbach, dtype=float))
    if not is_auerbach_basis(body, auer):
        raise PreconditionError("points do not form an Auerbach basis of the body")
    return np.vstack([2.0 * auer, -2.0 * auer])


def grid_packing_2d(body: ConvexBody, auerbach, k: int) -> Packing:
    """k x k grid of translates along the doubled Auerbach directions."""
    if body.dim != 2:
        raise InvalidArgumentError("grid construction is planar")
    if k < 1:
        raise InvalidArgumentError("k must be at least 1")
    auer = np.atleast_2d(np.asarray(auerbach, dtype=float))
    if not is_auerbach_basis(body, auer):
        raise PreconditionError("points do not form an Auerbach basis of the body")
    x1, x2 = auer
    centers = [2.0 * i * x1 + 2.0 * j * x2 for i in range(k) for j in range(k)]
    return Packing(body, np.array(centers))


def example_5d() -> PairSystem:
    """Six pairs in dimension five satisfying the open condition with the
    origin outside the hull of the vectors: three coordinate points plus an
    equilateral triangle raised off their centroid."""
    e = np.eye(5)
    root3 = math.sqrt(3.0)
    v4 = e[3]
    v5 = -0.5 * e[3] + (root3 / 2.0) * e[4]
    v6 = -0.5 * e[3] - (root3 / 2.0) * e[4]
    centroid = (e[0] + e[1] + e[2]) / 3.0
    xs = np.array([e[0], e[1], e[2], centroid + v4, centroid + v5, centroid + v6])
    fs = np.array(
        [
            e[0] - (e[1] + e[2]) / 2.0,
            e[1] - (e[0] + e[2]) / 2.0,
            e[2] - (e[0] + e[1]) / 2.0,
            v4,
            v5,
            v6,
        ]
    )
    return PairSystem(dim=5, xs=xs, fs=fs)


def spiky_body_3d(epsilon: float) -> ConvexBody:
    """Rounded spiky polytope: conv{+-e_i, +-0.9(1,1,1)} + epsilon * ball.

    Smooth, with coordinate-orthogonal support planes at the axis boundary
    points, and with long diagonal spikes that force the covering scale of the
    axis configuration to blow up as epsilon shrinks.
    """
    if not (0.0 < epsilon <= 0.1):
        raise InvalidArgumentError("epsilon must lie in (0, 0.1]")
    spike = 0.9 * np.ones(3)
    verts = np.vstack([np.eye(3), -np.eye(3), spike, -spike])
    return smoothed_polytope(verts, epsilon)


# ---------------------------------------------------------------------------
# Stochastic search for touching configurations
# ---------------------------------------------------------------------------


@dataclass
class SearchResult:
    system: PairSystem
    violation: float
    success: bool
    target_n: int
    max_clean_n: int
    seed: int

    def to_json(self) -> dict:
        return {
            "system": self.system.to_json(),
            "violation": self.violation,
            "success": self.success,
            "target_n": self.target_n,
            "max_clean_n": self.max_clean_n,
            "seed": self.seed,
        }


def boundary_system(body: ConvexBody, dirs: np.ndarray) -> PairSystem:
    """Pair system of boundary points and supporting functionals along dirs."""
    pair = _pair_map(body)
    xs, fs = [], []
    for u in dirs:
        x, f = pair(u)
        xs.append(x)
        fs.append(f)
    return PairSystem(dim=body.dim, xs=np.array(xs), fs=np.array(fs))


def _pair_map(body: ConvexBody):
    """(direction) -> (boundary point, supporting functional); closed-form for
    the smooth analytic kinds, the generic oracle otherwise."""
    if body.kind == "ball":

        def pair(u):
            x = u / np.linalg.norm(u)
            return x, x

    elif body.kind == "p-ball":
        p = body.p

        def pair(u):
            x = u / (np.abs(u) ** p).sum() ** (1.0 / p)
            grad = np.sign(x) * np.abs(x) ** (p - 1.0)
            return x, grad / (grad @ x)

    elif body.kind == "ellipsoid":
        A = body.quad

        def pair(u):
            x = u / math.sqrt(u @ A @ u)
            return x, A @ x  # already normalized: (Ax).x = 1 on the boundary

    else:

        def pair(u):
            x = body.boundary_point(u)
            return x, body.supporting_functional(x)

    return pair


def _violation_matrix(V: np.ndarray) -> float:
    """Total distance of the off-diagonal entries from [-1, 0]."""
    high = np.clip(V, 0.0, None)
    low = np.clip(-1.0 - V, 0.0, None)
    np.fill_diagonal(high, 0.0)
    np.fill_diagonal(low, 0.0)
    return float(high.sum() + low.sum())


def _config_violation(pair, dirs: np.ndarray):
    xs = np.empty_like(dirs)
    fs = np.empty_like(dirs)
    for i, u in enumerate(dirs):
        xs[i], fs[i] = pair(u)
    return _violation_matrix(fs @ xs.T), xs, fs


def _polish(pair, dirs: np.ndarray, rounds: int = 60):
    """Cyclic coordinate descent on the direction components."""
    dirs = dirs.copy()
    best, _, _ = _config_violation(pair, dirs)
    step = 0.02
    n, d = dirs.shape
    for _ in range(rounds):
        improved = False
        for i in range(n):
            for k in range(d):
                for sgn in (1.0, -1.0):
                    trial = dirs.copy()
                    trial[i, k] += sgn * step
                    norm = np.linalg.norm(trial[i])
                    if norm == 0.0:
                        continue
                    trial[i] /= norm
                    val, _, _ = _config_violation(pair, trial)
                    if val < best:
                        dirs, best = trial, val
                        improved = True
        if best == 0.0:
            break
        if not improved:
            step *= 0.5
            if step < 1e-13:
                break
    return dirs, best


def _snap_candidates(best_dirs: np.ndarray, d: int):
    """Idealized configurations suggested by a nearly-converged search:
    an orthonormal frame (polar factor) and its signed-permutation rounding,
    each expanded to the 2d antipodal directions."""
    n = best_dirs.shape[0]
    if n != 2 * d:
        return []
    picked = [0]
    while len(picked) < d:
        scores = np.max(np.abs(best_dirs @ best_dirs[picked].T), axis=1)
        scores[picked] = np.inf
        picked.append(int(np.argmin(scores)))
    M = best_dirs[picked]
    u, _, vt = np.linalg.svd(M)
    q = u @ vt
    cands = [np.vstack([q, -q])]
    perm = np.zeros_like(q)
    for row in range(d):
        col = int(np.argmax(np.abs(q[row])))
        perm[row, col] = math.copysign(1.0, q[row, col])
    if abs(abs(np.linalg.det(perm)) - 1.0) < 1e-9:
        cands.append(np.vstack([perm, -perm]))
    return cands


def hadwiger_config_search(
    body: ConvexBody,
    target_n: int,
    iterations: int = 10**4,
    seed: int = 0,
    restarts: Optional[int] = None,
) -> SearchResult:
    """Simulated annealing over boundary directions toward a touching
    configuration of the requested size.

    Geometric cooling (T_k = 0.999^k), one direction perturbed per move with
    step proportional to the temperature. Runs several restarts, polishes the
    best configuration by coordinate descent, tries idealized snap candidates,
    and reports success only when the verified condition check passes.
    """
    if body.dim > 5:
        raise PreconditionError("search is limited to dimension at most 5")
    if not body.smooth:
        raise PreconditionError("search needs a smooth body (unique functionals)")
    d = body.dim
    if restarts is None:
        restarts = max(1, math.ceil(iterations / 10**4))
        per_restart = min(iterations, 10**4)
    else:
        per_restart = iterations

    pair = _pair_map(body)
    best_dirs = None
    best_val = math.inf
    for restart in range(restarts):
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(restart,)))
        dirs = rng.standard_normal((target_n, d))
        dirs /= np.linalg.norm(dirs, axis=1)[:, None]
        cur_val, xs, fs = _config_violation(pair, dirs)
        V = fs @ xs.T
        temp = 1.0
        gauss = rng.standard_normal((per_restart, d))
        picks = rng.integers(target_n, size=per_restart)
        coins = rng.random(per_restart)
        for step_idx in range(per_restart):
            i = int(picks[step_idx])
            u_new = dirs[i] + 0.5 * temp * gauss[step_idx]
            norm = np.linalg.norm(u_new)
            temp *= 0.999
            if norm == 0.0:
                continue
            u_new /= norm
            x_new, f_new = pair(u_new)
            row_old = V[i].copy()
            col_old = V[:, i].copy()
            V[i] = f_new @ xs.T
            V[:, i] = fs @ x_new
            V[i, i] = f_new @ x_new
            x_old, f_old = xs[i].copy(), fs[i].copy()
            xs[i], fs[i] = x_new, f_new
            t_val = _violation_matrix(V)
            delta = t_val - cur_val
            if delta <= 0.0 or coins[step_idx] < math.exp(-delta / max(temp, 1e-12)):
                dirs[i] = u_new
                cur_val = t_val
                if cur_val < best_val:
                    best_dirs, best_val = dirs.copy(), cur_val
            else:
                xs[i], fs[i] = x_old, f_old
                V[i] = row_old
                V[:, i] = col_old
    assert best_dirs is not None

    best_dirs, best_val = _polish(pair, best_dirs)
    candidates = [best_dirs] + _snap_candidates(best_dirs, d)
    best_system = None
    success = False
    for dirs in candidates:
        val, xs, fs = _config_violation(pair, dirs)
        sys_ = PairSystem(dim=d, xs=xs, fs=fs)
        if best_system is None or val < best_val:
            best_val, best_system = val, sys_
        if check_condition(sys_, "lin").holds:
            best_val, best_system, success = val, sys_, True
            break
    assert best_system is not None

    max_clean = target_n if success else _max_clean_subsystem(best_system)
    return SearchResult(
        system=best_system,
        violation=best_val,
        success=success,
        target_n=target_n,
        max_clean_n=max_clean,
        seed=seed,
    )


def _max_clean_subsystem(system: PairSystem) -> int:
    """Greedy: drop the worst offender until the lin condition holds."""
    xs, fs = system.xs.copy(), system.fs.copy()
    while xs.shape[0] > 0:
        sub = PairSystem(dim=system.dim, xs=xs, fs=fs)
        if check_condition(sub, "lin").holds:
            return sub.n
        V = sub.values()
        off = V - np.diag(np.diag(V))
        pain = np.clip(off, 0.0, None) + np.clip(-1.0 - off, 0.0, None)
        np.fill_diagonal(pain, 0.0)
        scores = pain.sum(axis=0) + pain.sum(axis=1)
        worst = int(np.argmax(scores))
        xs = np.delete(xs, worst, axis=0)
        fs = np.delete(fs, worst, axis=0)
    return 0
