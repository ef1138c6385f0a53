"""Total-separability certification with explicit hyperplane witnesses.

For a fixed normal direction f the constraint "the hyperplane f(x) = c avoids
the interior of every translate" is one-dimensional: translate x_k + K
occupies the interval [f(x_k) - h(-f), f(x_k) + h(f)], so valid offsets are
exactly the points outside every open interval. Offsets are therefore found
exactly (by sorting endpoints) and only the direction search is heuristic.
For polytope bodies, facet normals plus pairwise difference directions are an
exhaustive candidate set, so failure there is reported as a refutation; for
smooth bodies failure is only ever "inconclusive".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .config import HYPERPLANE_REL_TOL, TOUCH_TOL
from .errors import InvalidArgumentError, PreconditionError
from .packing import Packing, check_packing

POLYTOPE_KINDS = ("polytope-H", "polytope-V", "slab-intersection")


@dataclass
class Hyperplane:
    normal: np.ndarray
    offset: float

    def __post_init__(self):
        self.normal = np.asarray(self.normal, dtype=float)
        if not np.any(self.normal):
            raise InvalidArgumentError("hyperplane normal must be nonzero")

    def to_json(self) -> dict:
        return {"normal": self.normal.tolist(), "offset": float(self.offset)}


@dataclass
class SeparabilityCertificate:
    n: int
    status: str  # "certified" | "refuted" | "inconclusive"
    pair_witnesses: Dict[Tuple[int, int], Hyperplane] = field(default_factory=dict)
    failed_pairs: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.status == "certified"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "status": self.status,
            "failed_pairs": [list(p) for p in self.failed_pairs],
            "pairs": {f"{i},{j}": h.to_json() for (i, j), h in self.pair_witnesses.items()},
        }


def _intervals(packing: Packing, f: np.ndarray):
    """Per-member occupied intervals along functional f."""
    body = packing.body
    h_plus = body.support(f)
    h_minus = body.support(-f)
    vals = packing.centers @ f
    return vals - h_minus, vals + h_plus


def _certificate_tol(packing: Packing, f: np.ndarray, c: float) -> float:
    body = packing.body
    scale = body.support(f) + body.support(-f) + abs(c)
    return HYPERPLANE_REL_TOL * max(scale, 1e-300)


def verify_hyperplane(packing: Packing, i: int, j: int, plane: Hyperplane) -> bool:
    """Does the plane separate members i and j while avoiding every interior?"""
    n = packing.n
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise InvalidArgumentError("need two distinct valid member indices")
    f, c = plane.normal, float(plane.offset)
    if f.shape != (packing.body.dim,):
        raise InvalidArgumentError("normal dimension mismatch")
    lo, hi = _intervals(packing, f)
    tol = _certificate_tol(packing, f, c)
    below = hi <= c + tol
    above = lo >= c - tol
    if not ((below[i] and above[j]) or (below[j] and above[i])):
        return False
    return bool(np.all(below | above))


def _best_offset(lo: np.ndarray, hi: np.ndarray, i: int, j: int) -> Optional[Tuple[float, float]]:
    """Best offset (max stabbing slack) separating i and j, or None.

    The slack at c is min_k max(lo_k - c, c - hi_k): negative iff c is interior
    to member k's interval. The optimum over the separation window is attained
    at an endpoint or a midpoint between consecutive endpoints, all enumerated.
    """
    if hi[i] <= hi[j]:
        win_lo, win_hi = hi[i], lo[j]
    else:
        win_lo, win_hi = hi[j], lo[i]
    span = float(hi.max() - lo.min())
    if win_lo > win_hi + 1e-9 * max(span, 1e-300):
        return None
    if win_lo > win_hi:  # numerically touching pair: collapse the window
        win_lo = win_hi = 0.5 * (win_lo + win_hi)

    events = np.concatenate([lo, hi, [win_lo, win_hi]])
    events = events[(events >= win_lo) & (events <= win_hi)]
    events = np.unique(events)
    mids = 0.5 * (events[1:] + events[:-1]) if events.size > 1 else np.zeros(0)
    candidates = np.concatenate([events, mids])

    margins = np.maximum(lo[None, :] - candidates[:, None], candidates[:, None] - hi[None, :])
    slack = margins.min(axis=1)
    best = int(np.argmax(slack))
    return float(candidates[best]), float(slack[best])


def _slack_for_direction(packing: Packing, f: np.ndarray, i: int, j: int):
    lo, hi = _intervals(packing, f)
    found = _best_offset(lo, hi, i, j)
    if found is None:
        return None, -np.inf
    return found[0], found[1]


def _candidate_directions(
    packing: Packing, i: int, j: int, n_random: int, seed: int
) -> List[np.ndarray]:
    body = packing.body
    d = body.dim
    sym = packing.symmetrized
    cands: List[np.ndarray] = []

    diff = packing.centers[j] - packing.centers[i]
    g = sym.gauge(diff)
    if abs(g - 2.0) <= TOUCH_TOL * 4:
        # supporting functional at the touching point of the symmetrized body
        try:
            cands.append(np.asarray(sym.supporting_functional(diff / g), dtype=float))
        except PreconditionError:
            pass
    cands.extend(np.eye(d))
    if np.any(diff):
        cands.append(diff.copy())
    if body.kind in POLYTOPE_KINDS and body.rows is not None:
        cands.extend(body.rows)
        if sym is not body and sym.rows is not None:
            cands.extend(sym.rows)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(i, j)))
    for _ in range(n_random):
        v = rng.standard_normal(d)
        if np.any(v):
            cands.append(v)
    out = []
    for v in cands:
        nv = np.linalg.norm(v)
        if nv > 0:
            out.append(v / nv)
    return out


def _refine_direction(packing: Packing, i: int, j: int, f0: np.ndarray, steps: int):
    f = f0.copy()
    c, slack = _slack_for_direction(packing, f, i, j)
    step = 0.1
    d = f.size
    for _ in range(steps):
        improved = False
        for k in range(d):
            for sgn in (1.0, -1.0):
                trial = f.copy()
                trial[k] += sgn * step
                nv = np.linalg.norm(trial)
                if nv == 0:
                    continue
                trial /= nv
                c2, s2 = _slack_for_direction(packing, trial, i, j)
                if s2 > slack:
                    f, c, slack = trial, c2, s2
                    improved = True
        if not improved:
            step *= 0.5
            if step < 1e-9:
                break
    return f, c, slack


def separating_hyperplane(
    packing: Packing,
    i: int,
    j: int,
    n_random: int = 512,
    refine_steps: int = 50,
    seed: int = 0,
) -> Optional[Hyperplane]:
    """Search a hyperplane separating i, j and avoiding all interiors.

    Returns the maximal-slack witness, or None when every candidate direction
    fails (inconclusive for smooth bodies; for polytopes the candidate set is
    exhaustive and the caller may treat None as a refutation).
    """
    best: Optional[Tuple[np.ndarray, float, float]] = None
    for f in _candidate_directions(packing, i, j, n_random, seed):
        c, slack = _slack_for_direction(packing, f, i, j)
        if c is not None and (best is None or slack > best[2]):
            best = (f, c, slack)
    if best is not None and refine_steps > 0:
        f, c, slack = _refine_direction(packing, i, j, best[0], refine_steps)
        if slack > best[2]:
            best = (f, c, slack)
    if best is None:
        return None
    f, c, slack = best
    tol = _certificate_tol(packing, f, c)
    if slack < -tol:
        return None
    plane = Hyperplane(f, c)
    return plane if verify_hyperplane(packing, i, j, plane) else None


def _axis_witnesses(packing: Packing) -> List[Hyperplane]:
    """Cheap shared witnesses: axis directions, facet normals, grid normals."""
    body = packing.body
    dirs: List[np.ndarray] = list(np.eye(body.dim))
    if body.kind in POLYTOPE_KINDS and body.rows is not None:
        dirs.extend(body.rows)
    sym = packing.symmetrized
    # directions of touching pairs' supporting functionals, deduplicated
    iu, ju, vals = packing.pair_gauges()
    touch = np.abs(vals - 2.0) <= TOUCH_TOL
    seen = set()
    for i, j in zip(iu[touch], ju[touch]):
        diff = packing.centers[j] - packing.centers[i]
        try:
            f = np.asarray(sym.supporting_functional(diff / sym.gauge(diff)), dtype=float)
        except PreconditionError:
            continue
        key = tuple(np.round(f / np.linalg.norm(f), 9))
        if key not in seen:
            seen.add(key)
            dirs.append(f)

    planes: List[Hyperplane] = []
    for f in dirs:
        nv = np.linalg.norm(f)
        if nv == 0:
            continue
        f = f / nv
        lo, hi = _intervals(packing, f)
        tol = _certificate_tol(packing, f, 0.0)
        # Block sweep: every boundary between maximal overlapping runs of
        # intervals yields a valid cutting offset.
        order = np.argsort(lo)
        run_hi = -np.inf
        for idx in order:
            if lo[idx] >= run_hi - tol and np.isfinite(run_hi):
                planes.append(Hyperplane(f.copy(), 0.5 * (run_hi + lo[idx])))
            run_hi = max(run_hi, hi[idx])
    return planes


def certify_totally_separable(
    packing: Packing,
    n_random: int = 512,
    refine_steps: int = 50,
    seed: int = 0,
) -> SeparabilityCertificate:
    """Witness search over all pairs; shared witnesses are reused."""
    report = check_packing(packing)
    if not report["valid"]:
        raise PreconditionError("not a valid packing")
    n = packing.n
    cert = SeparabilityCertificate(n=n, status="certified")
    if n == 1:
        return cert

    witnesses = _axis_witnesses(packing)
    coverage: Dict[Tuple[int, int], Hyperplane] = {}
    for plane in witnesses:
        lo, hi = _intervals(packing, plane.normal)
        tol = _certificate_tol(packing, plane.normal, plane.offset)
        below = hi <= plane.offset + tol
        above = lo >= plane.offset - tol
        if not np.all(below | above):
            continue
        bel = np.flatnonzero(below & ~above)
        abv = np.flatnonzero(above & ~below)
        for i in bel:
            for j in abv:
                key = (int(min(i, j)), int(max(i, j)))
                coverage.setdefault(key, plane)

    failed: List[Tuple[int, int]] = []
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) in coverage:
                cert.pair_witnesses[(i, j)] = coverage[(i, j)]
                continue
            plane = separating_hyperplane(packing, i, j, n_random, refine_steps, seed)
            if plane is None:
                failed.append((i, j))
            else:
                cert.pair_witnesses[(i, j)] = plane

    if failed:
        cert.failed_pairs = failed
        exhaustive = packing.body.kind in POLYTOPE_KINDS
        cert.status = "refuted" if exhaustive else "inconclusive"
    return cert


def check_rho_separable(packing: Packing, rho: float, seed: int = 0, **search_kwargs) -> dict:
    """Certify the sub-packing seen inside every rho-scaled window.

    Member j belongs to the window of member i iff x_j + K is contained in
    x_i + rho*K, i.e. gauge(x_j - x_i) <= rho - 1.
    """
    if rho < 1.0:
        raise InvalidArgumentError("rho must be at least 1")
    sym = packing.symmetrized
    per_center = []
    ok = True
    for i in range(packing.n):
        g = sym.gauge_many(packing.centers - packing.centers[i])
        members = np.flatnonzero(g <= rho - 1.0 + TOUCH_TOL)
        sub = Packing(packing.body, packing.centers[members])
        cert = certify_totally_separable(sub, seed=seed, **search_kwargs)
        per_center.append(
            {
                "center": int(i),
                "window_members": [int(m) for m in members],
                "status": cert.status,
            }
        )
        ok = ok and cert.certified
    return {"rho": rho, "separable": ok, "per_center": per_center}
