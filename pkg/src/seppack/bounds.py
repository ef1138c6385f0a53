"""Quantitative bounds: degree/count limits, coverage scale, isoperimetry,
packing density, and the halved-translate volume certificate."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import kernels, mc
from .bodies import (
    ConvexBody,
    analytic_surface,
    analytic_volume,
    ball_volume,
    is_auerbach_basis,
    surface_area_estimate,
    volume_estimate,
)
from .errors import InvalidArgumentError, PreconditionError
from .linearization import PairSystem
from .packing import Packing
from .sampling import sphere_directions
from .separability import check_rho_separable


@dataclass
class BoundReport:
    name: str
    value: float
    stderr: float = 0.0
    inputs: dict = field(default_factory=dict)
    satisfied: Optional[bool] = None

    def __post_init__(self):
        if self.stderr < 0:
            raise InvalidArgumentError("stderr must be nonnegative")

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "value": self.value,
            "stderr": self.stderr,
            "inputs": self.inputs,
        }
        if self.satisfied is not None:
            out["satisfied"] = bool(self.satisfied)
        return out


@dataclass
class TranslateUnion:
    """Union of translates centers[i] + scale*body, for isoperimetric checks."""

    body: ConvexBody
    centers: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        self.centers = np.atleast_2d(np.asarray(self.centers, dtype=float))
        if self.scale <= 0:
            raise InvalidArgumentError("scale must be positive")


def hadwiger_bounds(d: int) -> dict:
    """Degree bounds for touching configurations in dimension d."""
    if d < 1:
        raise InvalidArgumentError("dimension must be positive")
    return {
        "lower": 2 * d,
        "upper_general": 3**d - 1,
        "upper_smooth_high_d": 2 ** (d + 1) - 3 if d >= 5 else None,
        "h_sep_low_d": d if d <= 4 else None,
    }


def lambda_sep_estimate(
    body: ConvexBody,
    auerbach,
    n_boundary: Optional[int] = None,
    seed: int = 0,
    lambda_max: float = 1e4,
    width: float = 1e-3,
) -> BoundReport:
    """Smallest scale lambda at which the 2d scaled touching translates cover
    the scaled body, estimated on sampled boundary points.

    lambda is feasible iff every boundary point b has some i with
    b - (2/lambda)*(+-a_i) back in the body; the floor lambda >= 2 guards the
    origin, which the boundary criterion does not see. Feasibility is monotone
    in lambda (ray exit times), so bisection applies.
    """
    auer = np.atleast_2d(np.asarray(auerbach, dtype=float))
    if not is_auerbach_basis(body, auer):
        raise PreconditionError("points do not form an Auerbach basis of the body")
    d = body.dim
    if n_boundary is None:
        n_boundary = 4096 if d <= 3 else 32768
    spec = body.kernel_spec
    dirs = sphere_directions(d, n_boundary, seed)
    bpoints = dirs / kernels.gauge_many(spec, dirs)[:, None]
    translates = np.vstack([auer, -auer])  # (2d, d)

    chunk = 4096

    def feasible(lam: float) -> bool:
        step = 2.0 / lam
        for start in range(0, n_boundary, chunk):
            pts = bpoints[start : start + chunk]
            cand = pts[:, None, :] - step * translates[None, :, :]
            hit = kernels.member_many(spec, cand.reshape(-1, d), 1.0 + 1e-9)
            if not hit.reshape(pts.shape[0], -1).any(axis=1).all():
                return False
        return True

    inputs = {
        "n_boundary": n_boundary,
        "seed": seed,
        "lambda_max": lambda_max,
        "floor": 2.0,
    }
    if feasible(2.0):
        return BoundReport("lambda_sep", 2.0, 0.0, inputs, satisfied=True)
    if not feasible(lambda_max):
        inputs["exceeds_lambda_max"] = True
        return BoundReport("lambda_sep", math.inf, 0.0, inputs, satisfied=None)
    lo, hi = 2.0, lambda_max
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    value = 0.5 * (lo + hi)
    return BoundReport("lambda_sep", value, 0.5 * (hi - lo), inputs, satisfied=value >= 2.0)


# ---------------------------------------------------------------------------
# Isoperimetric ratio
# ---------------------------------------------------------------------------


def isoperimetric_ratio(
    obj: Union[ConvexBody, TranslateUnion], samples: int = 10**6, seed: int = 0
) -> BoundReport:
    """(surface measure)^d / (volume)^(d-1); analytic where possible."""
    if isinstance(obj, ConvexBody):
        d = obj.dim
        vol = analytic_volume(obj)
        sur = analytic_surface(obj)
        if vol is not None and sur is not None:
            value = sur**d / vol ** (d - 1)
            return BoundReport("isoperimetric_ratio", value, 0.0, {"method": "analytic"})
        vol, vol_err = (vol, 0.0) if vol is not None else volume_estimate(obj, samples, seed)
        sur, sur_err = (
            (sur, 0.0) if sur is not None else surface_area_estimate(obj, samples, seed)
        )
        method = "monte-carlo"
    else:
        d = obj.body.dim
        vol, vol_err, sur, sur_err = _union_measures(obj, samples, seed)
        method = "monte-carlo-union"
    if vol <= 0:
        raise InvalidArgumentError("degenerate volume")
    value = sur**d / vol ** (d - 1)
    rel = math.sqrt((d * sur_err / sur) ** 2 + ((d - 1) * vol_err / vol) ** 2)
    return BoundReport(
        "isoperimetric_ratio",
        value,
        abs(value) * rel,
        {"method": method, "samples": samples, "seed": seed,
         "volume": vol, "surface": sur},
    )


def _union_measures(union: TranslateUnion, samples: int, seed: int):
    spec = union.body.kernel_spec
    eps = 1e-3 * spec.r_out * union.scale
    reach = union.scale * spec.r_out + eps
    lo = union.centers.min(axis=0) - reach
    hi = union.centers.max(axis=0) + reach
    box_vol = float(np.prod(hi - lo))
    c_in, c_shell = mc.indicator_counts(
        lo,
        hi,
        samples,
        seed,
        [
            lambda X: kernels.union_member_many(spec, union.centers, union.scale, X),
            lambda X: kernels.union_shell_member_many(spec, union.centers, union.scale, X, eps)
            & ~kernels.union_member_many(spec, union.centers, union.scale, X),
        ],
    )
    vol, vol_err = mc.scaled_estimate(c_in, samples, box_vol)
    shell, shell_err = mc.scaled_estimate(c_shell, samples, box_vol)
    return vol, vol_err, shell / eps, shell_err / eps


# ---------------------------------------------------------------------------
# Density and contact-count bounds
# ---------------------------------------------------------------------------


def density_check(
    packing: Packing,
    rho: float,
    delta: float,
    samples: int = 10**6,
    seed: int = 0,
    verify_rho: bool = True,
) -> BoundReport:
    """n vol(K) over the volume of the union of 2*rho-scaled windows.

    For a rho-separable packing this ratio cannot exceed the separable packing
    density, so with delta = 1 it is an unconditional sanity bound.
    """
    if not (0.0 < delta <= 1.0):
        raise InvalidArgumentError("delta must lie in (0, 1]")
    if verify_rho:
        rep = check_rho_separable(packing, rho)
        if not rep["separable"]:
            raise PreconditionError("packing is not rho-separable at this rho")
    body = packing.body
    vol_k = analytic_volume(body)
    vol_err = 0.0
    if vol_k is None:
        vol_k, vol_err = volume_estimate(body, samples, seed + 1)
    spec = body.kernel_spec
    scale = 2.0 * rho
    reach = scale * spec.r_out
    lo = packing.centers.min(axis=0) - reach
    hi = packing.centers.max(axis=0) + reach
    box_vol = float(np.prod(hi - lo))
    (count,) = mc.indicator_counts(
        lo,
        hi,
        samples,
        seed,
        [lambda X: kernels.union_member_many(spec, packing.centers, scale, X)],
    )
    union_vol, union_err = mc.scaled_estimate(count, samples, box_vol)
    ratio = packing.n * vol_k / union_vol
    rel = math.sqrt((union_err / union_vol) ** 2 + ((vol_err / vol_k) ** 2 if vol_k else 0.0))
    stderr = abs(ratio) * rel
    return BoundReport(
        "density_ratio",
        ratio,
        stderr,
        {"rho": rho, "delta": delta, "samples": samples, "seed": seed,
         "union_volume": union_vol, "body_volume": vol_k, "n": packing.n},
        satisfied=ratio <= delta + 3.0 * stderr,
    )


def csep_upper_bound(d: int, n: int, lam: float, delta: float, iq_ratio: float) -> float:
    """Contact-count bound dn - n^((d-1)/d) iq^(1/d) / (2 lam^(d-1) delta^((d-1)/d))."""
    if n <= 1:
        raise InvalidArgumentError("n must exceed 1")
    if lam < 2.0:
        raise InvalidArgumentError("lambda must be at least 2")
    if not (0.0 < delta <= 1.0) or not (0.0 < iq_ratio <= 1.0):
        raise InvalidArgumentError("delta and iq_ratio must lie in (0, 1]")
    frac = (d - 1) / d
    return d * n - n**frac * iq_ratio ** (1.0 / d) / (2.0 * lam ** (d - 1) * delta**frac)


def csep_simplified_bound(d: int, n: int, lam: float) -> float:
    """dn - n^((d-1)/d) vol(B^d)^(1/d) / (4 lam^(d-1))."""
    if n <= 1:
        raise InvalidArgumentError("n must exceed 1")
    if lam < 2.0:
        raise InvalidArgumentError("lambda must be at least 2")
    return d * n - n ** ((d - 1) / d) * ball_volume(d) ** (1.0 / d) / (4.0 * lam ** (d - 1))


def planar_bound(n: int) -> float:
    """2n - (sqrt(pi)/8) sqrt(n), the planar contact-count bound."""
    if n <= 1:
        raise InvalidArgumentError("n must exceed 1")
    return 2.0 * n - (math.sqrt(math.pi) / 8.0) * math.sqrt(n)


# ---------------------------------------------------------------------------
# Halved-translate volume certificate
# ---------------------------------------------------------------------------


def halved_translates_certificate(
    body: ConvexBody, system: PairSystem, samples: int = 10**6, seed: int = 0
) -> dict:
    """Volume certificate behind the high-dimension degree bound.

    From each pair (x_i, f_i) build H_i = (K cap {f_i >= 0})/2 + x_i/2. Checks:
    (a) every H_i stays in K minus the open half-scale interior, (b) the H_i
    are pairwise non-overlapping, (c) vol(H_i) = 2^-(d+1) vol(K), and for a
    smooth body (d) the enlarged cap K cap {f_1 >= 1/2} strictly beats that
    volume. All Monte Carlo at 3-sigma resolution on one shared stream.
    """
    if not body.osym:
        raise PreconditionError("body must be o-symmetric")
    d = body.dim
    n = system.n
    spec = body.kernel_spec
    for x in system.xs:
        g = body.gauge(x)
        if abs(g - 1.0) > 1e-6:
            raise PreconditionError("system vectors must lie on the boundary")
    R = spec.r_out
    lo, hi = np.full(d, -R), np.full(d, R)
    box_vol = float(np.prod(hi - lo))

    def in_k(X):
        return kernels.member_many(spec, X, 1.0)

    def make_half(i):
        x_i = system.xs[i]
        f_i = system.fs[i]

        def half(X):
            W = 2.0 * X - x_i[None, :]
            return kernels.member_many(spec, W, 1.0) & (W @ f_i >= 0.0)

        return half

    def strict_half(X):
        return kernels.member_many(spec, X, 1.0) & (X @ system.fs[0] >= 0.5)

    def make_violation(i):
        half = make_half(i)

        def violation(X):
            inner = kernels.member_many(spec, X, 0.5 * (1.0 - 1e-9))
            return half(X) & (~kernels.member_many(spec, X, 1.0 + 1e-9) | inner)

        return violation

    fns = [in_k] + [make_half(i) for i in range(n)]
    fns.append(strict_half)
    fns += [make_violation(i) for i in range(n)]
    counts, joint = mc.indicator_matrix_counts(lo, hi, samples, seed, fns)

    k_count = int(counts[0])
    half_counts = counts[1 : n + 1]
    strict_count = int(counts[n + 1])
    violation_counts = counts[n + 2 :]
    target = 2.0 ** -(d + 1)

    vol_k, vol_k_err = mc.scaled_estimate(k_count, samples, box_vol)
    ratios = []
    ratio_ok = True
    for i in range(n):
        r, r_err = mc.ratio_estimate(int(half_counts[i]), k_count, samples)
        ratios.append({"i": i, "ratio": r, "stderr": r_err,
                       "ok": bool(abs(r - target) <= 3.0 * r_err)})
        ratio_ok = ratio_ok and ratios[-1]["ok"]

    overlap_ok = True
    overlaps = []
    for i in range(n):
        for j in range(i + 1, n):
            cnt = int(joint[1 + i, 1 + j])
            vol, _ = mc.scaled_estimate(cnt, samples, box_vol)
            err = mc.conservative_stderr(cnt, samples, box_vol)
            ok = vol <= 3.0 * err
            overlaps.append({"pair": (i, j), "volume": vol, "stderr": err, "ok": bool(ok)})
            overlap_ok = overlap_ok and ok

    containment_ok = True
    containments = []
    for i in range(n):
        cnt = int(violation_counts[i])
        vol, _ = mc.scaled_estimate(cnt, samples, box_vol)
        err = mc.conservative_stderr(cnt, samples, box_vol)
        ok = vol <= 3.0 * err
        containments.append({"i": i, "violation_volume": vol, "stderr": err, "ok": bool(ok)})
        containment_ok = containment_ok and ok

    strict_vol, strict_err = mc.scaled_estimate(strict_count, samples, box_vol)
    surplus = strict_vol - target * vol_k
    surplus_err = math.sqrt(strict_err**2 + (target * vol_k_err) ** 2)
    strict_status = "not-applicable"
    if body.smooth:
        strict_status = "confirmed" if surplus > 3.0 * surplus_err else "inconclusive"

    return {
        "d": d,
        "n": n,
        "samples": samples,
        "seed": seed,
        "target_ratio": target,
        "volume": vol_k,
        "ratios": ratios,
        "ratios_ok": bool(ratio_ok),
        "overlaps": overlaps,
        "overlaps_ok": bool(overlap_ok),
        "containment": containments,
        "containment_ok": bool(containment_ok),
        "strict_cap_volume": strict_vol,
        "strict_surplus": surplus,
        "strict_surplus_stderr": surplus_err,
        "strict_status": strict_status,
        "ok": bool(ratio_ok and overlap_ok and containment_ok),
    }
