"""Deterministic low-discrepancy direction sets on the unit sphere."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import ndtri

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19)


def van_der_corput(n: int, base: int, start: int = 1) -> np.ndarray:
    out = np.empty(n)
    for i in range(n):
        k = start + i
        v, denom = 0.0, 1.0
        while k > 0:
            denom *= base
            k, rem = divmod(k, base)
            v += rem / denom
        out[i] = v
    return out


def halton(n: int, d: int) -> np.ndarray:
    return np.stack([van_der_corput(n, _PRIMES[k]) for k in range(d)], axis=1)


def _random_rotation(d: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(0xD17,)))
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


def sphere_directions(d: int, n: int, seed: int = 0) -> np.ndarray:
    """n roughly equidistributed unit directions, deterministic given seed.

    d = 1 alternates the two directions; d = 2 uses an equispaced fan; higher
    dimensions map Halton points through the normal quantile and normalize.
    A seed-keyed rotation decouples the set from the coordinate axes.
    """
    if d == 1:
        return np.array([[1.0] if k % 2 == 0 else [-1.0] for k in range(n)])
    if d == 2:
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(0xD17,)))
        theta = 2.0 * math.pi * (np.arange(n) + 0.5) / n + rng.uniform(0.0, 2.0 * math.pi)
        return np.stack([np.cos(theta), np.sin(theta)], axis=1)
    u = np.clip(halton(n, d), 1e-12, 1.0 - 1e-12)
    g = ndtri(u)
    norms = np.linalg.norm(g, axis=1)
    norms[norms == 0.0] = 1.0
    return (g / norms[:, None]) @ _random_rotation(d, seed).T
