"""Deterministic chunked Monte Carlo sampling.

Samples are drawn in fixed-size chunks; each chunk uses its own generator
spawned from the master seed, so estimates are reproducible bit-for-bit and
do not depend on how chunks would be distributed across workers.
"""

from __future__ import annotations

import math
from typing import Callable, List, Sequence

import numpy as np

CHUNK = 1 << 16


def chunk_rngs(seed: int, n_chunks: int):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n_chunks)]


def sample_chunks(lo, hi, samples: int, seed: int):
    """Yield uniform sample chunks over the box [lo, hi]."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    n_chunks = (samples + CHUNK - 1) // CHUNK
    rngs = chunk_rngs(seed, n_chunks)
    remaining = samples
    for rng in rngs:
        n = min(CHUNK, remaining)
        remaining -= n
        yield lo + (hi - lo) * rng.random((n, lo.size))


def indicator_counts(lo, hi, samples: int, seed: int, fns: Sequence[Callable]) -> List[int]:
    """Hit counts of several membership indicators over one shared stream."""
    counts = [0] * len(fns)
    for pts in sample_chunks(lo, hi, samples, seed):
        for i, fn in enumerate(fns):
            counts[i] += int(np.count_nonzero(fn(pts)))
    return counts


def indicator_matrix_counts(lo, hi, samples: int, seed: int, fns: Sequence[Callable]):
    """Per-indicator counts plus the pairwise joint-hit count matrix."""
    k = len(fns)
    counts = np.zeros(k, dtype=np.int64)
    joint = np.zeros((k, k), dtype=np.int64)
    for pts in sample_chunks(lo, hi, samples, seed):
        B = np.stack([np.asarray(fn(pts), dtype=bool) for fn in fns], axis=1)
        counts += B.sum(axis=0)
        joint += (B.astype(np.int64).T @ B.astype(np.int64))
    return counts, joint


def scaled_estimate(count: int, samples: int, box_vol: float):
    """(volume estimate, binomial standard error) from a hit count."""
    p = count / samples
    err = box_vol * math.sqrt(max(p * (1.0 - p), 0.0) / samples)
    return box_vol * p, err


def conservative_stderr(count: int, samples: int, box_vol: float) -> float:
    """Standard error that stays positive at zero hits (Poisson floor)."""
    p = max(count, 1.0) / samples
    return box_vol * math.sqrt(p * (1.0 - min(p, 1.0 - 1e-12)) / samples)


def ratio_estimate(count_num: int, count_den: int, samples: int):
    """Ratio of two indicator fractions with a propagated standard error."""
    if count_den == 0:
        return math.inf, math.inf
    r = count_num / count_den
    pn = count_num / samples
    pd = count_den / samples
    var_n = pn * (1.0 - pn) / samples
    var_d = pd * (1.0 - pd) / samples
    rel = math.sqrt(var_n / pn**2 + var_d / pd**2) if count_num > 0 else math.sqrt(var_d) / pd
    return r, abs(r) * rel if count_num > 0 else math.sqrt(var_n) / pd
