"""Finite translate packings and their contact graphs.

Centers x_i place translates x_i + K. Overlap and touching are decided by the
gauge of the symmetrized body: translates overlap iff gauge(x_i - x_j) < 2 and
touch iff it equals 2, up to the touching tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .bodies import ConvexBody, minkowski_symmetrize
from .config import TOUCH_TOL
from .errors import InvalidArgumentError, PreconditionError


@dataclass(eq=False)
class Packing:
    body: ConvexBody
    centers: np.ndarray
    _sym: Optional[ConvexBody] = field(default=None, repr=False)

    def __post_init__(self):
        self.centers = np.atleast_2d(np.asarray(self.centers, dtype=float))
        if self.centers.shape[0] < 1:
            raise InvalidArgumentError("a packing needs at least one center")
        if self.centers.shape[1] != self.body.dim:
            raise InvalidArgumentError("center dimension does not match the body")

    @property
    def n(self) -> int:
        return self.centers.shape[0]

    @property
    def symmetrized(self) -> ConvexBody:
        if self._sym is None:
            self._sym = minkowski_symmetrize(self.body)
        return self._sym

    def pair_gauges(self):
        """Condensed pairwise gauge values and the matching index pairs."""
        n = self.n
        iu, ju = np.triu_indices(n, k=1)
        diffs = self.centers[iu] - self.centers[ju]
        vals = self.symmetrized.gauge_many(diffs) if len(diffs) else np.zeros(0)
        return iu, ju, vals

    def to_json(self) -> dict:
        return {"body": self.body.to_json(), "centers": self.centers.tolist()}


@dataclass
class ContactGraph:
    n: int
    edges: List[Tuple[int, int]]

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=int)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg


def check_packing(packing: Packing, touch_tol: float = TOUCH_TOL) -> dict:
    """Validity report: no pair may have gauge below 2 - touch_tol."""
    iu, ju, vals = packing.pair_gauges()
    bad = vals < 2.0 - touch_tol
    violations = [
        {"pair": (int(i), int(j)), "gauge": float(g)}
        for i, j, g in zip(iu[bad], ju[bad], vals[bad])
    ]
    return {"valid": not violations, "violations": violations}


def contact_graph(packing: Packing, touch_tol: float = TOUCH_TOL) -> ContactGraph:
    report = check_packing(packing, touch_tol)
    if not report["valid"]:
        raise PreconditionError(f"not a packing: {len(report['violations'])} overlapping pairs")
    iu, ju, vals = packing.pair_gauges()
    touching = np.abs(vals - 2.0) <= touch_tol
    edges = [(int(i), int(j)) for i, j in zip(iu[touching], ju[touching])]
    return ContactGraph(n=packing.n, edges=edges)


def contact_statistics(graph: ContactGraph) -> dict:
    deg = graph.degrees()
    histogram: Dict[int, int] = {}
    for v in deg:
        histogram[int(v)] = histogram.get(int(v), 0) + 1
    return {
        "contact_number": len(graph.edges),
        "max_degree": int(deg.max()) if graph.n else 0,
        "degree_histogram": histogram,
    }
