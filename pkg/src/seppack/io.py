"""JSON schemas for bodies, packings, and pair systems (see /schemas)."""

from __future__ import annotations

import json
from typing import Union

import numpy as np

from . import bodies
from .errors import InvalidArgumentError
from .linearization import PairSystem
from .packing import Packing


def body_from_json(obj: dict) -> bodies.ConvexBody:
    try:
        dim = int(obj["dim"])
        kind = obj["kind"]
        params = obj.get("params", {})
    except (KeyError, TypeError) as exc:
        raise InvalidArgumentError(f"malformed body object: {exc}") from exc
    if kind == "ball":
        return bodies.ball(dim)
    if kind == "ellipsoid":
        return bodies.ellipsoid(params["matrix"])
    if kind == "p-ball":
        return bodies.p_ball(float(params["p"]), dim)
    if kind == "polytope-H":
        return bodies.polytope_h(params["halfspaces"])
    if kind == "polytope-V":
        return bodies.polytope_v(params["vertices"])
    if kind == "smoothed-polytope":
        return bodies.smoothed_polytope(params["vertices"], float(params["epsilon"]))
    if kind == "slab-intersection":
        return bodies.slab_intersection(params["functionals"])
    raise InvalidArgumentError(f"unknown body kind {kind!r}")


def packing_from_json(obj: dict) -> Packing:
    try:
        body = body_from_json(obj["body"])
        centers = np.asarray(obj["centers"], dtype=float)
    except (KeyError, TypeError) as exc:
        raise InvalidArgumentError(f"malformed packing object: {exc}") from exc
    return Packing(body, centers)


def system_from_json(obj: dict) -> PairSystem:
    try:
        dim = int(obj["dim"])
        xs = [pair["x"] for pair in obj["pairs"]]
        fs = [pair["f"] for pair in obj["pairs"]]
    except (KeyError, TypeError) as exc:
        raise InvalidArgumentError(f"malformed pair-system object: {exc}") from exc
    return PairSystem(dim=dim, xs=np.asarray(xs, float), fs=np.asarray(fs, float))


def loads(text: str) -> dict:
    return json.loads(text)


def dumps(obj: Union[dict, list]) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"
