"""Batch command-line front end.

Generator verbs (grid, example-5d, spiky) print bare schema objects so they
pipe straight into analysis verbs; analysis verbs print a report object with
a reproducibility header. Exit codes: 0 computed and satisfied, 1 computed
but violated/refuted, 2 inconclusive, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

import numpy as np

from . import __version__, bounds, config, constructors, io, linearization, packing, separability
from .errors import InvalidArgumentError, NotSupportedError, PreconditionError, UnboundedBodyError

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="seppack", description=__doc__)
    parser.add_argument("--version", action="version", version=f"seppack {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True)

    def add(verb, **flags):
        p = sub.add_parser(verb)
        for flag, kwargs in flags.items():
            p.add_argument(f"--{flag}", **kwargs)
        p.add_argument("--out", default=None)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=None)
        return p

    path = {"default": None}
    add("check-packing", packing=path)
    add("contacts", packing=path)
    add("certify", packing=path, **{"n-random": {"type": int, "default": 512}})
    add("rho-check", packing=path, rho={"type": float, "required": True})
    add("verify-config", system=path)
    add("conditions", system=path, which={"default": "lin"})
    add("steinitz", system=path)
    add(
        "lambda-sep",
        body=path,
        auerbach=path,
        samples={"type": int, "default": None},
        **{"lambda-max": {"type": float, "default": 1e4}},
    )
    add("iq", body=path, packing=path, samples={"type": int, "default": 10**6})
    add(
        "bounds",
        d={"type": int, "required": True},
        n={"type": int, "default": None},
        lam={"type": float, "default": 2.0},
    )
    add(
        "density",
        packing=path,
        rho={"type": float, "default": 1.0},
        delta={"type": float, "default": 1.0},
        samples={"type": int, "default": 10**6},
    )
    add("dg-cert", body=path, system=path, samples={"type": int, "default": 10**6})
    add("grid", body=path, k={"type": int, "required": True}, auerbach=path)
    add("example-5d")
    add("spiky", epsilon={"type": float, "default": 0.01})
    add(
        "search",
        body=path,
        target={"type": int, "required": True},
        iterations={"type": int, "default": 10**4},
        restarts={"type": int, "default": None},
    )
    return parser


def _load_json(path: Optional[str], what: str) -> dict:
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    elif not sys.stdin.isatty():
        text = sys.stdin.read()
    else:
        raise UsageError(f"no {what}: pass a file or pipe JSON on stdin")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(
            f"malformed JSON for {what}: {exc.msg} at line {exc.lineno} column {exc.colno}"
        ) from exc


def _emit(obj: dict, out: Optional[str]):
    text = io.dumps(_jsonable(obj))
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _report(args, result: dict) -> dict:
    tolerances = {
        "boundary_tol": config.BOUNDARY_TOL,
        "numeric_tol": config.NUMERIC_TOL,
        "touch_tol": args.tol if args.tol is not None else config.TOUCH_TOL,
        "hyperplane_rel_tol": config.HYPERPLANE_REL_TOL,
        "lp_margin": config.LP_MARGIN,
    }
    header = {
        "tool": "seppack",
        "version": __version__,
        "verb": args.verb,
        "seed": getattr(args, "seed", None),
        "tolerances": tolerances,
    }
    if hasattr(args, "samples"):
        header["samples"] = args.samples
    header["result"] = result
    return header


def _touch_tol(args) -> float:
    return args.tol if args.tol is not None else config.TOUCH_TOL


def _default_auerbach(body):
    return np.array([body.boundary_point(u) for u in np.eye(body.dim)])


def _run(args) -> int:
    verb = args.verb

    if verb == "grid":
        body = io.body_from_json(_load_json(args.body, "body"))
        auer = (
            np.asarray(_load_json(args.auerbach, "auerbach basis"), dtype=float)
            if args.auerbach
            else _default_auerbach(body)
        )
        pk = constructors.grid_packing_2d(body, auer, args.k)
        _emit(pk.to_json(), args.out)
        return EXIT_OK

    if verb == "example-5d":
        _emit(constructors.example_5d().to_json(), args.out)
        return EXIT_OK

    if verb == "spiky":
        _emit(constructors.spiky_body_3d(args.epsilon).to_json(), args.out)
        return EXIT_OK

    if verb == "check-packing":
        pk = io.packing_from_json(_load_json(args.packing, "packing"))
        rep = packing.check_packing(pk, touch_tol=_touch_tol(args))
        _emit(_report(args, rep), args.out)
        return EXIT_OK if rep["valid"] else EXIT_VIOLATED

    if verb == "contacts":
        pk = io.packing_from_json(_load_json(args.packing, "packing"))
        graph = packing.contact_graph(pk, touch_tol=_touch_tol(args))
        stats = packing.contact_statistics(graph)
        stats["edges"] = [list(e) for e in graph.edges]
        _emit(_report(args, stats), args.out)
        return EXIT_OK

    if verb == "certify":
        pk = io.packing_from_json(_load_json(args.packing, "packing"))
        cert = separability.certify_totally_separable(
            pk, n_random=args.n_random, seed=args.seed
        )
        _emit(_report(args, cert.to_json()), args.out)
        if cert.status == "certified":
            return EXIT_OK
        return EXIT_VIOLATED if cert.status == "refuted" else EXIT_INCONCLUSIVE

    if verb == "rho-check":
        pk = io.packing_from_json(_load_json(args.packing, "packing"))
        rep = separability.check_rho_separable(pk, args.rho, seed=args.seed)
        _emit(_report(args, rep), args.out)
        if rep["separable"]:
            return EXIT_OK
        statuses = {entry["status"] for entry in rep["per_center"]}
        return EXIT_VIOLATED if "refuted" in statuses else EXIT_INCONCLUSIVE

    if verb == "verify-config":
        obj = _load_json(args.system, "configuration {body, vectors}")
        body = io.body_from_json(obj["body"])
        system = linearization.from_configuration(body, np.asarray(obj["vectors"], float))
        reports = {
            name: linearization.check_condition(system, name).to_json()
            for name in linearization.CONDITIONS
        }
        result = {"system": system.to_json(), "conditions": reports}
        _emit(_report(args, result), args.out)
        return EXIT_OK if reports["lin"]["holds"] else EXIT_VIOLATED

    if verb == "conditions":
        system = io.system_from_json(_load_json(args.system, "pair system"))
        rep = linearization.check_condition(system, args.which)
        _emit(_report(args, rep.to_json()), args.out)
        return EXIT_OK if rep.holds else EXIT_VIOLATED

    if verb == "steinitz":
        obj = _load_json(args.system, "pair system or {points}")
        pts = np.asarray(obj["points"], float) if "points" in obj else io.system_from_json(obj).xs
        core = linearization.steinitz_core(pts)
        _emit(_report(args, {"core": core}), args.out)
        return EXIT_OK

    if verb == "lambda-sep":
        body = io.body_from_json(_load_json(args.body, "body"))
        auer = (
            np.asarray(_load_json(args.auerbach, "auerbach basis"), dtype=float)
            if args.auerbach
            else _default_auerbach(body)
        )
        rep = bounds.lambda_sep_estimate(
            body, auer, n_boundary=args.samples, seed=args.seed, lambda_max=args.lambda_max
        )
        _emit(_report(args, rep.to_json()), args.out)
        return EXIT_OK if math.isfinite(rep.value) else EXIT_INCONCLUSIVE

    if verb == "iq":
        if args.packing:
            pk = io.packing_from_json(_load_json(args.packing, "packing"))
            target = bounds.TranslateUnion(pk.body, pk.centers)
        else:
            target = io.body_from_json(_load_json(args.body, "body"))
        rep = bounds.isoperimetric_ratio(target, samples=args.samples, seed=args.seed)
        _emit(_report(args, rep.to_json()), args.out)
        return EXIT_OK

    if verb == "bounds":
        result = {"hadwiger": bounds.hadwiger_bounds(args.d)}
        if args.n is not None and args.n > 1:
            result["csep_simplified"] = bounds.csep_simplified_bound(args.d, args.n, args.lam)
            if args.d == 2:
                result["planar"] = bounds.planar_bound(args.n)
        _emit(_report(args, result), args.out)
        return EXIT_OK

    if verb == "density":
        pk = io.packing_from_json(_load_json(args.packing, "packing"))
        rep = bounds.density_check(pk, args.rho, args.delta, samples=args.samples, seed=args.seed)
        _emit(_report(args, rep.to_json()), args.out)
        return EXIT_OK if rep.satisfied else EXIT_VIOLATED

    if verb == "dg-cert":
        body = io.body_from_json(_load_json(args.body, "body"))
        system = io.system_from_json(_load_json(args.system, "pair system"))
        rep = bounds.halved_translates_certificate(body, system, samples=args.samples, seed=args.seed)
        _emit(_report(args, rep), args.out)
        if not rep["ok"]:
            return EXIT_VIOLATED
        return EXIT_INCONCLUSIVE if rep["strict_status"] == "inconclusive" else EXIT_OK

    if verb == "search":
        body = io.body_from_json(_load_json(args.body, "body"))
        res = constructors.hadwiger_config_search(
            body, args.target, iterations=args.iterations, seed=args.seed, restarts=args.restarts
        )
        _emit(_report(args, res.to_json()), args.out)
        return EXIT_OK if res.success else EXIT_VIOLATED

    raise UsageError(f"unknown verb {verb!r}")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _run(args)
    except UsageError as exc:
        print(f"seppack: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidArgumentError, UnboundedBodyError, NotSupportedError, FileNotFoundError, KeyError) as exc:
        print(f"seppack: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"seppack: precondition violated: {exc}", file=sys.stderr)
        return EXIT_VIOLATED


if __name__ == "__main__":
    sys.exit(main())
