"""Command-line interface.

Exit codes: 0 pass, 1 inequality violation, 2 invalid input, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .covolume import DEFAULT_SAMPLES, capacity, covolume
from .harness import ExperimentConfig, Tolerances, dump_instance, run_all_checks, run_capacity_curve, selftest
from .orthant import HalfSpaceSet, copolar
from .simplex import NumericalError
from .toric import ReinhardtSpec, log_image, volume

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class InputError(ValueError):
    pass


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path} must contain a JSON object")
    return data


def _result_json(res) -> dict:
    return {"value": res.value, "method": res.method, "std_err": res.std_err, "samples": res.samples}


def _method(args, default="exact") -> str:
    return args.method or default


def _samples(args, default=DEFAULT_SAMPLES) -> int:
    return args.samples if args.samples is not None else default


def _seed(args, default=0) -> int:
    return args.seed if args.seed is not None else default


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def cmd_capacity(args) -> int:
    Q = log_image(ReinhardtSpec.from_json(_load_json(args.set)))
    res = capacity(Q, _method(args), _samples(args), _seed(args))
    _emit({"n": Q.dim, "capacity": _result_json(res)})
    return EXIT_OK


def cmd_covolume(args) -> int:
    data = _load_json(args.set)
    P = HalfSpaceSet(data["normals"]) if "normals" in data else copolar(log_image(ReinhardtSpec.from_json(data)))
    res = covolume(P, _method(args), _samples(args), _seed(args))
    _emit({"n": P.dim, "normals": P.normals.tolist(), "covolume": _result_json(res)})
    return EXIT_OK


def cmd_volume(args) -> int:
    spec = ReinhardtSpec.from_json(_load_json(args.set))
    res = volume(spec, _method(args), _samples(args), _seed(args))
    _emit({"n": spec.dim, "volume": _result_json(res)})
    return EXIT_OK


def _config(args) -> ExperimentConfig:
    data = _load_json(args.config)
    if args.method:
        data["method"] = args.method
    if args.samples is not None:
        data["samples"] = args.samples
    if args.seed is not None:
        data["seed"] = args.seed
    if args.tol is not None:
        data["tolerances"] = {**data.get("tolerances", {}), "ineq_slack": args.tol}
    return ExperimentConfig.from_json(data)


def cmd_curve(args) -> int:
    report = run_capacity_curve(_config(args))
    text = report.to_csv()
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    failed = [r for r in report.rows if r.error is not None]
    for r in failed:
        print(f"t={r.t}: {r.error}", file=sys.stderr)
    return EXIT_NUMERIC if failed else EXIT_OK


def cmd_check(args) -> int:
    config = _config(args)
    outcomes = run_all_checks(config)
    code = EXIT_OK
    for o in outcomes:
        print(f"{'PASS' if o.passed else 'FAIL'} {o.name}: worst={o.worst:.6g} ({o.detail})")
        if not o.passed:
            code = EXIT_VIOLATION
            print(dump_instance(config, o), file=sys.stderr)
    return code


def cmd_selftest(args) -> int:
    failures = selftest(args.count, _seed(args), volume_samples=_samples(args, 20_000))
    for cfg, outcome in failures:
        print(dump_instance(cfg, outcome), file=sys.stderr)
    print(f"{args.count} instances, {len(failures)} failed checks")
    return EXIT_VIOLATION if failures else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--method", choices=("exact", "mc"))
    common.add_argument("--samples", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--tol", type=float)

    parser = argparse.ArgumentParser(prog="toricap", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("capacity", parents=[common], help="capacity of a toric compact")
    p.add_argument("set")
    p.set_defaults(func=cmd_capacity)
    p = sub.add_parser("covolume", parents=[common], help="covolume of a copolar set")
    p.add_argument("set")
    p.set_defaults(func=cmd_covolume)
    p = sub.add_parser("volume", parents=[common], help="Euclidean volume of a toric compact")
    p.add_argument("set")
    p.set_defaults(func=cmd_volume)
    p = sub.add_parser("curve", parents=[common], help="capacity curve along the interpolation")
    p.add_argument("config")
    p.add_argument("--csv")
    p.set_defaults(func=cmd_curve)
    p = sub.add_parser("check", parents=[common], help="run every inequality check")
    p.add_argument("config")
    p.set_defaults(func=cmd_check)
    p = sub.add_parser("selftest", parents=[common], help="checks on a seeded random suite")
    p.add_argument("--count", type=int, default=100)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, KeyError, TypeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
