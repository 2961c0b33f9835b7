#!/usr/bin/env python3
"""
bloch-approx command line

Usage examples:
    bloch-approx approx --a 0.5 --k 1 --phi 0 --theta 1.0471975512 --set sprime
    bloch-approx approx --a 0.3 --k 0.8 --phi 10 --alpha 0 --beta 60 --set s1 --deg
    bloch-approx oracle --a 0.3 --k 0.5 --phi 2.0 --alpha 0 --beta 1 --set s
    bloch-approx decompose --a 0.2 --k 0.75 --phi 0 --theta 0.3926990817
    bloch-approx uncertainty --a 0.2113248654 --k 1 --phi 0.7853981634 --validity
    bloch-approx verify --samples 10000 --seed 42 --suite core
    bloch-approx sweep --axes theta vartheta --a 0.2113248654 --k 1 --phi 0.7853981634 --grid 200

Results go to stdout (JSON, or CSV for sweep); logs and errors go to stderr.

Exit codes:
    0  success
    1  verify found a property violation
    2  validation failure (single-line JSON error on stderr)
    3  analytic path unsupported for this input and --oracle-fallback not set
"""

import argparse
import json
import logging
import math
import sys
from typing import Optional

from commands import (
    COMMANDS, OUTPUTS, SET_ANGLES, SUITES, UNSUPPORTED, RunConfig, format_csv,
    run, to_json,
)
from constants import Defaults
from errors import BlochApproxError, ValidationError

logger = logging.getLogger("bloch-approx")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_VALIDATION = 2
EXIT_UNSUPPORTED = 3

ANGLE_OPTIONS = ("phi", "alpha", "beta", "theta", "vartheta")

HELP = {
    "approx": "closed-form optimal approximation (Type I / Type II) with oracle cross-check",
    "oracle": "exact projection onto the convex hull of a basis set",
    "decompose": "decomposability over the eigenstates of three gates",
    "uncertainty": "spin variances and the triple uncertainty relations",
    "verify": "seeded analytic-vs-oracle property suites",
    "sweep": "two-axis region map as CSV",
}


class _Parser(argparse.ArgumentParser):
    """Parse failures become validation errors instead of usage text"""

    def error(self, message):
        raise ValidationError(message)


def _common_options() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    state = common.add_argument_group("state")
    state.add_argument("--a", type=float, help="population of |1>, in [0, 1]")
    state.add_argument("--k", type=float, help="coherence fraction, in [0, 1]")
    state.add_argument("--phi", type=float, help="coherence phase")

    gates = common.add_argument_group("gates")
    gates.add_argument("--alpha", type=float, help="first reflection angle")
    gates.add_argument("--beta", type=float, help="second reflection angle")
    gates.add_argument("--theta", type=float, help="two-gate half angle")
    gates.add_argument("--vartheta", type=float, help="reflection half angle paired with the y basis")
    gates.add_argument("--set", dest="basis_set", choices=list(SET_ANGLES), help="basis set")
    gates.add_argument("--deg", action="store_true", help="angles are given in degrees")

    run_options = common.add_argument_group("run")
    run_options.add_argument("--out", dest="output", choices=list(OUTPUTS), help="output format")
    run_options.add_argument("--seed", type=int, default=Defaults.SEED)
    run_options.add_argument("--samples", type=int, default=Defaults.VERIFY_SAMPLES)
    run_options.add_argument("--grid", type=int, help="grid points per axis")
    run_options.add_argument("--oracle-fallback", action="store_true",
                             help="route unsupported inputs to the oracle (case 'oracle')")
    run_options.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bloch-approx",
                     description="Optimal convex approximation of qubit states by real-gate eigenstates")
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_options()
    commands = {name: subparsers.add_parser(name, parents=[common], help=HELP[name]) for name in COMMANDS}

    commands["uncertainty"].add_argument("--validity", action="store_true",
                                         help="angle intervals where both case-i conditions hold")
    commands["uncertainty"].add_argument("--lambda", dest="scan_lambda", action="store_true",
                                         help="maximize 4 f2 / (3 - f1) over (k, a)")
    commands["verify"].add_argument("--suite", choices=list(SUITES), default="all")
    commands["sweep"].add_argument("--axes", nargs=2, metavar=("AXIS1", "AXIS2"),
                                   help="two of a, k, phi, theta, vartheta")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {name: getattr(args, name) for name in ("a", "k") + ANGLE_OPTIONS}
    if args.deg:
        values.update({name: math.radians(v) for name, v in values.items()
                       if name in ANGLE_OPTIONS and v is not None})
    return RunConfig(
        command=args.command,
        **values,
        basis_set=args.basis_set,
        output=args.output,
        seed=args.seed,
        samples=args.samples,
        grid=args.grid,
        suite=getattr(args, "suite", "all"),
        axes=tuple(args.axes) if getattr(args, "axes", None) else None,
        oracle_fallback=args.oracle_fallback,
        validity=getattr(args, "validity", False),
        scan_lambda=getattr(args, "scan_lambda", False),
    )


def _error(kind: str, message: str):
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except ValidationError as e:
        _error("validation", str(e))
        return EXIT_VALIDATION

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(name)s %(levelname)s: %(message)s", stream=sys.stderr)

    try:
        config = config_from_args(args)
        payload = run(config)
    except UNSUPPORTED as e:
        _error("unsupported", str(e))
        return EXIT_UNSUPPORTED
    except BlochApproxError as e:
        _error("validation", str(e))
        return EXIT_VALIDATION

    if config.command == "sweep" and config.output == "csv":
        sys.stdout.write(format_csv(payload))
    else:
        sys.stdout.write(to_json(payload, indent=2) + "\n")

    if config.command == "verify" and not payload["passed"]:
        logger.error(f"verify failed: {payload['violations']} violation(s)")
        return EXIT_VIOLATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
