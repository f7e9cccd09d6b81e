"""
Command line entry point::

    dirichlet-bounds bounds --n 2 --K 1 --dtilde 3.14159265
    dirichlet-bounds verify-xi --samples 10001 --tol 1e-9
    dirichlet-bounds solve --model cap --n 2 --K 1 --R 1.5707963 --method shooting
    dirichlet-bounds verify --model cap --n 3 --K 1 --R 1.0
    dirichlet-bounds sweep --config sweep.json --output sweep.csv

Exit codes: 0 when everything passes or is skipped, 1 when a check or a solver
fails, 2 on invalid input.
"""
import argparse
import logging
import sys

from typing import List, Optional

import pandas as pd

import dirichlet_bounds.const as const
from dirichlet_bounds.barrier import lemma5_property_suite
from dirichlet_bounds.bounds import GeometryData, all_bounds, best_bound
from dirichlet_bounds.config import RunConfig, load_config_file, parse_float_list
from dirichlet_bounds.errors import (
    BadIntervalError,
    ConfigError,
    DirichletBoundsError,
    InvalidBError,
    InvalidGeometryError,
    InvalidModelError,
    NoApplicableBoundError,
    PoleError,
    SolverError,
    WarpNotSmoothError,
    XiDomainError,
)
from dirichlet_bounds.models import model_from_dict
from dirichlet_bounds.solvers import solve
from dirichlet_bounds.sweep import family_from_config, main_theorem_violations, sweep
from dirichlet_bounds.utils.reports import (
    write_solution,
    write_table,
    write_verification,
    write_xi_report,
)
from dirichlet_bounds.verify import verify_solution

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

_INPUT_ERRORS = (
    ConfigError,
    InvalidGeometryError,
    InvalidModelError,
    NoApplicableBoundError,
    XiDomainError,
    BadIntervalError,
    InvalidBError,
    PoleError,
    WarpNotSmoothError,
)

# argparse dest -> RunConfig field
_FLAG_FIELDS = {
    "model": "model",
    "n": "n",
    "K": "K",
    "R": "R",
    "L": "L",
    "dtilde": "d_tilde",
    "d": "d",
    "method": "method",
    "grid": "grid_points",
    "tol": "tolerance",
    "buckets": "buckets",
    "b_sequence": "b_sequence",
    "samples": "samples",
    "output": "output",
    "format": "format",
    "force_hypotheses": "force_hypotheses",
    "parallelism": "parallelism",
    "progress": "progress",
}


def _common_flags() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", help="flat JSON run file, flags override its values")
    parent.add_argument("--model", choices=["cap", "ball", "warped", "interval"])
    parent.add_argument("--n", type=int, help="dimension")
    parent.add_argument("--K", type=float, help="Ricci constant, Ric >= (n - 1) K")
    parent.add_argument("--R", type=float, help="ball radius")
    parent.add_argument("--L", type=float, help="interval length")
    parent.add_argument("--dtilde", type=float, help="in-diameter")
    parent.add_argument("--d", type=float, help="diameter")
    parent.add_argument("--method", choices=[m.value for m in const.Method])
    parent.add_argument("--grid", type=int, help="solver grid points")
    parent.add_argument("--tol", type=float, help="solver or property suite tolerance")
    parent.add_argument("--buckets", type=int, help="buckets for the empirical Z")
    parent.add_argument("--b-sequence", dest="b_sequence", help="comma separated b > 1")
    parent.add_argument("--samples", type=int, help="grid size of the xi property suite")
    parent.add_argument("--parallelism", type=float, help="sweep workers")
    parent.add_argument("--progress", action="store_true", default=None)
    parent.add_argument("--output", help="destination, stdout when omitted")
    parent.add_argument("--format", choices=[f.value for f in const.OutputFormat])
    parent.add_argument(
        "--force-hypotheses",
        dest="force_hypotheses",
        action="store_true",
        default=None,
        help="run gated checks even when their hypotheses fail",
    )
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirichlet-bounds",
        description="Lower bounds for the first Dirichlet eigenvalue and their numerical verification",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    parent = _common_flags()
    sub.add_parser("bounds", parents=[parent], help="evaluate the closed-form bounds")
    sub.add_parser("verify-xi", parents=[parent], help="check the barrier function properties")
    sub.add_parser("solve", parents=[parent], help="solve a model for its first eigenpair")
    sub.add_parser("verify", parents=[parent], help="solve a model and run every check")
    sub.add_parser("sweep", parents=[parent], help="solve and check a family of models")
    return parser


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    params = load_config_file(args.config) if args.config else {}
    for flag, name in _FLAG_FIELDS.items():
        value = getattr(args, flag, None)
        if value is None:
            continue
        if name == "b_sequence":
            value = parse_float_list(value)
        params[name] = value
    params["subcommand"] = args.subcommand
    try:
        return RunConfig(**params)
    except TypeError as err:
        raise ConfigError(str(err)) from err


#################
# Subcommands
#################


def cmd_bounds(run: RunConfig) -> int:
    if run.n is None or run.K is None:
        raise ConfigError("bounds needs --n and --K")
    geometry = GeometryData(n=run.n, K=run.K, d=run.d, d_tilde=run.d_tilde)
    best = best_bound(geometry)
    frame = pd.DataFrame(
        [
            {
                "bound": b.name,
                "value": b.value,
                "hypotheses_met": b.all_hypotheses_met,
                "best": b.name == best.name,
            }
            for b in all_bounds(geometry)
        ]
    )
    write_table(frame, run.output)
    return EXIT_OK


def cmd_verify_xi(run: RunConfig) -> int:
    tolerance = const.DEFAULT_XI_TOLERANCE if run.tolerance is None else run.tolerance
    report = lemma5_property_suite(grid_size=run.samples, tolerance=tolerance)
    write_xi_report(report, run.output, run.format or const.OutputFormat.CSV.value)
    for outcome in report.failed():
        logger.error(
            f"{outcome.property_id} failed: {outcome.max_residual:.3e} > {outcome.threshold:.3e}"
        )
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_solve(run: RunConfig) -> int:
    model = model_from_dict(run.model_spec())
    solution = solve(model, run.solver_config())
    logger.info(f"{model.describe()}: lambda = {solution.lambda_:.12g} ({solution.method})")
    write_solution(solution, run.output)
    return EXIT_OK


def cmd_verify(run: RunConfig) -> int:
    model = model_from_dict(run.model_spec())
    solution = solve(model, run.solver_config())
    report = verify_solution(solution, model, run.verifier_config())
    write_verification(report, run.output, run.format or const.OutputFormat.REPORT.value)
    for check in report.checks:
        if not check.passed and not check.skipped:
            logger.error(f"{check.check_id} failed with margin {check.margin:.6g}")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_sweep(run: RunConfig) -> int:
    table = sweep(family_from_config(run.sweep_config()), run.sweep_config())
    write_table(table, run.output)
    errored = int((table["error"].fillna("") != "").sum()) if len(table) else 0
    if errored:
        logger.warning(f"{errored} sweep row(s) could not be solved or checked, see the error column")
    violations = main_theorem_violations(table)
    if len(violations):
        logger.error(f"{len(violations)} row(s) violate the main theorem bound")
        return EXIT_FAILED
    return EXIT_OK


COMMANDS = {
    "bounds": cmd_bounds,
    "verify-xi": cmd_verify_xi,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        format="%(asctime)s : %(threadName)s : %(levelname)s : %(message)s",
        level=logging.INFO,
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT

    try:
        run = run_config_from_args(args)
        return COMMANDS[run.subcommand](run)
    except _INPUT_ERRORS as err:
        logger.error(f"invalid input: {err}")
        return EXIT_INPUT
    except SolverError as err:
        logger.error(f"solver failed: {err}")
        return EXIT_FAILED
    except DirichletBoundsError as err:
        logger.error(str(err))
        return EXIT_FAILED
    except (TypeError, ValueError) as err:
        logger.error(f"invalid input: {err}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
