"""
Sweeps solve and verify a family of models and collect one table row per
model. Rows can be spread over several processes with loky. Results are put
back in input order, so the table does not depend on the worker count.
"""
import logging
import math

from concurrent import futures
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import loky
import numpy as np
import pandas as pd

from tqdm.auto import tqdm

import dirichlet_bounds.const as const
from dirichlet_bounds.bounds import BOUND_NAMES, best_bound
from dirichlet_bounds.config import SweepConfig
from dirichlet_bounds.const import Method, Variant
from dirichlet_bounds.errors import DirichletBoundsError
from dirichlet_bounds.models import (
    ModelManifold,
    boundary_mean_curvature,
    model_from_dict,
    ricci_lower,
)
from dirichlet_bounds.solvers import solve_finite_difference, solve_shooting
from dirichlet_bounds.structures import VerificationReport
from dirichlet_bounds.verify import (
    CHAIN,
    DOMINATION,
    GRADIENT,
    LICHNEROWICZ,
    MAIN_THEOREM,
    MEAN_CURVATURE_TOL,
    Z_BOUND,
    bounds_for_model,
    geometry_for_model,
    verify_solution,
)

logger = logging.getLogger(__name__)

ModelSpec = Union[ModelManifold, Dict[str, Any]]


def get_num_workers(parallelism: Union[int, float], total_rows: int) -> int:
    """
    Given a parallelism setting and a number of rows, compute the number of parallel workers to use.

    Args:
        parallelism: ``1`` disables parallelization, a non-positive value means "number of CPUs + x"
            (``0`` uses as many workers as there are CPUs). A floating-point value is a fraction of
            the available CPUs, rounded down; integral floats such as ``2.0`` count as worker numbers.
        total_rows: The number of sweep rows.

    Returns:
        The number of workers, between 1 and ``total_rows``.
    """
    non_positive = False
    if parallelism <= 0:
        parallelism = -parallelism
        non_positive = True

    if isinstance(parallelism, float) and not float(parallelism).is_integer():
        num_workers = int(loky.cpu_count() * parallelism)
    else:
        num_workers = int(parallelism)

    if non_positive:
        num_workers = loky.cpu_count() - num_workers

    return min(max(num_workers, 1), max(total_rows, 1))


#################
# Families
#################


def cap_family(
    n: int, K: float, count: int, r_min: float = 0.1, r_max: Optional[float] = None
) -> List[Dict[str, Any]]:
    """Spherical cap specs with ``count`` radii evenly spaced on [r_min, r_max].

    ``r_max`` defaults to the hemisphere radius pi / (2 sqrt(K)).
    """
    if r_max is None:
        r_max = 0.5 * math.pi / math.sqrt(K)
    return [
        {"model": "cap", "n": n, "K": K, "R": float(R)}
        for R in np.linspace(r_min, r_max, count)
    ]


def family_from_config(config: SweepConfig) -> List[Dict[str, Any]]:
    """Model specs for every combination of n, K and radius in the sweep config."""
    specs: List[Dict[str, Any]] = []
    if config.model == "cap":
        for n in config.n_values:
            for K in config.K_values:
                specs.extend(
                    cap_family(n, K, config.R_count, config.R_min, config.R_max)
                )
        return specs

    r_max = 1.0 if config.R_max is None else config.R_max
    radii = np.linspace(config.R_min, r_max, config.R_count)
    if config.model == "ball":
        for n in config.n_values:
            specs.extend({"model": "ball", "n": n, "R": float(R)} for R in radii)
    else:
        specs.extend({"model": "interval", "L": float(2.0 * R)} for R in radii)
    return specs


#################
# Rows
#################


def _aggregate(report: VerificationReport, prefix: str) -> str:
    checks = [c for c in report.checks if c.check_id.startswith(prefix)]
    if not checks:
        return const.CHECK_SKIP
    if any(not c.passed and not c.skipped for c in checks):
        return const.CHECK_FAIL
    if all(c.skipped for c in checks):
        return const.CHECK_SKIP
    return const.CHECK_PASS


def _empty_row(index: int) -> Dict[str, Any]:
    row = {column: np.nan for column in const.SWEEP_COLUMNS}
    row.update(row=index, variant="", best_name="", error="")
    return row


def sweep_row(index: int, spec: ModelSpec, config: SweepConfig) -> Dict[str, Any]:
    """Build, solve, bound and verify one model. Errors become an error row."""
    row = _empty_row(index)
    try:
        model = spec if isinstance(spec, ModelManifold) else model_from_dict(spec)
        row.update(
            variant=model.variant.value,
            n=model.n,
            K=model.K,
            R=model.R,
            d_tilde=model.d_tilde,
        )
        shooting = solve_shooting(model, config.solver)
        fd = solve_finite_difference(model, config.solver)
        solution = fd if config.solver.method == Method.FINITE_DIFFERENCE.value else shooting
        lambda_ = solution.lambda_
        row.update(
            lambda_shooting=shooting.lambda_,
            lambda_fd=fd.lambda_,
            method_agreement=abs(shooting.lambda_ - fd.lambda_) / max(abs(lambda_), 1e-300),
        )

        bounds = {b.name: b.value for b in bounds_for_model(model)}
        for name in BOUND_NAMES:
            row[name] = bounds.get(name, np.nan)
        for name in ("reilly", "yang", "ling"):
            if name in bounds:
                row[f"margin_{name}"] = lambda_ - bounds[name]
        if model.variant == Variant.INTERVAL:
            row.update(best_name="zhong_yang", best_value=bounds["zhong_yang"])
        else:
            best = best_bound(geometry_for_model(model))
            row.update(best_name=best.name, best_value=best.value)

        ricci = ricci_lower(model)
        curvature = boundary_mean_curvature(model)
        row.update(
            ricci_lower=ricci,
            mean_curvature=curvature,
            positive_K=ricci > 0,
            nonnegative_mean_curvature=curvature >= -MEAN_CURVATURE_TOL,
        )

        report = verify_solution(solution, model, config.verifier)
        row.update(
            check_lichnerowicz=_aggregate(report, LICHNEROWICZ),
            check_gradient=_aggregate(report, GRADIENT),
            check_z_bound=_aggregate(report, Z_BOUND),
            check_barrier=_aggregate(report, DOMINATION),
            check_chain=_aggregate(report, CHAIN),
            check_main_theorem=_aggregate(report, MAIN_THEOREM),
            all_passed=report.passed,
        )
    except (DirichletBoundsError, ValueError, ArithmeticError) as err:
        logger.warning(f"sweep row {index} failed: {err}")
        row["error"] = f"{type(err).__name__}: {err}"
        row["all_passed"] = False
    return row


def _run_serial(
    specs: Sequence[ModelSpec], config: SweepConfig
) -> List[Dict[str, Any]]:
    rows = []
    for index, spec in enumerate(
        tqdm(specs, desc="Sweep rows ", disable=not config.progress)
    ):
        rows.append(sweep_row(index, spec, config))
    return rows


def _run_parallel(
    specs: Sequence[ModelSpec], config: SweepConfig, num_workers: int
) -> List[Dict[str, Any]]:
    worker_pool = loky.ProcessPoolExecutor(
        max_workers=num_workers,
        initializer=_loky_init_worker,
        initargs=(config,),
        env={"OMP_NUM_THREADS": "1"},
    )
    rows: List[Optional[Dict[str, Any]]] = [None] * len(specs)
    progress = tqdm(total=len(specs), desc="Sweep rows ", disable=not config.progress)
    try:
        pending = {
            worker_pool.submit(_loky_worker_process_row, index, spec)
            for index, spec in enumerate(specs)
        }
        for task in futures.as_completed(pending):
            index, row = task.result()
            rows[index] = row
            progress.update(1)
    finally:
        progress.close()
        worker_pool.shutdown(wait=False, kill_workers=True)
    return rows


def sweep(models: Sequence[ModelSpec], config: Optional[SweepConfig] = None) -> pd.DataFrame:
    """Solve and verify every model, one row each in input order.

    ``models`` may hold ``ModelManifold`` objects or flat model dicts. A model
    that cannot be built, solved or checked yields a row with the ``error``
    column set, the other rows are unaffected.
    """
    config = config or SweepConfig()
    specs = list(models)
    if not specs:
        return pd.DataFrame(columns=const.SWEEP_COLUMNS)
    num_workers = get_num_workers(config.parallelism, len(specs))
    logger.info(f"Sweeping {len(specs)} models with {num_workers} worker(s)")
    if num_workers == 1:
        rows = _run_serial(specs, config)
    else:
        rows = _run_parallel(specs, config, num_workers)
    return pd.DataFrame(rows, columns=const.SWEEP_COLUMNS)


def main_theorem_violations(table: pd.DataFrame) -> pd.DataFrame:
    """Rows that satisfy the hypotheses but fail the main theorem check."""
    if table.empty:
        return table
    mask = (
        (table["check_main_theorem"] == const.CHECK_FAIL)
        & (table["positive_K"] == True)  # noqa: E712
        & (table["nonnegative_mean_curvature"] == True)  # noqa: E712
    )
    return table[mask]


#############################################################
# All code below this line is ONLY run in workers spawned by loky #
#############################################################

_loky_worker_config: Optional[SweepConfig] = None


def _loky_init_worker(config: SweepConfig):
    global _loky_worker_config
    _loky_worker_config = config


def _loky_worker_process_row(index: int, spec: ModelSpec) -> Tuple[int, Dict[str, Any]]:
    """
    Runs one sweep row.

    Raises:
        RuntimeError: if _loky_init_worker has not been called yet in this process.
    """
    if _loky_worker_config is None:
        raise RuntimeError("sweep config has not been initialized in loky worker process")
    return index, sweep_row(index, spec, _loky_worker_config)
