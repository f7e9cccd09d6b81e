import math

from unittest.mock import patch

import pandas as pd
import pytest

from dirichlet_bounds import const
from dirichlet_bounds.config import SolverConfig, SweepConfig
from dirichlet_bounds.models import interval, spherical_cap
from dirichlet_bounds.sweep import (
    _loky_worker_process_row,
    cap_family,
    family_from_config,
    get_num_workers,
    main_theorem_violations,
    sweep,
    sweep_row,
)


@pytest.fixture(scope="module")
def sweep_config():
    return SweepConfig(solver=SolverConfig(grid_points=256))


@pytest.mark.parametrize(
    "num_cpus,total_rows,parallelism,expected_workers",
    [
        (1, 100, 0, 1),
        (1, 100, 1, 1),
        (8, 100, 0, 8),
        (8, 100, 1, 1),
        (8, 100, 4, 4),
        (8, 2, 4, 2),
        (8, 100, -1, 7),
        (8, 100, 0.5, 4),
        (8, 100, -0.25, 6),
        (8, 100, 2.0, 2),
        (8, 100, -10, 1),
        (8, 0, 4, 1),
    ],
)
@patch("loky.cpu_count")
def test_get_num_workers(cpu_count, num_cpus, total_rows, parallelism, expected_workers):
    cpu_count.return_value = num_cpus

    assert get_num_workers(parallelism, total_rows) == expected_workers


def test_cap_family():
    specs = cap_family(2, 1.0, 5)
    assert len(specs) == 5
    assert specs[0] == {"model": "cap", "n": 2, "K": 1.0, "R": 0.1}
    assert specs[-1]["R"] == pytest.approx(0.5 * math.pi)
    assert cap_family(3, 4.0, 2)[-1]["R"] == pytest.approx(0.25 * math.pi)


def test_family_from_config():
    caps = family_from_config(SweepConfig(n_values=[2, 3], K_values=[0.5, 1.0, 2.0], R_count=4))
    assert len(caps) == 24
    balls = family_from_config(SweepConfig(model="ball", n_values=[2, 4], R_count=3, R_max=2.0))
    assert [s["R"] for s in balls[:3]] == pytest.approx([0.1, 1.05, 2.0])
    assert {s["n"] for s in balls} == {2, 4}
    intervals = family_from_config(SweepConfig(model="interval", R_count=2, R_min=0.5))
    assert intervals == [{"model": "interval", "L": 1.0}, {"model": "interval", "L": 2.0}]


def test_empty_sweep():
    table = sweep([])
    assert table.empty
    assert list(table.columns) == const.SWEEP_COLUMNS


def test_sweep_row(sweep_config):
    row = sweep_row(0, {"model": "cap", "n": 2, "K": 1.0, "R": 1.0}, sweep_config)
    assert row["error"] == ""
    assert row["variant"] == "spherical_cap"
    assert row["d_tilde"] == 2.0
    assert row["method_agreement"] < 1e-5
    assert row["margin_ling"] > 0
    assert row["margin_ling"] == pytest.approx(row["lambda_shooting"] - row["ling"])
    assert row["best_name"] == "ling"
    assert row["check_main_theorem"] == const.CHECK_PASS
    assert row["check_lichnerowicz"] == const.CHECK_PASS
    assert row["all_passed"]


def test_sweep_isolates_errors(sweep_config):
    specs = [
        spherical_cap(2, 1.0, 0.8),
        {"model": "cap", "n": 2, "K": 1.0, "R": 4.0},
        {"model": "interval", "L": 1.0},
    ]
    table = sweep(specs, sweep_config)
    assert list(table.columns) == const.SWEEP_COLUMNS
    assert list(table["row"]) == [0, 1, 2]
    assert table.loc[1, "error"].startswith("InvalidModelError")
    assert not table.loc[1, "all_passed"]
    assert table.loc[0, "error"] == ""
    assert table.loc[0, "all_passed"]
    interval_row = table.loc[2]
    assert interval_row["variant"] == "interval"
    assert interval_row["best_name"] == "zhong_yang"
    assert interval_row["lambda_shooting"] == pytest.approx(math.pi**2, rel=1e-6)
    assert interval_row["check_main_theorem"] == const.CHECK_SKIP
    assert interval_row["check_chain"] == const.CHECK_PASS
    assert main_theorem_violations(table).empty


def test_sweep_parallel_matches_serial(sweep_config):
    specs = cap_family(2, 1.0, 3, r_max=1.4)
    serial = sweep(specs, sweep_config)
    parallel = sweep(specs, SweepConfig(solver=sweep_config.solver, parallelism=2))
    pd.testing.assert_frame_equal(serial, parallel, check_exact=False, rtol=1e-12)


def test_main_theorem_violations():
    table = pd.DataFrame(
        [
            {"check_main_theorem": "fail", "positive_K": True, "nonnegative_mean_curvature": True},
            {"check_main_theorem": "fail", "positive_K": True, "nonnegative_mean_curvature": False},
            {"check_main_theorem": "pass", "positive_K": True, "nonnegative_mean_curvature": True},
        ]
    )
    violations = main_theorem_violations(table)
    assert list(violations.index) == [0]
    assert main_theorem_violations(pd.DataFrame(columns=const.SWEEP_COLUMNS)).empty


class _PoolCreated(Exception):
    pass


def test_parallel_workers_are_single_threaded():
    with patch("loky.ProcessPoolExecutor", side_effect=_PoolCreated) as pool:
        with pytest.raises(_PoolCreated):
            sweep([interval(1.0), interval(2.0)], SweepConfig(parallelism=2))
    kwargs = pool.call_args[1]
    assert kwargs["max_workers"] == 2
    assert kwargs["env"] == {"OMP_NUM_THREADS": "1"}


def test_worker_requires_initialization():
    with pytest.raises(RuntimeError):
        _loky_worker_process_row(0, {"model": "interval", "L": 1.0})
