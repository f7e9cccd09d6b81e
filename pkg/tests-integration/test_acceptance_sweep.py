"""
End to end sweeps over model families. These solve every model with both
solvers at production grid sizes and take a while, so they live outside the
unit test suite.
"""
import math

import numpy as np
import pytest

from dirichlet_bounds import const
from dirichlet_bounds.bounds import crossover_radius
from dirichlet_bounds.config import SolverConfig, SweepConfig
from dirichlet_bounds.sweep import cap_family, family_from_config, main_theorem_violations, sweep


@pytest.fixture(scope="module")
def s2_table():
    return sweep(cap_family(2, 1.0, 20), SweepConfig(parallelism=0))


def test_caps_up_to_the_hemisphere(s2_table):
    assert len(s2_table) == 20
    assert (s2_table["error"] == "").all()
    assert (s2_table["check_main_theorem"] == const.CHECK_PASS).all()
    assert s2_table["all_passed"].astype(bool).all()
    assert main_theorem_violations(s2_table).empty
    assert (s2_table["method_agreement"] < 1e-6).all()


def test_eigenvalue_decreases_with_radius(s2_table):
    assert np.all(np.diff(s2_table["lambda_shooting"].to_numpy()) < 0)
    assert s2_table["lambda_shooting"].iloc[-1] == pytest.approx(2.0, rel=1e-8)


def test_best_bound_crosses_over(s2_table):
    # below pi / sqrt(6) the sharpened bound wins, above it Reilly's does
    crossover = crossover_radius(2, 1.0)
    assert crossover == pytest.approx(math.pi / math.sqrt(6.0))
    for _, row in s2_table.iterrows():
        expected = "ling" if row["R"] < crossover else "reilly"
        assert row["best_name"] == expected, row["R"]


def test_dimension_and_curvature_grid():
    config = SweepConfig(n_values=[2, 3, 5], K_values=[0.5, 1.0, 2.0], R_count=20, parallelism=0)
    table = sweep(family_from_config(config), config)
    assert len(table) == 180
    assert (table["error"] == "").all()
    in_hypothesis = table[table["positive_K"].astype(bool) & table["nonnegative_mean_curvature"].astype(bool)]
    assert len(in_hypothesis) == 180
    assert in_hypothesis["all_passed"].astype(bool).all()
    assert (in_hypothesis["margin_yang"] >= 0).all()
    assert (in_hypothesis["method_agreement"] < 1e-6).all()
    assert (table["check_main_theorem"] == const.CHECK_PASS).all()
    assert (table["check_lichnerowicz"] == const.CHECK_PASS).all()
    assert (table["margin_ling"] > 0).all()
    # ling - yang = (n - 1) K / 4 on every row
    np.testing.assert_allclose(table["ling"] - table["yang"], 0.25 * (table["n"] - 1) * table["K"], rtol=1e-12)


def test_interval_family():
    config = SweepConfig(model="interval", R_count=4, R_min=0.25, R_max=2.0, solver=SolverConfig(grid_points=1024))
    table = sweep(family_from_config(config), config)
    L = 2.0 * table["R"].to_numpy()
    np.testing.assert_allclose(table["lambda_shooting"], math.pi**2 / L**2, rtol=1e-8)
    np.testing.assert_allclose(table["lambda_fd"], math.pi**2 / L**2, rtol=1e-8)
    assert (table["check_chain"] == const.CHECK_PASS).all()
    assert (table["check_main_theorem"] == const.CHECK_SKIP).all()
