import math

import pytest

from dirichlet_bounds.config import SolverConfig, VerifierConfig
from dirichlet_bounds.models import euclidean_ball, interval, spherical_cap
from dirichlet_bounds.solvers import solve_finite_difference, solve_shooting

HEMISPHERE = 0.5 * math.pi


@pytest.fixture(scope="session")
def solver_config():
    return SolverConfig(grid_points=1024)


@pytest.fixture(scope="session")
def fd_config():
    return SolverConfig(method="finite_difference", grid_points=512)


@pytest.fixture(scope="session")
def verifier_config():
    return VerifierConfig()


@pytest.fixture(scope="session")
def hemisphere_s2():
    return spherical_cap(2, 1.0, HEMISPHERE)


@pytest.fixture(scope="session")
def hemisphere_s3():
    return spherical_cap(3, 1.0, HEMISPHERE)


@pytest.fixture(scope="session")
def small_cap():
    return spherical_cap(2, 1.0, 0.25 * math.pi)


@pytest.fixture(scope="session")
def large_cap():
    return spherical_cap(2, 1.0, 2.0)


@pytest.fixture(scope="session")
def unit_disk():
    return euclidean_ball(2, 1.0)


@pytest.fixture(scope="session")
def unit_interval():
    return interval(1.0)


@pytest.fixture(scope="session")
def hemisphere_s2_solution(hemisphere_s2, solver_config):
    return solve_shooting(hemisphere_s2, solver_config)


@pytest.fixture(scope="session")
def hemisphere_s3_solution(hemisphere_s3, solver_config):
    return solve_shooting(hemisphere_s3, solver_config)


@pytest.fixture(scope="session")
def hemisphere_s2_fd_solution(hemisphere_s2, fd_config):
    return solve_finite_difference(hemisphere_s2, fd_config)


@pytest.fixture(scope="session")
def interval_solution(unit_interval, solver_config):
    return solve_shooting(unit_interval, solver_config)
