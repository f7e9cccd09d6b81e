import math

import numpy as np
import pytest

from dirichlet_bounds.config import SolverConfig
from dirichlet_bounds.errors import (
    BoundaryValueError,
    IterationStallError,
    NonconvergenceError,
    SignChangeError,
)
from dirichlet_bounds.models import (
    SinhWarp,
    eigenvalue_oracle,
    euclidean_ball,
    interval,
    spherical_cap,
    warped_ball,
)
from dirichlet_bounds.solvers import (
    convergence_order,
    cosine_profile,
    normalize,
    rayleigh_quotient,
    richardson,
    solve,
    solve_finite_difference,
    solve_shooting,
)
from dirichlet_bounds.structures import RadialEigenSolution

HALF_PI = 0.5 * math.pi


def _assert_normalized(solution):
    assert solution.v[0] == pytest.approx(1.0, abs=1e-12)
    assert solution.v[-1] == 0.0
    assert solution.v.max() == pytest.approx(1.0, abs=1e-12)
    assert solution.v.min() == 0.0
    assert np.all(np.diff(solution.r_grid) > 0)
    assert solution.r_grid[0] == 0.0
    # first eigenfunction is radially decreasing
    assert np.all(np.diff(solution.v) <= 1e-12)


@pytest.mark.parametrize(
    "model,rel",
    [
        (interval(1.0), 1e-8),
        (interval(2.0), 1e-8),
        (spherical_cap(2, 1.0, HALF_PI), 1e-6),
        (spherical_cap(3, 1.0, HALF_PI), 1e-6),
        (spherical_cap(5, 1.0, HALF_PI), 1e-6),
        (euclidean_ball(2, 1.0), 1e-6),
        (euclidean_ball(3, 1.0), 1e-6),
    ],
)
def test_shooting_against_oracle(model, rel, solver_config):
    solution = solve_shooting(model, solver_config)
    assert solution.lambda_ == pytest.approx(eigenvalue_oracle(model), rel=rel)
    assert solution.method == "shooting"
    assert solution.d_tilde == pytest.approx(2 * model.R)
    _assert_normalized(solution)


@pytest.mark.parametrize(
    "model,rel",
    [
        (interval(2.0), 1e-8),
        (spherical_cap(3, 1.0, HALF_PI), 1e-6),
        (spherical_cap(2, 1.0, HALF_PI), 1e-6),
        (spherical_cap(5, 1.0, HALF_PI), 1e-6),
        (euclidean_ball(2, 1.0), 1e-6),
    ],
)
def test_finite_difference_against_oracle(model, rel, fd_config):
    solution = solve_finite_difference(model, fd_config)
    assert solution.lambda_ == pytest.approx(eigenvalue_oracle(model), rel=rel)
    assert solution.method == "finite_difference"
    assert solution.extrapolated
    _assert_normalized(solution)


@pytest.mark.parametrize("R", [0.5, 1.0])
def test_three_dimensional_caps(R, solver_config):
    # u = sin(pi r / R) / sin(r) on S^3 gives lambda = pi^2 / R^2 - 1
    solution = solve_shooting(spherical_cap(3, 1.0, R), solver_config)
    assert solution.lambda_ == pytest.approx(math.pi**2 / R**2 - 1.0, rel=1e-6)


def test_hyperbolic_ball(solver_config):
    # sinh r / r profile on H^3 gives lambda = pi^2 / R^2 + 1
    solution = solve_shooting(warped_ball(3, SinhWarp(1.0), 1.0), solver_config)
    assert solution.lambda_ == pytest.approx(math.pi**2 + 1.0, rel=1e-6)


@pytest.mark.parametrize(
    "model",
    [
        spherical_cap(2, 1.0, 0.7),
        spherical_cap(5, 2.0, 0.9),
        spherical_cap(2, 1.0, 2.0),
        euclidean_ball(4, 1.5),
        warped_ball(2, SinhWarp(1.0), 1.0),
    ],
)
def test_methods_agree(model, solver_config, fd_config):
    shooting = solve_shooting(model, solver_config)
    fd = solve_finite_difference(model, fd_config)
    assert fd.lambda_ == pytest.approx(shooting.lambda_, rel=1e-6)


def test_domain_monotonicity(solver_config):
    radii = [0.3, 0.6, 0.9, 1.2, HALF_PI]
    values = [solve_shooting(spherical_cap(2, 1.0, R), solver_config).lambda_ for R in radii]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_euclidean_scaling(solver_config):
    unit = solve_shooting(euclidean_ball(4, 1.0), solver_config).lambda_
    scaled = solve_shooting(euclidean_ball(4, 2.5), solver_config).lambda_
    assert scaled == pytest.approx(unit / 2.5**2, rel=1e-6)


def test_convergence_order_on_interval():
    config = SolverConfig(grid_points=64)
    order = convergence_order(interval(1.0), config, exact=math.pi**2)
    assert order == pytest.approx(2.0, abs=0.05)
    assert convergence_order(interval(1.0), config) == pytest.approx(2.0, abs=0.05)


def test_rayleigh_quotient_is_an_upper_bound():
    model = spherical_cap(2, 1.0, 1.0)
    quotient = rayleigh_quotient(model, cosine_profile(model.R))
    exact = solve_shooting(model, SolverConfig(grid_points=512)).lambda_
    assert quotient >= exact
    # the cosine profile is exact on the interval
    line = interval(1.0)
    assert rayleigh_quotient(line, cosine_profile(line.R)) == pytest.approx(math.pi**2, rel=1e-10)


def test_richardson():
    hs = [0.1, 0.05, 0.025]
    values = [1.0 + 3.0 * h**2 - 2.0 * h**4 for h in hs]
    assert richardson(values) == pytest.approx(1.0, abs=1e-13)
    assert richardson(values[:1]) == values[0]
    assert richardson([1.0 + h**4 for h in hs[:2]], order=4) == pytest.approx(1.0, abs=1e-15)


def test_solve_dispatch(fd_config):
    model = interval(1.0)
    assert solve(model, fd_config).method == "finite_difference"
    assert solve(model, SolverConfig(grid_points=256)).method == "shooting"


def test_normalize_scale_invariant(hemisphere_s2_solution):
    scaled = RadialEigenSolution(
        lambda_=hemisphere_s2_solution.lambda_,
        r_grid=hemisphere_s2_solution.r_grid,
        v=5.0 * hemisphere_s2_solution.v,
        v_prime=5.0 * hemisphere_s2_solution.v_prime,
        d_tilde=hemisphere_s2_solution.d_tilde,
        method=hemisphere_s2_solution.method,
    )
    again = normalize(scaled)
    np.testing.assert_allclose(again.v, hemisphere_s2_solution.v, rtol=1e-14, atol=1e-15)
    np.testing.assert_allclose(again.v_prime, hemisphere_s2_solution.v_prime, rtol=1e-14, atol=1e-15)


def test_normalize_rejects_interior_zero():
    r = np.linspace(0.0, math.pi, 101)
    solution = RadialEigenSolution(
        lambda_=4.0,
        r_grid=r,
        v=np.cos(2.0 * r),
        v_prime=-2.0 * np.sin(2.0 * r),
        d_tilde=2 * math.pi,
        method="shooting",
    )
    with pytest.raises(SignChangeError):
        normalize(solution)


def _interval_profile(frequency):
    r = np.linspace(0.0, 0.5, 101)
    return RadialEigenSolution(
        lambda_=frequency**2,
        r_grid=r,
        v=np.cos(frequency * r),
        v_prime=-frequency * np.sin(frequency * r),
        d_tilde=1.0,
        method="shooting",
    )


def test_normalize_rejects_nonzero_boundary_value():
    # cos(0.99 pi r) is about 0.016 at r = 1/2
    with pytest.raises(BoundaryValueError):
        normalize(_interval_profile(0.99 * math.pi))
    assert normalize(_interval_profile(0.99 * math.pi), boundary_tolerance=0.02).v[-1] == 0.0


def test_normalize_pins_small_boundary_value():
    solution = normalize(_interval_profile(math.pi))
    assert solution.v[-1] == 0.0
    assert solution.v[0] == 1.0


def test_shooting_nonconvergence():
    with pytest.raises(NonconvergenceError):
        solve_shooting(interval(1.0), SolverConfig(grid_points=128, max_iterations=1))


def test_inverse_iteration_stall():
    with pytest.raises(IterationStallError):
        solve_finite_difference(interval(1.0), SolverConfig(grid_points=128, max_iterations=1))


def test_solution_frame(interval_solution):
    frame = interval_solution.to_dataframe()
    assert list(frame.columns) == ["r", "v", "v_prime"]
    assert len(frame) == len(interval_solution.r_grid)
    assert interval_solution.radius == pytest.approx(0.5)
