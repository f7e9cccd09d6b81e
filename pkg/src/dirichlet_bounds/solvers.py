"""
Two independent solvers for the first Dirichlet eigenpair of the radial problem

    (w u')' + lambda w u = 0 on (0, R),   u'(0) = 0,   u(R) = 0,

with weight w = f^{n-1}.

``solve_shooting`` integrates the ODE with RK4 from just off the pole and
bisects lambda. ``solve_finite_difference`` assembles a symmetric tridiagonal
finite volume discretization, factors it once per grid and runs inverse
iteration, then extrapolates over grid doublings.
"""
import logging
import math

from typing import Callable, List, Optional, Tuple

import numpy as np

from scipy.linalg import LinAlgError, cho_solve_banded, cholesky_banded

from dirichlet_bounds.config import SolverConfig
from dirichlet_bounds.const import HALF_PI, Method
from dirichlet_bounds.errors import (
    BoundaryValueError,
    BracketFailureError,
    IndefiniteDiscretizationError,
    IterationStallError,
    NonconvergenceError,
    SignChangeError,
)
from dirichlet_bounds.models import ModelManifold, warp_log_derivative
from dirichlet_bounds.structures import RadialEigenSolution
from dirichlet_bounds.utils.quadrature import simpson_uniform

logger = logging.getLogger(__name__)

MAX_BRACKET_STEPS = 60
_SIGN_TOL = 1e-8
BOUNDARY_TOL = 1e-6


#################
# Rayleigh quotient
#################


def rayleigh_quotient(
    model: ModelManifold,
    profile: Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]],
    points: int = 4097,
) -> float:
    """int w u'^2 / int w u^2 over [0, R] for a trial profile ``(u, u') = profile(r)``.

    Any profile with u(R) = 0 gives an upper bound on the first eigenvalue.
    """
    r = np.linspace(0.0, model.R, points)
    h = r[1] - r[0]
    u, du = profile(r)
    w = model.weight(r)
    return simpson_uniform(w * du * du, h) / simpson_uniform(w * u * u, h)


def cosine_profile(R: float):
    """u = cos(pi r / (2R)), the trial profile used to seed the shooting bracket."""
    k = HALF_PI / R

    def profile(r):
        return np.cos(k * r), -k * np.sin(k * r)

    return profile


#################
# Shooting
#################


def _shooting_mesh(model: ModelManifold, config: SolverConfig) -> np.ndarray:
    R = model.R
    eps = config.epsilon(R)
    h_uniform = R / config.grid_points
    nodes = [eps]
    r = eps
    while config.pole_grading * r < h_uniform and r < R:
        r += config.pole_grading * r
        nodes.append(r)
    count = max(1, int(math.ceil((R - r) / h_uniform)))
    return np.concatenate([nodes[:-1], np.linspace(r, R, count + 1)])


class _Shooter:
    """RK4 integrator for u' = p, p' = -c(r) p - lambda u on a fixed mesh.

    The coefficient c = (n - 1) f'/f is evaluated once for every stage point.
    """

    def __init__(self, model: ModelManifold, mesh: np.ndarray):
        self.model = model
        self.mesh = mesh
        self.steps = np.diff(mesh)
        mids = mesh[:-1] + 0.5 * self.steps
        self.c_node = np.asarray(warp_log_derivative(model, mesh), dtype=np.float64).tolist()
        self.c_mid = np.asarray(warp_log_derivative(model, mids), dtype=np.float64).tolist()
        self.h = self.steps.tolist()
        self.n = model.radial_dimension

    def start(self, lambda_: float) -> Tuple[float, float]:
        eps = self.mesh[0]
        return 1.0 - lambda_ * eps * eps / (2.0 * self.n), -lambda_ * eps / self.n

    def has_zero(self, lambda_: float) -> bool:
        """True when u vanishes somewhere in (0, R]. Monotone in lambda."""
        u, p = self.start(lambda_)
        for i, h in enumerate(self.h):
            u, p = self._step(u, p, i, h, lambda_)
            if u <= 0.0:
                return True
        return False

    def trajectory(self, lambda_: float) -> Tuple[np.ndarray, np.ndarray]:
        u = np.empty(len(self.mesh))
        p = np.empty(len(self.mesh))
        u[0], p[0] = self.start(lambda_)
        ui, pk = u[0], p[0]
        for i, h in enumerate(self.h):
            ui, pk = self._step(ui, pk, i, h, lambda_)
            u[i + 1] = ui
            p[i + 1] = pk
        return u, p

    def _step(self, u, p, i, h, lam):
        c0 = self.c_node[i]
        cm = self.c_mid[i]
        c1 = self.c_node[i + 1]
        k1u = p
        k1p = -c0 * p - lam * u
        u2 = u + 0.5 * h * k1u
        p2 = p + 0.5 * h * k1p
        k2u = p2
        k2p = -cm * p2 - lam * u2
        u3 = u + 0.5 * h * k2u
        p3 = p + 0.5 * h * k2p
        k3u = p3
        k3p = -cm * p3 - lam * u3
        u4 = u + h * k3u
        p4 = p + h * k3p
        k4u = p4
        k4p = -c1 * p4 - lam * u4
        return (
            u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
            p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
        )


def _bracket(shooter: _Shooter, seed: float) -> Tuple[float, float]:
    hi = seed
    for _ in range(MAX_BRACKET_STEPS):
        if shooter.has_zero(hi):
            break
        hi *= 2.0
    else:
        raise BracketFailureError(f"no zero of u in (0, R] up to lambda = {hi}")

    lo = 0.5 * hi
    for _ in range(MAX_BRACKET_STEPS):
        if not shooter.has_zero(lo):
            return lo, hi
        hi = lo
        lo *= 0.5
    raise BracketFailureError(f"u has a zero in (0, R] down to lambda = {lo}")


def solve_shooting(
    model: ModelManifold, config: Optional[SolverConfig] = None
) -> RadialEigenSolution:
    """First eigenpair by shooting from the pole and bisecting lambda.

    The solution starts at r = epsilon with the regular series
    u = 1 - lambda eps^2 / (2n), u' = -lambda eps / n. Steps grow
    geometrically from the pole until they reach R / grid_points. lambda is
    bisected on "u has a zero in (0, R]", which is monotone by Sturm
    comparison, so the first eigenvalue is the one found.

    Raises:
        BracketFailureError: if doubling or halving never flips the predicate.
        NonconvergenceError: if bisection hits ``max_iterations``.
    """
    config = config or SolverConfig()
    mesh = _shooting_mesh(model, config)
    shooter = _Shooter(model, mesh)
    seed = rayleigh_quotient(model, cosine_profile(model.R))
    lo, hi = _bracket(shooter, seed)
    logger.debug(f"shooting bracket for {model.describe()}: [{lo}, {hi}]")

    for iteration in range(config.max_iterations):
        if hi - lo <= config.tolerance * hi:
            break
        mid = 0.5 * (lo + hi)
        if shooter.has_zero(mid):
            hi = mid
        else:
            lo = mid
    else:
        raise NonconvergenceError(
            f"bisection did not reach relative width {config.tolerance} "
            f"in {config.max_iterations} iterations"
        )
    lambda_ = 0.5 * (lo + hi)
    logger.debug(f"shooting converged after {iteration} iterations: {lambda_}")

    u, p = shooter.trajectory(lambda_)
    solution = RadialEigenSolution(
        lambda_=lambda_,
        r_grid=np.concatenate([[0.0], mesh]),
        v=np.concatenate([[1.0], u]),
        v_prime=np.concatenate([[0.0], p]),
        d_tilde=model.d_tilde,
        method=Method.SHOOTING.value,
        grid_points=config.grid_points,
    )
    # u(R) scales with the bisection width
    return normalize(solution, max(BOUNDARY_TOL, 10.0 * config.tolerance))


#################
# Finite differences
#################


def _assemble(model: ModelManifold, cells: int):
    """Stiffness band and lumped mass of the finite volume scheme on ``cells`` cells.

    Unknowns sit at r_i = i h, i = 0..cells-1, with u(R) = 0 eliminated. The
    pole cell [0, h/2] has no flux through r = 0, which is the symmetric ghost
    point condition u_1 = u_{-1}.
    """
    h = model.R / cells
    r = np.arange(cells) * h
    w_half = model.weight(r + 0.5 * h)
    diag = np.empty(cells)
    diag[0] = w_half[0] / h
    diag[1:] = (w_half[:-1] + w_half[1:]) / h
    off = -w_half[:-1] / h

    mass = np.empty(cells)
    mass[1:] = h / 6.0 * (
        model.weight(r[1:] - 0.5 * h) + 4.0 * model.weight(r[1:]) + w_half[1:]
    )
    mass[0] = 0.5 * h / 6.0 * (
        model.weight(0.0) + 4.0 * model.weight(0.25 * h) + w_half[0]
    )
    return diag, off, mass, w_half, h


def _grid_eigenpair(
    model: ModelManifold, cells: int, config: SolverConfig
) -> Tuple[float, np.ndarray, float]:
    diag, off, mass, w_half, h = _assemble(model, cells)
    scale = 1.0 / np.sqrt(mass)

    # upper banded storage of M^{-1/2} A M^{-1/2}
    band = np.zeros((2, cells))
    band[1] = diag * scale * scale
    band[0, 1:] = off * scale[:-1] * scale[1:]
    try:
        factor = cholesky_banded(band, lower=False)
    except LinAlgError as err:
        raise IndefiniteDiscretizationError(
            f"stiffness matrix of {model.describe()} is not positive definite"
        ) from err

    r = np.arange(cells) * h
    y = np.cos(HALF_PI * r / model.R) / scale
    y /= np.linalg.norm(y)
    estimate = np.inf
    for iteration in range(config.max_iterations):
        z = cho_solve_banded((factor, False), y)
        norm = np.linalg.norm(z)
        new_estimate = 1.0 / float(y @ z)
        z /= norm
        if z[0] < 0:
            z = -z
        done = abs(new_estimate - estimate) <= config.tolerance * abs(new_estimate) and (
            np.linalg.norm(z - y) <= math.sqrt(config.tolerance)
        )
        y = z
        estimate = new_estimate
        if done:
            break
    else:
        raise IterationStallError(
            f"inverse iteration on {cells} cells did not settle in "
            f"{config.max_iterations} iterations"
        )
    logger.debug(f"inverse iteration on {cells} cells: {iteration + 1} iterations")

    x = y * scale
    x_full = np.append(x, 0.0)
    energy = float(np.sum(w_half * np.diff(x_full) ** 2) / h)
    lambda_ = energy / float(np.sum(mass * x * x))
    return lambda_, x_full, h


def richardson(values: List[float], order: int = 2) -> float:
    """Extrapolate values computed on grids that halve h each time, assuming an
    error expansion in even powers of h starting at ``h^order``.
    """
    table = list(values)
    power = order
    while len(table) > 1:
        factor = 2.0**power
        table = [(factor * b - a) / (factor - 1.0) for a, b in zip(table, table[1:])]
        power += 2
    return table[0]


def solve_finite_difference(
    model: ModelManifold, config: Optional[SolverConfig] = None
) -> RadialEigenSolution:
    """First eigenpair from the finite volume scheme with Richardson extrapolation.

    Each refinement multiplies the grid by the given factor. The eigenvalue on
    each grid comes from inverse iteration on the banded Cholesky factor and is
    then read off the energy form of the Rayleigh quotient. The profile is the
    one on the finest grid.

    Raises:
        IndefiniteDiscretizationError: if the Cholesky factorization fails.
        IterationStallError: if inverse iteration does not settle.
    """
    config = config or SolverConfig()
    eigenvalues = []
    profile = None
    for multiplier in config.refinements:
        cells = config.grid_points * multiplier
        lambda_, profile, h = _grid_eigenpair(model, cells, config)
        eigenvalues.append(lambda_)
    logger.debug(f"finite difference eigenvalues for {model.describe()}: {eigenvalues}")

    r = np.arange(len(profile)) * h
    v = profile / profile[0]
    v_prime = np.gradient(v, h, edge_order=2)
    v_prime[0] = 0.0
    solution = RadialEigenSolution(
        lambda_=richardson(eigenvalues),
        r_grid=r,
        v=v,
        v_prime=v_prime,
        d_tilde=model.d_tilde,
        method=Method.FINITE_DIFFERENCE.value,
        grid_points=config.grid_points,
        extrapolated=len(eigenvalues) > 1,
    )
    return normalize(solution)


def convergence_order(
    model: ModelManifold,
    config: Optional[SolverConfig] = None,
    exact: Optional[float] = None,
    levels: int = 3,
) -> float:
    """Observed order of the unextrapolated finite difference eigenvalue.

    Solves on ``levels`` grids that double each time. With ``exact`` the
    error ratio of the last two grids is used, otherwise the ratio of
    successive differences.
    """
    config = config or SolverConfig()
    values = []
    for k in range(levels):
        cells = config.grid_points * 2**k
        lambda_, _, _ = _grid_eigenpair(model, cells, config)
        values.append(lambda_)
    if exact is not None:
        return math.log2(abs(values[-2] - exact) / abs(values[-1] - exact))
    return math.log2(abs(values[-3] - values[-2]) / abs(values[-2] - values[-1]))


#################
# Normalization and dispatch
#################


def normalize(
    solution: RadialEigenSolution, boundary_tolerance: float = BOUNDARY_TOL
) -> RadialEigenSolution:
    """Rescale so that sup v = 1 and pin v(R) = 0.

    Raises:
        SignChangeError: if v changes sign inside (0, R), so the profile is not
            a first eigenfunction.
        BoundaryValueError: if the rescaled |v(R)| exceeds ``boundary_tolerance``.
    """
    v = np.asarray(solution.v, dtype=np.float64)
    peak = v[np.argmax(np.abs(v))]
    if peak == 0:
        raise SignChangeError("eigenfunction vanishes identically")
    v = v / peak
    v_prime = np.asarray(solution.v_prime, dtype=np.float64) / peak
    if np.min(v[:-1]) < -_SIGN_TOL:
        raise SignChangeError(
            f"eigenfunction changes sign at r = {solution.r_grid[np.argmin(v[:-1])]}"
        )
    if abs(v[-1]) > boundary_tolerance:
        raise BoundaryValueError(
            f"eigenfunction is {v[-1]:.3g} at the boundary, expected 0 within {boundary_tolerance:.3g}"
        )
    v = np.clip(v, 0.0, None)
    v[-1] = 0.0
    return RadialEigenSolution(
        lambda_=solution.lambda_,
        r_grid=np.asarray(solution.r_grid, dtype=np.float64),
        v=v,
        v_prime=v_prime,
        d_tilde=solution.d_tilde,
        method=solution.method,
        grid_points=solution.grid_points,
        extrapolated=solution.extrapolated,
    )


def solve(model: ModelManifold, config: Optional[SolverConfig] = None) -> RadialEigenSolution:
    config = config or SolverConfig()
    if config.method == Method.FINITE_DIFFERENCE.value:
        return solve_finite_difference(model, config)
    return solve_shooting(model, config)
