"""
Rotationally symmetric model manifolds dr^2 + f(r)^2 g_{S^{n-1}} on the ball
of radius R around a pole, plus the 1-D interval. The radial Laplacian is

    u'' + (n - 1) f'/f u' = -lambda u

and all curvature quantities the bounds care about follow from the warp f.

The interval [0, L] is treated as the radial problem on [0, L/2] with weight 1
(radial dimension 1), whose first eigenfunction is even about the midpoint.
"""
import logging
import math

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Union

import numpy as np

from numpy.polynomial import Polynomial
from scipy.interpolate import CubicSpline

from dirichlet_bounds.const import PI_SQUARED, Variant
from dirichlet_bounds.errors import (
    InvalidModelError,
    PoleError,
    WarpNotSmoothError,
)
from dirichlet_bounds.utils.bessel import disk_eigenvalue

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Resolution of the Ricci infimum search, also the central difference step
# for sampled warps, as a fraction of R.
RICCI_RESOLUTION = 4096
_SMOOTHNESS_RTOL = 1e-3
_POLE_TOL = 1e-6


#################
# Warps
#################


class Warp(ABC):
    """Warping function of the metric. Must satisfy f(0) = 0 and f'(0) = 1."""

    closed_form = True
    """False when second derivatives have to come from finite differences."""

    @abstractmethod
    def f(self, r: ArrayLike) -> ArrayLike:
        pass

    @abstractmethod
    def df(self, r: ArrayLike) -> ArrayLike:
        pass

    @abstractmethod
    def d2f(self, r: ArrayLike) -> ArrayLike:
        pass

    @abstractmethod
    def as_dict(self) -> Dict[str, Any]:
        pass


@dataclass
class SinWarp(Warp):
    """f(r) = sin(sqrt(K) r) / sqrt(K), the round sphere of curvature K."""

    K: float = 1.0

    def __post_init__(self):
        if not self.K > 0:
            raise InvalidModelError(f"sin warp needs K > 0, got {self.K}")
        self._k = math.sqrt(self.K)

    def f(self, r):
        return np.sin(self._k * r) / self._k

    def df(self, r):
        return np.cos(self._k * r)

    def d2f(self, r):
        return -self._k * np.sin(self._k * r)

    def as_dict(self):
        return {"warp": "sin", "warp_param": self.K}


@dataclass
class SinhWarp(Warp):
    """f(r) = sinh(sqrt(kappa) r) / sqrt(kappa), hyperbolic space of curvature -kappa."""

    kappa: float = 1.0

    def __post_init__(self):
        if not self.kappa > 0:
            raise InvalidModelError(f"sinh warp needs kappa > 0, got {self.kappa}")
        self._k = math.sqrt(self.kappa)

    def f(self, r):
        return np.sinh(self._k * r) / self._k

    def df(self, r):
        return np.cosh(self._k * r)

    def d2f(self, r):
        return self._k * np.sinh(self._k * r)

    def as_dict(self):
        return {"warp": "sinh", "warp_param": self.kappa}


class IdentityWarp(Warp):
    """f(r) = r, flat space."""

    def f(self, r):
        return np.asarray(r, dtype=np.float64) * 1.0

    def df(self, r):
        return np.ones_like(np.asarray(r, dtype=np.float64))

    def d2f(self, r):
        return np.zeros_like(np.asarray(r, dtype=np.float64))

    def as_dict(self):
        return {"warp": "identity"}

    def __eq__(self, other):
        return isinstance(other, IdentityWarp)


@dataclass
class PolynomialWarp(Warp):
    """f(r) = sum_k c_k r^k with c_0 = 0 and c_1 = 1."""

    coeffs: Sequence[float] = (0.0, 1.0)

    def __post_init__(self):
        self.coeffs = tuple(float(c) for c in self.coeffs)
        if len(self.coeffs) < 2 or self.coeffs[0] != 0 or self.coeffs[1] != 1:
            raise InvalidModelError(
                f"polynomial warp needs c0 = 0 and c1 = 1, got {self.coeffs}"
            )
        self._poly = Polynomial(self.coeffs)
        self._d1 = self._poly.deriv(1)
        self._d2 = self._poly.deriv(2)

    def f(self, r):
        return self._poly(r)

    def df(self, r):
        return self._d1(r)

    def d2f(self, r):
        return self._d2(r)

    def as_dict(self):
        return {"warp": "polynomial", "warp_coeffs": list(self.coeffs)}


@dataclass
class SampledWarp(Warp):
    """Cubic spline through samples (r_i, f_i) starting at (0, 0)."""

    r: Sequence[float] = field(default_factory=list)
    values: Sequence[float] = field(default_factory=list)
    closed_form = False

    def __post_init__(self):
        r = np.asarray(self.r, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if r.ndim != 1 or r.shape != values.shape or len(r) < 4:
            raise InvalidModelError("sampled warp needs matching r and f, at least 4 each")
        if r[0] != 0 or values[0] != 0:
            raise InvalidModelError("sampled warp must start at r = 0 with f = 0")
        if np.any(np.diff(r) <= 0):
            raise InvalidModelError("sampled warp radii must be strictly increasing")
        self.r = r
        self.values = values
        self._spline = CubicSpline(r, values)

    @property
    def r_max(self) -> float:
        return float(self.r[-1])

    def f(self, r):
        return self._spline(r)

    def df(self, r):
        return self._spline(r, 1)

    def d2f(self, r):
        return self._spline(r, 2)

    def d2f_central(self, r: np.ndarray, h: float) -> np.ndarray:
        return (self._spline(r + h) - 2.0 * self._spline(r) + self._spline(r - h)) / (
            h * h
        )

    def as_dict(self):
        return {
            "warp": "samples",
            "warp_r": self.r.tolist(),
            "warp_f": self.values.tolist(),
        }


def warp_from_dict(spec: Dict[str, Any]) -> Warp:
    """Build a warp from flat config keys ``warp`` plus ``warp_param``,
    ``warp_coeffs`` or ``warp_r`` / ``warp_f``.
    """
    name = spec.get("warp")
    if name == "sin":
        return SinWarp(float(spec.get("warp_param", 1.0)))
    if name == "sinh":
        return SinhWarp(float(spec.get("warp_param", 1.0)))
    if name == "identity":
        return IdentityWarp()
    if name == "polynomial":
        if "warp_coeffs" not in spec:
            raise InvalidModelError("polynomial warp needs warp_coeffs")
        return PolynomialWarp(spec["warp_coeffs"])
    if name == "samples":
        if "warp_r" not in spec or "warp_f" not in spec:
            raise InvalidModelError("sampled warp needs warp_r and warp_f")
        return SampledWarp(spec["warp_r"], spec["warp_f"])
    raise InvalidModelError(f"Unknown warp: {name}")


#################
# Model manifolds
#################


@dataclass
class ModelManifold:
    """A rotationally symmetric ball (or the interval) with boundary at r = R.

    Use the constructors ``spherical_cap``, ``euclidean_ball``,
    ``warped_ball`` and ``interval`` rather than building this directly.
    """

    variant: Variant
    n: int
    """Dimension of the manifold; 1 for the interval."""

    R: float
    """Radius of the ball. For the interval, half its length."""

    warp: Warp
    K: float = 0.0
    """Curvature parameter of a spherical cap, 0 otherwise."""

    def __post_init__(self):
        self.variant = Variant(self.variant)
        if self.variant == Variant.INTERVAL:
            if self.n != 1:
                raise InvalidModelError("interval has dimension 1")
        elif int(self.n) != self.n or self.n < 2:
            raise InvalidModelError(f"n must be an integer >= 2, got {self.n}")
        if not (math.isfinite(self.R) and self.R > 0):
            raise InvalidModelError(f"R must be > 0, got {self.R}")
        if self.variant == Variant.SPHERICAL_CAP:
            if not self.K > 0:
                raise InvalidModelError(f"spherical cap needs K > 0, got {self.K}")
            if self.R >= math.pi / math.sqrt(self.K):
                raise InvalidModelError(
                    f"cap radius R={self.R} must be < pi/sqrt(K)="
                    f"{math.pi / math.sqrt(self.K)}"
                )
        if self.variant == Variant.WARPED_BALL:
            _validate_warp(self.warp, self.R)

    @property
    def radius(self) -> float:
        return self.R

    @property
    def d_tilde(self) -> float:
        """Twice the largest distance to the boundary, attained at the pole."""
        return 2.0 * self.R

    @property
    def length(self) -> float:
        """Diameter of the domain for caps and balls, the length for the interval."""
        if self.variant == Variant.SPHERICAL_CAP:
            if self.R <= math.pi / (2.0 * math.sqrt(self.K)):
                return 2.0 * self.R
            return math.pi / math.sqrt(self.K)
        return 2.0 * self.R

    @property
    def radial_dimension(self) -> int:
        return self.n

    def weight(self, r: ArrayLike) -> ArrayLike:
        """Volume density f^{n-1} of the radial measure."""
        if self.n == 1:
            return np.ones_like(np.asarray(r, dtype=np.float64))
        return np.power(self.warp.f(r), self.n - 1)

    def as_dict(self) -> Dict[str, Any]:
        spec: Dict[str, Any] = {"n": self.n}
        if self.variant == Variant.SPHERICAL_CAP:
            spec.update(model="cap", K=self.K, R=self.R)
        elif self.variant == Variant.EUCLIDEAN_BALL:
            spec.update(model="ball", R=self.R)
        elif self.variant == Variant.WARPED_BALL:
            spec.update(model="warped", R=self.R, **self.warp.as_dict())
        else:
            spec = {"model": "interval", "L": 2.0 * self.R}
        return spec

    def describe(self) -> str:
        if self.variant == Variant.INTERVAL:
            return f"interval(L={2.0 * self.R:g})"
        if self.variant == Variant.SPHERICAL_CAP:
            return f"spherical_cap(n={self.n}, K={self.K:g}, R={self.R:g})"
        return f"{self.variant.value}(n={self.n}, R={self.R:g})"


def _validate_warp(warp: Warp, R: float):
    if isinstance(warp, SampledWarp) and R > warp.r_max:
        raise InvalidModelError(
            f"R={R} lies beyond the last warp sample at {warp.r_max}"
        )
    if abs(float(warp.f(0.0))) > _POLE_TOL:
        raise InvalidModelError("warp must vanish at the pole, f(0) = 0")
    if abs(float(warp.df(0.0)) - 1.0) > _POLE_TOL:
        raise InvalidModelError("warp must have f'(0) = 1 for a smooth pole")
    probe = np.linspace(R / RICCI_RESOLUTION, R, RICCI_RESOLUTION)
    if np.any(warp.f(probe) <= 0):
        raise InvalidModelError(f"warp must be positive on (0, {R}]")


def spherical_cap(n: int, K: float, R: float) -> ModelManifold:
    """Geodesic ball of radius R in the round sphere of curvature K."""
    if not K > 0:
        raise InvalidModelError(f"spherical cap needs K > 0, got {K}")
    return ModelManifold(Variant.SPHERICAL_CAP, n, R, SinWarp(K), K=K)


def euclidean_ball(n: int, R: float) -> ModelManifold:
    return ModelManifold(Variant.EUCLIDEAN_BALL, n, R, IdentityWarp())


def warped_ball(n: int, warp: Warp, R: float) -> ModelManifold:
    return ModelManifold(Variant.WARPED_BALL, n, R, warp)


def interval(L: float) -> ModelManifold:
    if not (math.isfinite(L) and L > 0):
        raise InvalidModelError(f"interval length L must be > 0, got {L}")
    return ModelManifold(Variant.INTERVAL, 1, 0.5 * L, IdentityWarp())


_MODEL_ALIASES = {
    "cap": Variant.SPHERICAL_CAP,
    "spherical_cap": Variant.SPHERICAL_CAP,
    "ball": Variant.EUCLIDEAN_BALL,
    "euclidean_ball": Variant.EUCLIDEAN_BALL,
    "warped": Variant.WARPED_BALL,
    "warped_ball": Variant.WARPED_BALL,
    "interval": Variant.INTERVAL,
}


def _require(spec: Dict[str, Any], key: str) -> float:
    if spec.get(key) is None:
        raise InvalidModelError(f"model {spec.get('model')} needs '{key}'")
    try:
        return float(spec[key])
    except (TypeError, ValueError) as err:
        raise InvalidModelError(f"'{key}' must be a number, got {spec[key]!r}") from err


def model_from_dict(spec: Dict[str, Any]) -> ModelManifold:
    """Build a model from the flat config keys ``model``, ``n``, ``K``, ``R``,
    ``L`` and the ``warp*`` keys.
    """
    name = spec.get("model")
    if name not in _MODEL_ALIASES:
        raise InvalidModelError(f"Unknown model: {name!r}")
    variant = _MODEL_ALIASES[name]
    if variant == Variant.INTERVAL:
        return interval(_require(spec, "L"))

    n = _require(spec, "n")
    if n != int(n):
        raise InvalidModelError(f"n must be an integer, got {n}")
    n = int(n)
    R = _require(spec, "R")
    if variant == Variant.SPHERICAL_CAP:
        return spherical_cap(n, _require(spec, "K"), R)
    if variant == Variant.EUCLIDEAN_BALL:
        return euclidean_ball(n, R)
    return warped_ball(n, warp_from_dict(spec), R)


#################
# Geometry
#################


def warp_log_derivative(model: ModelManifold, r: ArrayLike) -> ArrayLike:
    """(n - 1) f'(r) / f(r), the first order coefficient of the radial Laplacian.

    Raises:
        PoleError: at r <= 0, where the coefficient blows up like (n - 1) / r.
    """
    arr = np.asarray(r, dtype=np.float64)
    if np.any(arr <= 0) or np.any(arr > model.R * (1.0 + 1e-12)):
        raise PoleError(f"r must lie in (0, R={model.R}]")
    if model.n == 1:
        out = np.zeros_like(arr)
    else:
        out = (model.n - 1) * model.warp.df(arr) / model.warp.f(arr)
    return float(out) if out.ndim == 0 else out


def _ricci_curves(model: ModelManifold, r: np.ndarray, d2f: np.ndarray):
    f = model.warp.f(r)
    df = model.warp.df(r)
    radial = -d2f / f
    if model.n == 2:
        return radial, radial
    tangential = (-d2f / f + (model.n - 2) * (1.0 - df * df) / (f * f)) / (
        model.n - 1
    )
    return radial, tangential


def ricci_lower(model: ModelManifold) -> float:
    """Largest K with Ric >= (n - 1) K, i.e. the infimum of the Ricci form over
    unit vectors divided by (n - 1).

    Caps return their K exactly and flat models 0. Warped balls take the
    minimum of the radial and tangential curvatures over a grid of (0, R].

    Raises:
        WarpNotSmoothError: when the finite difference second derivative of a
            sampled warp changes between steps h and 2h.
    """
    if model.variant == Variant.SPHERICAL_CAP:
        return model.K
    if model.variant in (Variant.EUCLIDEAN_BALL, Variant.INTERVAL):
        return 0.0

    h = model.R / RICCI_RESOLUTION
    r = np.linspace(h, model.R, RICCI_RESOLUTION)
    warp = model.warp
    if warp.closed_form:
        d2f = warp.d2f(r)
    else:
        d2f = warp.d2f_central(r, h)
        coarse = warp.d2f_central(r, 2.0 * h)
        scale = 1.0 + np.max(np.abs(d2f))
        if np.max(np.abs(d2f - coarse)) > _SMOOTHNESS_RTOL * scale:
            raise WarpNotSmoothError(
                "second derivative of the sampled warp is not stable under refinement"
            )
    radial, tangential = _ricci_curves(model, r, d2f)
    lower = float(min(np.min(radial), np.min(tangential)))
    logger.debug(f"ricci_lower for {model.describe()}: {lower}")
    return lower


def boundary_mean_curvature(model: ModelManifold) -> float:
    """(n - 1) f'(R) / f(R), the mean curvature of the sphere r = R with respect
    to the outward normal. The interval endpoints have no curvature.
    """
    if model.n == 1:
        return 0.0
    return float((model.n - 1) * model.warp.df(model.R) / model.warp.f(model.R))


def eigenvalue_oracle(model: ModelManifold) -> Optional[float]:
    """First Dirichlet eigenvalue in the cases where it is known in closed form.

    - interval: pi^2 / L^2
    - hemisphere of curvature K: nK, eigenfunction cos(sqrt(K) r)
    - flat disk: j_{0,1}^2 / R^2; flat 3-ball: pi^2 / R^2
    """
    if model.variant == Variant.INTERVAL:
        return PI_SQUARED / (2.0 * model.R) ** 2
    if model.variant == Variant.SPHERICAL_CAP:
        hemisphere = math.pi / (2.0 * math.sqrt(model.K))
        if math.isclose(model.R, hemisphere, rel_tol=1e-12):
            return model.n * model.K
        return None
    if model.variant == Variant.EUCLIDEAN_BALL:
        if model.n == 2:
            return disk_eigenvalue(model.R)
        if model.n == 3:
            return PI_SQUARED / (model.R * model.R)
    return None
