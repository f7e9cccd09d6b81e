"""
Closed-form lower bounds for the first Dirichlet eigenvalue of a compact manifold
with boundary whose Ricci curvature is bounded below by ``(n - 1) K``.

The curvature constant is always passed as ``K`` itself; the formulas form
``(n - 1) K`` internally. ``K = 0`` is accepted so the flat comparison can be
exercised, the violated hypothesis is recorded on the ``BoundResult``.
"""
import math

from dataclasses import dataclass
from typing import List, Optional

from dirichlet_bounds.const import PI_SQUARED
from dirichlet_bounds.errors import (
    InvalidDimensionError,
    InvalidGeometryError,
    NoApplicableBoundError,
    NonpositiveDiameterError,
    NonpositiveInDiameterError,
    NonpositiveLambdaError,
)
from dirichlet_bounds.structures import BoundResult, DeltaResult

REILLY = "reilly"
ZHONG_YANG = "zhong_yang"
YANG = "yang"
LING = "ling"

BOUND_NAMES = (REILLY, ZHONG_YANG, YANG, LING)

# Preference among (numerically) tied maxima, highest first
_TIE_PRIORITY = (LING, YANG, ZHONG_YANG, REILLY)
_TIE_RTOL = 1e-12


@dataclass
class GeometryData:
    """Geometric inputs to the bound formulas.

    Args:
        n: Dimension, at least 2.
        K: Ricci constant, ``Ric >= (n - 1) K``. Must be nonnegative.
        d: Diameter, optional.
        d_tilde: In-diameter, twice the largest distance to the boundary. Optional.
        boundary_mean_curvature: Mean curvature of the boundary with respect to the
            outward normal, if known. Only its sign is used.
    """

    n: int
    K: float
    d: Optional[float] = None
    d_tilde: Optional[float] = None
    boundary_mean_curvature: Optional[float] = None

    def __post_init__(self):
        _check_dimension(self.n)
        _check_curvature(self.K)
        if self.d is not None:
            _check_diameter(self.d)
        if self.d_tilde is not None:
            _check_in_diameter(self.d_tilde)
        if self.d is not None and self.d_tilde is not None and self.d_tilde > self.d:
            raise InvalidGeometryError(
                f"in-diameter d_tilde={self.d_tilde} exceeds diameter d={self.d}"
            )

    def hypotheses(self, require_positive_K: bool = True) -> List[tuple]:
        flags = []
        if require_positive_K:
            flags.append(("positive_K", self.K > 0))
        else:
            flags.append(("nonnegative_K", self.K >= 0))
        if self.boundary_mean_curvature is not None:
            flags.append(
                ("nonnegative_mean_curvature", self.boundary_mean_curvature >= 0)
            )
        return flags


def _check_dimension(n: int):
    if int(n) != n or n < 2:
        raise InvalidDimensionError(f"n must be an integer >= 2, got {n}")


def _check_curvature(K: float):
    if not math.isfinite(K) or K < 0:
        raise InvalidGeometryError(f"K must be finite and >= 0, got {K}")


def _check_diameter(d: float):
    if not math.isfinite(d) or d <= 0:
        raise NonpositiveDiameterError(f"diameter d must be > 0, got {d}")


def _check_in_diameter(d_tilde: float):
    if not math.isfinite(d_tilde) or d_tilde <= 0:
        raise NonpositiveInDiameterError(
            f"in-diameter d_tilde must be > 0, got {d_tilde}"
        )


def reilly_bound(n: int, K: float) -> float:
    """lambda >= nK."""
    _check_dimension(n)
    _check_curvature(K)
    return n * K


def zhong_yang_bound(d: float) -> float:
    """lambda >= pi^2 / d^2."""
    _check_diameter(d)
    return PI_SQUARED / (d * d)


def yang_bound(n: int, K: float, d_tilde: float) -> float:
    """lambda >= (n - 1) K / 4 + pi^2 / d_tilde^2."""
    _check_dimension(n)
    _check_curvature(K)
    _check_in_diameter(d_tilde)
    return 0.25 * (n - 1) * K + PI_SQUARED / (d_tilde * d_tilde)


def ling_bound(n: int, K: float, d_tilde: float) -> float:
    """lambda >= (n - 1) K / 2 + pi^2 / d_tilde^2."""
    _check_dimension(n)
    _check_curvature(K)
    _check_in_diameter(d_tilde)
    return 0.5 * (n - 1) * K + PI_SQUARED / (d_tilde * d_tilde)


def delta_bound(d_tilde: float, delta: float) -> float:
    """lambda >= pi^2 / ((1 - delta) d_tilde^2), the form before delta is expanded."""
    _check_in_diameter(d_tilde)
    if not 0 <= delta < 1:
        raise InvalidGeometryError(f"delta must lie in [0, 1), got {delta}")
    return PI_SQUARED / ((1.0 - delta) * d_tilde * d_tilde)


def all_bounds(geometry: GeometryData) -> List[BoundResult]:
    """Every bound applicable to ``geometry`` in the order reilly, zhong_yang, yang, ling."""
    results = [
        BoundResult(
            name=REILLY,
            value=reilly_bound(geometry.n, geometry.K),
            hypotheses_met=geometry.hypotheses(),
        )
    ]
    if geometry.d is not None:
        results.append(
            BoundResult(
                name=ZHONG_YANG,
                value=zhong_yang_bound(geometry.d),
                hypotheses_met=geometry.hypotheses(require_positive_K=False),
            )
        )
    if geometry.d_tilde is not None:
        for name, fn in ((YANG, yang_bound), (LING, ling_bound)):
            results.append(
                BoundResult(
                    name=name,
                    value=fn(geometry.n, geometry.K, geometry.d_tilde),
                    hypotheses_met=geometry.hypotheses(),
                )
            )
    return results


def best_bound(geometry: GeometryData) -> BoundResult:
    """The largest applicable bound. Ties resolve to ``ling``, then yang, zhong_yang, reilly.

    Raises:
        NoApplicableBoundError: if neither ``d`` nor ``d_tilde`` is present.
    """
    if geometry.d is None and geometry.d_tilde is None:
        raise NoApplicableBoundError(
            "best_bound needs at least one of d or d_tilde"
        )
    results = all_bounds(geometry)
    top = max(r.value for r in results)
    tied = {
        r.name: r
        for r in results
        if math.isclose(r.value, top, rel_tol=_TIE_RTOL, abs_tol=0.0)
    }
    for name in _TIE_PRIORITY:
        if name in tied:
            return tied[name]
    # unreachable, the maximum is always tied with itself
    raise NoApplicableBoundError("no bound attained the maximum")


def delta_of(lambda_: float, n: int, K: float) -> DeltaResult:
    """delta = (n - 1) K / (2 lambda).

    ``exceeds_max`` on the result flags delta > (n - 1) / (2n), which can only
    happen when lambda is below nK.
    """
    if not math.isfinite(lambda_) or lambda_ <= 0:
        raise NonpositiveLambdaError(f"lambda must be > 0, got {lambda_}")
    alpha = 0.5 * (n - 1) * K
    return DeltaResult(delta=alpha / lambda_, delta_max=(n - 1) / (2.0 * n))


def crossover_radius(n: int, K: float) -> float:
    """Cap radius at which ling_bound(n, K, 2R) equals reilly_bound(n, K).

    Smaller caps favour ling, larger ones reilly.
    """
    _check_dimension(n)
    if K <= 0:
        raise InvalidGeometryError(f"crossover needs K > 0, got {K}")
    return math.pi / math.sqrt(2.0 * (n + 1) * K)


def z_floor(n: int) -> float:
    """Lower bound of z(0) = 1 - (pi^2/4 - 1) delta over delta <= (n - 1) / (2n)."""
    _check_dimension(n)
    return 1.0 - (PI_SQUARED / 4.0 - 1.0) * (n - 1) / (2.0 * n)
