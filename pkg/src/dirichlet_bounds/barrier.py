"""
The barrier function xi on [-pi/2, pi/2], the test function z = 1 + delta * xi,
their derivatives, ODE residuals and the property suite that checks every claim
made about xi.

The closed form

    xi(t) = (cos^2 t + 2 t sin t cos t + t^2 - pi^2/4) / cos^2 t

is a 0/0 at the endpoints. For |t| > pi/2 - SERIES_SWITCH we evaluate the
Taylor expansion in s = pi/2 - |t| instead,

    xi = -(2 pi/3) s + s^2 - (4 pi/45) s^3 + s^4/9 - (4 pi/315) s^5 + ...

whose coefficients are generated exactly (rational plus rational * pi parts)
by power series division, so no digits are lost to cancellation near the
endpoint.

Two derivative routes are available. The ``ode`` route takes xi' from its
closed form and solves the second order equation for xi'' and the
differentiated equation for xi'''. The ``direct`` route differentiates
xi = 1 + 2 t tan t + (t^2 - pi^2/4) sec^2 t analytically. Residual checks use
the direct route so they are not satisfied by construction.
"""
import math

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from numpy.polynomial import Polynomial

import dirichlet_bounds.const as const
from dirichlet_bounds.const import HALF_PI, PI_SQUARED, SERIES_SWITCH
from dirichlet_bounds.errors import (
    BadIntervalError,
    ConfigError,
    InvalidGeometryError,
    NonpositiveZError,
    XiDomainError,
)
from dirichlet_bounds.structures import PropertyOutcome, XiEvaluation, XiReport
from dirichlet_bounds.utils.quadrature import integrate_panels

ArrayLike = Union[float, np.ndarray]

# Series band for the fourth and fifth derivatives. The chain through the
# differentiated equations divides by cos t twice, so it is only used where
# cos t is not small.
HIGHER_SERIES_SWITCH = 0.5
SERIES_TERMS = const.SERIES_ORDER
QUADRATURE_TOL = 1e-10

DIRECT = "direct"
ODE = "ode"


#################
# Endpoint series
#################


def _sin_squared_coeffs(count: int) -> List[Fraction]:
    coeffs = [Fraction(0)] * count
    for k in range(2, count, 2):
        sign = 1 if (k // 2) % 2 == 1 else -1
        coeffs[k] = Fraction(sign * 2 ** (k - 1), math.factorial(k))
    return coeffs


def _sin_double_coeffs(count: int) -> List[Fraction]:
    coeffs = [Fraction(0)] * count
    for k in range(1, count, 2):
        sign = 1 if ((k - 1) // 2) % 2 == 0 else -1
        coeffs[k] = Fraction(sign * 2**k, math.factorial(k))
    return coeffs


def _divide_series(num: List[Fraction], den: List[Fraction], count: int):
    out = []
    for k in range(count):
        acc = num[k]
        for j in range(1, k + 1):
            acc -= den[j] * out[k - j]
        out.append(acc / den[0])
    return out


@lru_cache(maxsize=None)
def endpoint_series_parts(terms: int = SERIES_TERMS) -> Tuple[tuple, tuple]:
    """Exact coefficients of xi in s = pi/2 - |t|, split as ``a_k = p_k + pi * q_k``.

    Returns two tuples ``(p, q)`` of length ``terms + 1`` (index = power of s).
    """
    count = terms + 4
    sin_sq = _sin_squared_coeffs(count)
    sin_2 = _sin_double_coeffs(count)

    # numerator N(s) = P(s) + pi Q(s) with
    #   P = sin^2 s - s sin 2s + s^2,  Q = sin(2s)/2 - s
    rational = [Fraction(0)] * count
    with_pi = [Fraction(0)] * count
    for k in range(count):
        rational[k] = sin_sq[k] - (sin_2[k - 1] if k >= 1 else 0)
        with_pi[k] = sin_2[k] / 2
    rational[2] += 1
    with_pi[1] -= 1

    # N starts at s^3 and sin^2 s at s^2, so xi = s * (N / s^3) / (sin^2 s / s^2)
    den = sin_sq[2:]
    p = _divide_series(rational[3:], den, terms)
    q = _divide_series(with_pi[3:], den, terms)
    return tuple([Fraction(0)] + p), tuple([Fraction(0)] + q)


@lru_cache(maxsize=None)
def _series_polynomial(terms: int = SERIES_TERMS) -> Polynomial:
    p, q = endpoint_series_parts(terms)
    return Polynomial([float(a) + math.pi * float(b) for a, b in zip(p, q)])


@lru_cache(maxsize=None)
def _series_derivative(order: int) -> Polynomial:
    return _series_polynomial().deriv(order) if order else _series_polynomial()


def _series_eval(t: np.ndarray, order: int) -> np.ndarray:
    """d^order xi / dt^order on the series band, using d/dt = -sign(t) d/ds."""
    s = HALF_PI - np.abs(t)
    value = _series_derivative(order)(s)
    if order % 2:
        value = -np.sign(t) * value
    return value


#################
# Closed forms
#################


def _closed_value(t: np.ndarray) -> np.ndarray:
    c = np.cos(t)
    s = np.sin(t)
    return (c * c + 2.0 * t * s * c + t * t - PI_SQUARED / 4.0) / (c * c)


def _closed_d1(t: np.ndarray) -> np.ndarray:
    c = np.cos(t)
    s = np.sin(t)
    num = 2.0 * t * c + t * t * s + c * c * s - (PI_SQUARED / 4.0) * s
    return 2.0 * num / (c * c * c)


def _ode_d2(t, value, d1):
    c = np.cos(t)
    s = np.sin(t)
    return 2.0 * (d1 * c * s + value + 2.0 * c * c) / (c * c)


def _ode_d3(t, d1, d2):
    c = np.cos(t)
    s = np.sin(t)
    return 2.0 * (2.0 * d2 * s + 2.0 * d1 * c - 4.0 * s) / c


def _ode_d4(t, d1, d2, d3):
    c = np.cos(t)
    s = np.sin(t)
    return (5.0 * d3 * s + 8.0 * d2 * c - 4.0 * d1 * s - 8.0 * c) / c


def _ode_d5(t, d1, d2, d3, d4):
    c = np.cos(t)
    s = np.sin(t)
    return (
        6.0 * d4 * s + 13.0 * d3 * c - 12.0 * d2 * s - 4.0 * d1 * c + 8.0 * s
    ) / c


def _direct_derivatives(t: np.ndarray):
    c = np.cos(t)
    tn = np.tan(t)
    sec2 = 1.0 / (c * c)
    p = (t - HALF_PI) * (t + HALF_PI)
    g = sec2 * (2.0 * tn * tn + sec2)
    value = 1.0 + 2.0 * t * tn + p * sec2
    d1 = 2.0 * tn + 4.0 * t * sec2 + 2.0 * p * sec2 * tn
    d2 = 6.0 * sec2 + 12.0 * t * sec2 * tn + 2.0 * p * g
    d3 = (
        24.0 * sec2 * tn
        + 16.0 * t * g
        + 8.0 * p * sec2 * tn * (tn * tn + 2.0 * sec2)
    )
    return value, d1, d2, d3


#################
# Evaluation
#################


def _prepare(t: ArrayLike) -> Tuple[np.ndarray, bool]:
    scalar = np.ndim(t) == 0
    arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if not np.all(np.isfinite(arr)) or np.any(np.abs(arr) > HALF_PI):
        raise XiDomainError("xi is defined on [-pi/2, pi/2] only")
    return arr, scalar


def _finish(arr: np.ndarray, scalar: bool) -> ArrayLike:
    return float(arr[0]) if scalar else arr


class XiFunctions:
    """Evaluates xi and its derivatives on [-pi/2, pi/2].

    The property suite takes an instance of this class so that a deliberately
    wrong variant can be checked against it.
    """

    def value(self, t: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(t)
        out = np.empty_like(arr)
        series = np.abs(arr) > HALF_PI - SERIES_SWITCH
        out[series] = _series_eval(arr[series], 0)
        out[~series] = _closed_value(arr[~series])
        return _finish(out, scalar)

    def derivatives(self, t: ArrayLike, route: str = ODE) -> XiEvaluation:
        arr, scalar = _prepare(t)
        series = np.abs(arr) > HALF_PI - SERIES_SWITCH
        closed = arr[~series]
        value = np.empty_like(arr)
        d1 = np.empty_like(arr)
        d2 = np.empty_like(arr)
        d3 = np.empty_like(arr)

        for order, out in enumerate((value, d1, d2, d3)):
            out[series] = _series_eval(arr[series], order)

        if route == ODE:
            cv = _closed_value(closed)
            c1 = _closed_d1(closed)
            c2 = _ode_d2(closed, cv, c1)
            c3 = _ode_d3(closed, c1, c2)
        elif route == DIRECT:
            cv, c1, c2, c3 = _direct_derivatives(closed)
        else:
            raise ValueError(f"Unknown derivative route: {route}")
        value[~series] = cv
        d1[~series] = c1
        d2[~series] = c2
        d3[~series] = c3

        return XiEvaluation(
            t=_finish(arr, scalar),
            value=_finish(value, scalar),
            d1=_finish(d1, scalar),
            d2=_finish(d2, scalar),
            d3=_finish(d3, scalar),
        )

    def higher_derivatives(self, t: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
        """xi'''' and xi''''' from the once and twice differentiated q-equation."""
        arr, scalar = _prepare(t)
        series = np.abs(arr) > HALF_PI - HIGHER_SERIES_SWITCH
        d4 = np.empty_like(arr)
        d5 = np.empty_like(arr)
        d4[series] = _series_eval(arr[series], 4)
        d5[series] = _series_eval(arr[series], 5)
        closed = arr[~series]
        _, c1, c2, c3 = _direct_derivatives(closed)
        c4 = _ode_d4(closed, c1, c2, c3)
        d4[~series] = c4
        d5[~series] = _ode_d5(closed, c1, c2, c3, c4)
        return _finish(d4, scalar), _finish(d5, scalar)

    def integral(self, a: float, b: float, tol: float = QUADRATURE_TOL) -> float:
        return _integrate(lambda x: float(self.value(x)), a, b, tol)


_DEFAULT = XiFunctions()


def _integrate(fn, a: float, b: float, tol: float) -> float:
    if not (-HALF_PI <= a <= b <= HALF_PI):
        raise BadIntervalError(f"need -pi/2 <= a <= b <= pi/2, got [{a}, {b}]")
    if a == b:
        return 0.0
    switch = HALF_PI - SERIES_SWITCH
    points = [a] + [p for p in (-switch, switch) if a < p < b] + [b]
    return integrate_panels(fn, points, tol=tol)


def xi(t: ArrayLike) -> ArrayLike:
    """xi(t), even in t, with xi(0) = 1 - pi^2/4 and xi(+-pi/2) = 0."""
    return _DEFAULT.value(t)


def xi_derivatives(t: ArrayLike) -> XiEvaluation:
    """xi and its first three derivatives, second and third from the ODEs."""
    return _DEFAULT.derivatives(t, route=ODE)


def xi_derivatives_direct(t: ArrayLike) -> XiEvaluation:
    """Same as ``xi_derivatives`` but by analytic differentiation of the closed form."""
    return _DEFAULT.derivatives(t, route=DIRECT)


def xi_closed_form(t: ArrayLike) -> ArrayLike:
    """The closed form alone, without the endpoint switch. Singular at |t| = pi/2."""
    arr, scalar = _prepare(t)
    return _finish(_closed_value(arr), scalar)


def xi_endpoint_series(t: ArrayLike, order: int = 0) -> ArrayLike:
    """The endpoint series alone (or its ``order``-th t-derivative)."""
    arr, scalar = _prepare(t)
    return _finish(_series_eval(arr, order), scalar)


def xi_integral(a: float, b: float, tol: float = QUADRATURE_TOL) -> float:
    """Integral of xi over [a, b], panels split where the evaluation branch changes."""
    return _DEFAULT.integral(a, b, tol)


#################
# Residuals
#################


def _residual_parts(t: ArrayLike, functions: Optional[XiFunctions] = None):
    functions = functions or _DEFAULT
    ev = functions.derivatives(t, route=DIRECT)
    return ev, np.cos(ev.t), np.sin(ev.t)


def xi_ode_residual(t: ArrayLike) -> ArrayLike:
    """xi''cos^2 t / 2 - xi' cos t sin t - xi - 2 cos^2 t."""
    ev, c, s = _residual_parts(t)
    return 0.5 * ev.d2 * c * c - ev.d1 * c * s - ev.value - 2.0 * c * c


def xi_identity_residual(t: ArrayLike) -> ArrayLike:
    """xi' cos t - 2 xi sin t - 4 t cos t."""
    ev, c, s = _residual_parts(t)
    return ev.d1 * c - 2.0 * ev.value * s - 4.0 * ev.t * c


def _check_delta(delta: float):
    if not (0.0 <= delta <= 1.0):
        raise InvalidGeometryError(f"delta must lie in [0, 1], got {delta}")


def z_eval(t: ArrayLike, delta: float) -> Tuple[ArrayLike, ArrayLike, ArrayLike]:
    """(z, z', z'') for z = 1 + delta * xi."""
    _check_delta(delta)
    ev = xi_derivatives(t)
    return 1.0 + delta * ev.value, delta * ev.d1, delta * ev.d2


def z_ode_residual(
    t: ArrayLike, delta: float, profile_delta: Optional[float] = None
) -> ArrayLike:
    """z''cos^2 t / 2 - z' cos t sin t - z - (-1 + 2 delta cos^2 t).

    ``profile_delta`` builds z from a different delta than the equation uses,
    which gives a nonzero residual away from the endpoints.
    """
    _check_delta(delta)
    profile_delta = delta if profile_delta is None else profile_delta
    _check_delta(profile_delta)
    ev, c, s = _residual_parts(t)
    z = 1.0 + profile_delta * ev.value
    z1 = profile_delta * ev.d1
    z2 = profile_delta * ev.d2
    return 0.5 * z2 * c * c - z1 * c * s - z - (-1.0 + 2.0 * delta * c * c)


def barrier_inequality_rhs(
    t0: ArrayLike, z: ArrayLike, z1: ArrayLike, z2: ArrayLike, delta: float
) -> ArrayLike:
    """z''cos^2 t0 / 2 - z' cos t0 sin t0 - z + 1 - 2 delta cos^2 t0.

    At a contact point of a valid barrier this is nonnegative.

    Raises:
        NonpositiveZError: if z(t0) <= 0 anywhere.
    """
    t0 = np.asarray(t0, dtype=np.float64)
    if np.any(np.abs(t0) > HALF_PI):
        raise XiDomainError("t0 must lie in [-pi/2, pi/2]")
    if np.any(np.asarray(z) <= 0):
        raise NonpositiveZError("barrier requires z(t0) > 0")
    c = np.cos(t0)
    s = np.sin(t0)
    out = 0.5 * z2 * c * c - z1 * c * s - z + 1.0 - 2.0 * delta * c * c
    return float(out) if np.ndim(out) == 0 else out


def offset_rhs(t0: ArrayLike, delta: float, offset: float) -> ArrayLike:
    """barrier_inequality_rhs for the shifted profile z + offset (equals -offset)."""
    z, z1, z2 = z_eval(t0, delta)
    return barrier_inequality_rhs(t0, z + offset, z1, z2, delta)


#################
# Barrier profile
#################


@dataclass
class BarrierProfile:
    """The test function z = 1 + delta * xi."""

    delta: float

    def __post_init__(self):
        _check_delta(self.delta)

    def z(self, t: ArrayLike) -> ArrayLike:
        return 1.0 + self.delta * xi(t)

    def derivatives(self, t: ArrayLike) -> Tuple[ArrayLike, ArrayLike, ArrayLike]:
        return z_eval(t, self.delta)

    @property
    def z_at_zero(self) -> float:
        return 1.0 - (PI_SQUARED / 4.0 - 1.0) * self.delta

    def in_admissible_range(self, n: int) -> bool:
        return 0.0 <= self.delta <= (n - 1) / (2.0 * n)

    def integral(self, tol: float = QUADRATURE_TOL) -> float:
        """Integral of z over [0, pi/2]; equals (pi/2)(1 - delta)."""
        return _integrate(lambda x: float(self.z(x)), 0.0, HALF_PI, tol)

    def inverse_sqrt_integral(self, tol: float = QUADRATURE_TOL) -> float:
        """Integral of 1/sqrt(z) over [0, pi/2]."""
        if self.z_at_zero <= 0:
            raise NonpositiveZError(
                f"z(0) = {self.z_at_zero} <= 0 for delta = {self.delta}"
            )
        return _integrate(lambda x: 1.0 / math.sqrt(self.z(x)), 0.0, HALF_PI, tol)


def z_integral(delta: float, tol: float = QUADRATURE_TOL) -> float:
    return BarrierProfile(delta).integral(tol)


def inverse_sqrt_z_integral(delta: float, tol: float = QUADRATURE_TOL) -> float:
    return BarrierProfile(delta).inverse_sqrt_integral(tol)


def barrier_conditions(
    profile: BarrierProfile,
    t0: float,
    Z_t0: float,
    t_samples: Optional[np.ndarray] = None,
    Z_samples: Optional[np.ndarray] = None,
    tol: float = 1e-9,
) -> Dict[str, bool]:
    """The five conditions a barrier must meet at a contact point t0.

    Keys: ``contact`` (z(t0) = Z(t0)), ``dominates`` (Z <= z on the samples),
    ``positive`` (z(t0) > 0), ``even`` and ``outward_slope`` (z'(t0) sin t0 >= 0).
    """
    z0, z1, _ = profile.derivatives(t0)
    dominates = True
    if t_samples is not None and Z_samples is not None:
        dominates = bool(np.all(Z_samples <= profile.z(t_samples) + tol))
    samples = np.linspace(0.0, HALF_PI, 33)
    even = bool(
        np.max(np.abs(profile.z(samples) - profile.z(-samples))) <= tol
        and abs(profile.derivatives(0.0)[1]) <= tol
    )
    return {
        "contact": abs(z0 - Z_t0) <= tol,
        "dominates": dominates,
        "positive": z0 > 0,
        "even": even,
        "outward_slope": z1 * math.sin(t0) >= -tol,
    }


#################
# Property suite
#################


def _max_relative(residual: np.ndarray, *terms: np.ndarray) -> float:
    scale = 1.0 + np.max(np.abs(np.vstack(terms)), axis=0)
    return float(np.max(np.abs(residual) / scale))


def lemma5_property_suite(
    grid_size: int = const.DEFAULT_XI_GRID,
    tolerance: float = const.DEFAULT_XI_TOLERANCE,
    functions: Optional[XiFunctions] = None,
) -> XiReport:
    """Check every stated property of xi on a symmetric grid.

    Residuals are measured relative to ``1 + largest term``. Pinned values use
    ``min(1e-10, tolerance)``, the integrals ``min(1e-9, tolerance)``. The
    closed form and endpoint series must meet to ``min(1e-11, tolerance)``
    for xi and ``min(1e-9, tolerance)`` for xi'.
    Failures are recorded, never raised.

    Args:
        grid_size: Number of grid points on [-pi/2, pi/2], at least 101. The
            point t = 0 is always included.
        tolerance: Residual threshold.
        functions: Alternative ``XiFunctions`` to check.
    """
    if grid_size < 101:
        raise ConfigError(f"grid_size must be >= 101, got {grid_size}")
    if not tolerance > 0:
        raise ConfigError(f"tolerance must be > 0, got {tolerance}")
    functions = functions or _DEFAULT
    value_tol = min(1e-10, tolerance)
    integral_tol = min(1e-9, tolerance)
    branch_tol = min(1e-11, tolerance)
    d1_branch_tol = min(1e-9, tolerance)

    t = np.linspace(-HALF_PI, HALF_PI, grid_size)
    # the midpoint of an odd grid is only zero up to rounding
    t = np.union1d(t[np.abs(t) > 1e-12], [0.0])
    size = len(t)
    ev = functions.derivatives(t, route=DIRECT)
    x, d1, d2, d3 = ev.value, ev.d1, ev.d2, ev.d3
    d4, d5 = functions.higher_derivatives(t)
    c = np.cos(t)
    s = np.sin(t)
    zero = int(np.flatnonzero(t == 0.0)[0])
    left = (t < 0) & (t > -HALF_PI)
    right = (t > 0) & (t < HALF_PI)
    report = XiReport()

    def record(pid: str, tag: str, metric: float, threshold: float, ok=None):
        passed = bool(metric <= threshold) if ok is None else bool(ok)
        report.add(
            PropertyOutcome(
                property_id=pid,
                equation_tag=tag,
                max_residual=float(metric),
                threshold=float(threshold),
                grid_size=size,
                passed=passed,
            )
        )

    t1 = 0.5 * d2 * c * c
    t2 = d1 * c * s
    record(
        "ode_residual",
        const.EQ_XI_ODE,
        _max_relative(t1 - t2 - x - 2.0 * c * c, t1, t2, x, 2.0 * c * c),
        tolerance,
    )

    t1 = d1 * c
    t2 = 2.0 * x * s
    t3 = 4.0 * t * c
    record(
        "identity_residual",
        const.EQ_XI_IDENTITY,
        _max_relative(t1 - t2 - t3, t1, t2, t3),
        tolerance,
    )

    t1 = 0.5 * d3 * c
    t2 = 2.0 * d2 * s
    t3 = 2.0 * d1 * c
    t4 = 4.0 * s
    record(
        "q_residual",
        const.EQ_Q_ODE,
        _max_relative(t1 - t2 - t3 + t4, t1, t2, t3, t4),
        tolerance,
    )

    one_c2 = 1.0 + c * c
    t1 = c * c / (2.0 * one_c2) * d4
    t2 = 2.0 * c * s / one_c2 * d3
    t3 = 2.0 * d2
    t4 = 4.0 / one_c2
    record(
        "q1_residual",
        const.EQ_Q1_ODE,
        _max_relative(t1 - t2 - t3 + t4, t1, t2, t3, t4),
        tolerance,
    )

    den = one_c2 * one_c2
    t1 = c * c / (2.0 * one_c2) * d5
    t2 = c * s * (3.0 + 2.0 * c * c) / den * d4
    t3 = 2.0 * (5.0 * c * c + c**4) / den * d3
    t4 = 8.0 * c * s / den
    record(
        "q2_residual",
        const.EQ_Q2_ODE,
        _max_relative(t1 - t2 - t3 + t4, t1, t2, t3, t4),
        tolerance,
    )

    half = functions.integral(0.0, HALF_PI)
    full = functions.integral(-HALF_PI, HALF_PI)
    record(
        "integral",
        const.EQ_XI_PROPERTIES,
        max(abs(half + HALF_PI), abs(full + math.pi)),
        integral_tol,
    )

    record(
        "minimum_value",
        const.EQ_XI_PROPERTIES,
        max(abs(x[zero] - const.XI_AT_ZERO), max(0.0, float(x[zero] - np.min(x)))),
        value_tol,
    )

    record(
        "nonpositive",
        const.EQ_XI_PROPERTIES,
        max(float(np.max(x)), abs(x[0]), abs(x[-1])),
        value_tol,
    )

    steps = np.diff(d1)
    endpoint_err = max(
        abs(d1[-1] - const.XI_D1_AT_END), abs(d1[0] + const.XI_D1_AT_END)
    )
    record(
        "d1_monotone_endpoints",
        const.EQ_XI_PROPERTIES,
        endpoint_err,
        value_tol,
        ok=endpoint_err <= value_tol and np.all(steps > 0),
    )

    sign_ok = np.all(d1[left] < 0) and np.all(d1[right] > 0)
    record(
        "d1_sign_pattern",
        const.EQ_XI_PROPERTIES,
        abs(d1[zero]),
        value_tol,
        ok=sign_ok and abs(d1[zero]) <= value_tol,
    )

    d2_err = max(
        abs(d2[0] - const.XI_D2_AT_END),
        abs(d2[-1] - const.XI_D2_AT_END),
        abs(d2[zero] - const.XI_D2_AT_ZERO),
    )
    record(
        "d2_positive_endpoints",
        const.EQ_XI_PROPERTIES,
        d2_err,
        value_tol,
        ok=d2_err <= value_tol and np.all(d2 > 0),
    )

    tp = t[right]
    slope = (d2[right] * tp - d1[right]) / (tp * tp)
    record(
        "d1_over_t_monotone",
        const.EQ_XI_PROPERTIES,
        -float(np.min(slope)),
        0.0,
        ok=np.all(slope > 0),
    )

    ratio = np.empty_like(t)
    nonzero = t != 0
    ratio[nonzero] = d1[nonzero] / t[nonzero]
    ratio[~nonzero] = d2[~nonzero]
    excess = max(
        const.XI_D2_AT_ZERO - float(np.min(ratio)),
        float(np.max(ratio)) - const.XI_D1_OVER_T_MAX,
        0.0,
    )
    record("d1_over_t_bounds", const.EQ_XI_PROPERTIES, excess, value_tol)

    d3_err = max(
        abs(d3[-1] - const.XI_D3_AT_END), abs(d3[0] + const.XI_D3_AT_END)
    )
    record(
        "d3_sign_endpoint",
        const.EQ_XI_PROPERTIES,
        d3_err,
        value_tol,
        ok=d3_err <= value_tol and np.all(d3[left] < 0) and np.all(d3[right] > 0),
    )

    mirrored = functions.derivatives(-t, route=DIRECT)
    record(
        "evenness",
        const.EQ_XI_PROPERTIES,
        max(
            float(np.max(np.abs(mirrored.value - x))),
            float(np.max(np.abs(mirrored.d1 + d1))),
        ),
        value_tol,
    )

    band = np.linspace(HALF_PI - SERIES_SWITCH, HALF_PI - 0.02, 201)
    record(
        "branch_consistency",
        const.EQ_XI_DEF,
        float(np.max(np.abs(_closed_value(band) - _series_eval(band, 0)))),
        branch_tol,
    )
    # the closed form of xi' cancels two O(1/cos t) terms near the pole
    record(
        "branch_consistency_d1",
        const.EQ_XI_DEF,
        float(np.max(np.abs(_closed_d1(band) - _series_eval(band, 1)))),
        d1_branch_tol,
    )
    return report
