"""
Quadrature helpers. ``integrate_adaptive_simpson`` is the workhorse for integrals
of the barrier functions, ``simpson_uniform`` integrates sampled profiles.
"""
from typing import Callable, Sequence, Tuple

import numpy as np

from dirichlet_bounds.errors import BadIntervalError


def integrate_adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 50,
) -> Tuple[float, float]:
    """Adaptive Simpson's rule with Richardson correction on accepted panels.

    Args:
        f: Scalar function to integrate.
        a: Lower bound.
        b: Upper bound, must satisfy ``a <= b``.
        tol: Absolute error tolerance for the whole interval.
        max_depth: Maximum recursion depth.

    Returns:
        Tuple of (integral_value, error_estimate).

    Raises:
        BadIntervalError: If ``a > b`` or either bound is not finite.
    """
    if not (np.isfinite(a) and np.isfinite(b)) or a > b:
        raise BadIntervalError(f"Invalid integration interval [{a}, {b}]")
    if a == b:
        return 0.0, 0.0

    def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
        return h / 3.0 * (fa + 4.0 * fm + fb)

    def _adaptive(
        a: float,
        b: float,
        fa: float,
        fm: float,
        fb: float,
        s_whole: float,
        depth: int,
        tol: float,
    ) -> Tuple[float, float]:
        m = 0.5 * (a + b)
        h = 0.5 * (b - a)
        flm = f(0.5 * (a + m))
        frm = f(0.5 * (m + b))

        s_left = _simpson(fa, flm, fm, 0.5 * h)
        s_right = _simpson(fm, frm, fb, 0.5 * h)
        s_combined = s_left + s_right
        error_estimate = (s_combined - s_whole) / 15.0

        if depth >= max_depth or abs(error_estimate) < tol:
            return s_combined + error_estimate, abs(error_estimate)

        left_result, left_error = _adaptive(
            a, m, fa, flm, fm, s_left, depth + 1, 0.5 * tol
        )
        right_result, right_error = _adaptive(
            m, b, fm, frm, fb, s_right, depth + 1, 0.5 * tol
        )
        return left_result + right_result, left_error + right_error

    fa = f(a)
    fb = f(b)
    fm = f(0.5 * (a + b))
    s_whole = _simpson(fa, fm, fb, 0.5 * (b - a))
    return _adaptive(a, b, fa, fm, fb, s_whole, 0, tol)


def integrate_panels(
    f: Callable[[float], float],
    breakpoints: Sequence[float],
    tol: float = 1e-10,
    max_depth: int = 50,
) -> float:
    """Integrate ``f`` over consecutive panels given by sorted ``breakpoints``.

    The tolerance is shared between the panels in proportion to their length.
    """
    points = list(breakpoints)
    if any(p > q for p, q in zip(points, points[1:])):
        raise BadIntervalError(f"Breakpoints must be sorted: {points}")
    total_length = points[-1] - points[0]
    total = 0.0
    for lo, hi in zip(points, points[1:]):
        if hi == lo:
            continue
        panel_tol = tol * (hi - lo) / total_length
        value, _ = integrate_adaptive_simpson(f, lo, hi, panel_tol, max_depth)
        total += value
    return total


def simpson_uniform(values: np.ndarray, h: float) -> float:
    """Composite Simpson's rule on uniformly spaced samples.

    An even number of samples falls back to the trapezoid rule on the last panel.
    """
    values = np.asarray(values, dtype=np.float64)
    count = len(values)
    if count < 2:
        return 0.0
    if count == 2:
        return 0.5 * h * (values[0] + values[1])
    tail = 0.0
    if count % 2 == 0:
        tail = 0.5 * h * (values[-2] + values[-1])
        values = values[:-1]
    inner = values[0] + values[-1] + 4.0 * values[1:-1:2].sum() + 2.0 * values[2:-1:2].sum()
    return h / 3.0 * inner + tail
