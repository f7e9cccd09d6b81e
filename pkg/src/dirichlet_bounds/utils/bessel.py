"""
Order zero Bessel function of the first kind and its positive zeros, computed
from the power series so the disk eigenvalue has an oracle that shares nothing
with the solvers.
"""
import math

from dirichlet_bounds.errors import BadIntervalError

_MAX_TERMS = 200
_SCAN_STEP = 0.25


def bessel_j0(x: float) -> float:
    """J0(x) = sum_k (-1)^k (x^2/4)^k / (k!)^2.

    Cancellation between terms grows with |x|; below |x| = 10, which holds the
    first three zeros, the error stays under 1e-12.
    """
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    for k in range(1, _MAX_TERMS):
        term *= -q / (k * k)
        total += term
        if abs(term) < 1e-17 * max(1.0, abs(total)) and k > q:
            break
    return total


def bisect_root(fn, lo: float, hi: float, tol: float = 1e-15, max_iter: int = 200):
    """Plain bisection on a sign change of ``fn`` over [lo, hi]."""
    f_lo = fn(lo)
    f_hi = fn(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0:
        raise BadIntervalError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        if f_mid == 0.0 or hi - lo < tol * max(1.0, abs(mid)):
            return mid
        if f_lo * f_mid < 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def bessel_j0_zero(k: int = 1) -> float:
    """The k-th positive zero of J0, by scanning for sign changes then bisecting."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    found = 0
    x = _SCAN_STEP
    prev = bessel_j0(0.0)
    while True:
        value = bessel_j0(x)
        if prev * value <= 0:
            found += 1
            if found == k:
                return bisect_root(bessel_j0, x - _SCAN_STEP, x)
        prev = value
        x += _SCAN_STEP
        if x > 20.0 + _SCAN_STEP:
            raise BadIntervalError(f"zero {k} of J0 lies beyond the series range")


def disk_eigenvalue(R: float = 1.0) -> float:
    """First Dirichlet eigenvalue of the flat disk of radius R, j_{0,1}^2 / R^2."""
    return math.pow(bessel_j0_zero(1) / R, 2)
