import math

import mpmath
import pytest

from scipy import special

from dirichlet_bounds.errors import BadIntervalError
from dirichlet_bounds.utils.bessel import (
    bessel_j0,
    bessel_j0_zero,
    bisect_root,
    disk_eigenvalue,
)


@pytest.mark.parametrize("x", [0.0, 0.5, 2.0, 5.5, 9.0])
def test_j0_series(x):
    assert bessel_j0(x) == pytest.approx(float(special.j0(x)), abs=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_j0_zeros(k):
    expected = special.jn_zeros(0, 3)[k - 1]
    assert bessel_j0_zero(k) == pytest.approx(expected, rel=1e-13)
    assert bessel_j0_zero(k) == pytest.approx(float(mpmath.besseljzero(0, k)), rel=1e-13)


def test_j0_zero_index():
    with pytest.raises(ValueError):
        bessel_j0_zero(0)


def test_disk_eigenvalue():
    assert disk_eigenvalue(1.0) == pytest.approx(5.78318596, rel=1e-8)
    assert disk_eigenvalue(2.0) == pytest.approx(disk_eigenvalue(1.0) / 4.0, rel=1e-14)


def test_bisect_root():
    assert bisect_root(math.cos, 0.0, 3.0) == pytest.approx(0.5 * math.pi, abs=1e-14)
    assert bisect_root(lambda x: x, 0.0, 1.0) == 0.0
    with pytest.raises(BadIntervalError):
        bisect_root(math.cos, 0.0, 1.0)
