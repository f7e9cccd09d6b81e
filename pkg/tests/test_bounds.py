import math

import pytest

from hypothesis import given
from hypothesis import strategies as st

from dirichlet_bounds.bounds import (
    GeometryData,
    all_bounds,
    best_bound,
    crossover_radius,
    delta_bound,
    delta_of,
    ling_bound,
    reilly_bound,
    yang_bound,
    z_floor,
    zhong_yang_bound,
)
from dirichlet_bounds.errors import (
    InvalidDimensionError,
    InvalidGeometryError,
    NoApplicableBoundError,
    NonpositiveDiameterError,
    NonpositiveInDiameterError,
    NonpositiveLambdaError,
)

PI2 = math.pi**2

dimensions = st.integers(min_value=2, max_value=12)
curvatures = st.floats(min_value=0.0, max_value=50.0, allow_nan=False)
in_diameters = st.floats(min_value=1e-2, max_value=1e3, allow_nan=False)


@pytest.mark.parametrize("n,K,expected", [(2, 1, 2), (3, 0, 0), (5, 2, 10)])
def test_reilly(n, K, expected):
    assert reilly_bound(n, K) == expected


@pytest.mark.parametrize("d,expected", [(math.pi, 1.0), (1.0, PI2), (2 * math.pi, 0.25)])
def test_zhong_yang(d, expected):
    assert zhong_yang_bound(d) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize(
    "n,K,d_tilde,expected", [(2, 1, math.pi, 1.25), (3, 1, math.pi, 1.5), (2, 0, 1.0, PI2)]
)
def test_yang(n, K, d_tilde, expected):
    assert yang_bound(n, K, d_tilde) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("n,K,d_tilde,expected", [(2, 1, math.pi, 1.5), (3, 1, math.pi, 2.0)])
def test_ling(n, K, d_tilde, expected):
    assert ling_bound(n, K, d_tilde) == pytest.approx(expected, rel=1e-15)


def test_invalid_inputs():
    with pytest.raises(InvalidDimensionError):
        reilly_bound(1, 1.0)
    with pytest.raises(NonpositiveDiameterError):
        zhong_yang_bound(0.0)
    with pytest.raises(NonpositiveInDiameterError):
        yang_bound(2, 1.0, -1.0)
    with pytest.raises(NonpositiveInDiameterError):
        ling_bound(2, 1.0, 0.0)
    with pytest.raises(InvalidGeometryError):
        ling_bound(2, -1.0, 1.0)
    with pytest.raises(InvalidGeometryError):
        GeometryData(n=2, K=1.0, d=1.0, d_tilde=2.0)
    # the dimension error is still a ValueError for callers that catch broadly
    with pytest.raises(ValueError):
        GeometryData(n=1, K=1.0, d_tilde=1.0)


@given(n=dimensions, K=curvatures, d_tilde=in_diameters)
def test_ling_minus_yang(n, K, d_tilde):
    diff = ling_bound(n, K, d_tilde) - yang_bound(n, K, d_tilde)
    assert diff == pytest.approx(0.25 * (n - 1) * K, rel=1e-9, abs=1e-8)
    assert ling_bound(n, K, d_tilde) >= yang_bound(n, K, d_tilde)


@given(n=dimensions, K=st.floats(min_value=0.01, max_value=10.0), d_tilde=in_diameters)
def test_ling_monotone(n, K, d_tilde):
    assert ling_bound(n, 1.5 * K, d_tilde) > ling_bound(n, K, d_tilde)
    assert ling_bound(n, K, 1.5 * d_tilde) < ling_bound(n, K, d_tilde)


@given(n=dimensions, d=in_diameters)
def test_flat_degeneration(n, d):
    geometry = GeometryData(n=n, K=0.0, d=d, d_tilde=d)
    values = {b.name: b.value for b in all_bounds(geometry)}
    assert values["reilly"] == 0
    for name in ("zhong_yang", "yang", "ling"):
        assert values[name] == pytest.approx(PI2 / d**2, rel=1e-14)


@given(
    n=dimensions,
    K=curvatures,
    d_tilde=in_diameters,
    stretch=st.floats(min_value=1.0, max_value=3.0),
)
def test_best_bound_dominates(n, K, d_tilde, stretch):
    geometry = GeometryData(n=n, K=K, d=d_tilde * stretch, d_tilde=d_tilde)
    best = best_bound(geometry)
    for result in all_bounds(geometry):
        assert best.value >= result.value


@pytest.mark.parametrize(
    "geometry,name,value",
    [
        (GeometryData(n=2, K=1.0, d_tilde=math.pi), "reilly", 2.0),
        (GeometryData(n=2, K=0.1, d_tilde=1.0), "ling", 0.05 + PI2),
        (GeometryData(n=2, K=0.0, d=1.0, d_tilde=1.0), "ling", PI2),
    ],
)
def test_best_bound(geometry, name, value):
    best = best_bound(geometry)
    assert best.name == name
    assert best.value == pytest.approx(value, rel=1e-14)


def test_best_bound_needs_a_diameter():
    with pytest.raises(NoApplicableBoundError):
        best_bound(GeometryData(n=2, K=1.0))


def test_hypotheses_recorded_not_raised():
    results = all_bounds(GeometryData(n=3, K=0.0, d=2.0, d_tilde=2.0, boundary_mean_curvature=-1.0))
    reilly = results[0]
    assert reilly.name == "reilly"
    assert ("positive_K", False) in reilly.hypotheses_met
    assert ("nonnegative_mean_curvature", False) in reilly.hypotheses_met
    assert not reilly.all_hypotheses_met
    zhong_yang = results[1]
    assert ("nonnegative_K", True) in zhong_yang.hypotheses_met


@pytest.mark.parametrize(
    "lambda_,n,K,delta,exceeds",
    [(2.0, 2, 1.0, 0.25, False), (6.0, 3, 2.0, 1.0 / 3.0, False), (1.0, 2, 1.0, 0.5, True)],
)
def test_delta_of(lambda_, n, K, delta, exceeds):
    result = delta_of(lambda_, n, K)
    assert result.delta == pytest.approx(delta, rel=1e-15)
    assert result.exceeds_max == exceeds


def test_delta_at_threshold_is_max():
    for n in range(2, 8):
        result = delta_of(n * 1.7, n, 1.7)
        assert result.delta == pytest.approx(result.delta_max, rel=1e-14)


def test_delta_of_rejects_nonpositive_lambda():
    with pytest.raises(NonpositiveLambdaError):
        delta_of(0.0, 2, 1.0)


def test_delta_bound_matches_ling_at_threshold():
    # with lambda = ling the delta form reproduces it exactly
    n, K, d_tilde = 3, 1.0, 2.0
    lam = ling_bound(n, K, d_tilde)
    delta = 0.5 * (n - 1) * K / lam
    assert delta_bound(d_tilde, delta) == pytest.approx(lam, rel=1e-13)


def test_crossover_radius():
    R = crossover_radius(2, 1.0)
    assert R == pytest.approx(math.pi / math.sqrt(6.0), rel=1e-15)
    assert ling_bound(2, 1.0, 2 * R) == pytest.approx(reilly_bound(2, 1.0), rel=1e-13)
    assert ling_bound(2, 1.0, 1.8 * R) > reilly_bound(2, 1.0)
    assert ling_bound(2, 1.0, 2.2 * R) < reilly_bound(2, 1.0)


def test_z_floor():
    assert z_floor(2) == pytest.approx(1.0 - 0.25 * (PI2 / 4.0 - 1.0), rel=1e-15)
    assert z_floor(2) == pytest.approx(0.63315, abs=1e-5)
    assert z_floor(100) > 0
