import pytest

from databricks.labs.fzzt.ensemble import DetShift, det_shift_oracle, expect_observable, variance_scaling


def test_variance_of_the_normalized_trace_falls_like_one_over_n_squared():
    scaling = variance_scaling([4, 8, 16, 32], 10_000, 20240101)
    assert abs(scaling.slope + 2) < 0.3
    low, high = scaling.slope_ci
    assert low <= scaling.slope <= high


@pytest.mark.parametrize("N, z", [(1, 0.3), (1, -1.2), (2, 0.0), (2, 1.5)])
def test_characteristic_polynomial_matches_quadrature(numerics, N, z):
    oracle = det_shift_oracle(N, z, numerics)
    estimate = expect_observable(N, DetShift(z), 10_000, 20240101)
    assert abs(estimate.mean - oracle) < 3 * estimate.std_error
