import numpy as np
import pytest

from databricks.labs.fzzt.gamma import liouville_fourier, recfact_eval, shift_residual
from databricks.labs.fzzt.primes import euler_log_zeta, explicit_check


def test_explicit_formula_at_thirty(numerics, first_hundred_zeros):
    hundred = explicit_check(30, first_hundred_zeros.head(100), numerics)
    quarter = explicit_check(30, first_hundred_zeros.head(25), numerics)
    assert hundred.zeros_used == 100
    assert abs(float(hundred.prime_average) - 12.41667) < 1e-5
    assert float(hundred.corrected_gap) < 0.05
    assert float(hundred.corrected_gap) <= float(quarter.corrected_gap)
    # against the raw count the lower limit shows up as a gap of about one half
    assert abs(float(hundred.gap) - 0.5) < 0.05


@pytest.mark.parametrize("s", [2, 3])
def test_euler_product_at_full_sieve(numerics, s):
    ctx = numerics.ctx
    z = ctx.mpc(0, 0.5 - s)
    result = euler_log_zeta(z, 10_000, numerics)
    reference = ctx.log(ctx.zeta(s))
    assert abs(result.value.value - reference) <= result.tail_bound.value
    assert result.primes_used == 1229


def test_shift_identity_on_random_points(numerics50):
    rng = np.random.default_rng(20240101)
    radius = 5 * np.sqrt(rng.uniform(size=25))
    angle = rng.uniform(0, 2 * np.pi, size=25)
    tol = numerics50.ctx.mpf(10) ** -42
    for z in radius * np.exp(1j * angle):
        assert shift_residual(complex(z), numerics50).value < tol


def test_reciprocal_factorial_vanishes_on_negative_integers(numerics50):
    for n in range(1, 11):
        assert recfact_eval(-n, numerics50).value.value == 0


@pytest.mark.parametrize("z", ["-0.5j", "0.5-0.5j", "1-0.25j"])
def test_liouville_transform_matches_gamma(numerics, z):
    result = liouville_fourier(z, numerics)
    assert float(result.discrepancy) < 1e-15
