import pytest

from databricks.labs.fzzt.errors import ConvergenceDomainError, DomainError, RangeError
from databricks.labs.fzzt.primes import euler_log_zeta, explicit_check, prime_side, sieve, w_loop
from databricks.labs.fzzt.xi import ZeroList


def test_sieve():
    assert sieve(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert sieve(1).tolist() == []


@pytest.mark.parametrize(
    "ell, strict, weak, average",
    [
        (30, 12.41667, 12.41667, 12.41667),
        (10, 5.33333, 5.33333, 5.33333),
        (2, 0, 1, 0.5),
        (7.5, 4.5, 4.5, 4.5),
    ],
)
def test_prime_power_count(numerics, ell, strict, weak, average):
    count = prime_side(ell, numerics)
    assert abs(float(count.strict) - strict) < 1e-5
    assert abs(float(count.weak) - weak) < 1e-5
    assert abs(float(count.average) - average) < 1e-5


def test_prime_power_count_range(numerics):
    with pytest.raises(RangeError):
        prime_side(1.5, numerics)
    with pytest.raises(RangeError):
        prime_side(10**7, numerics)


def test_loop_without_zeros(numerics):
    value = w_loop(numerics.ctx.e, ZeroList(), numerics)
    assert abs(float(value) - 0.942420) < 1e-5


def test_loop_domain(numerics):
    with pytest.raises(DomainError):
        w_loop(0.5, ZeroList(), numerics)
    with pytest.raises(DomainError):
        w_loop(1 + 1e-8, ZeroList(), numerics)
    with pytest.raises(DomainError):
        w_loop(3, ZeroList(), numerics, smoothing=("cesaro", 0))


def test_cesaro_smoothing_changes_the_partial_sum(numerics, zeta_zeros):
    zeros = zeta_zeros(10)
    plain = w_loop(20, zeros, numerics)
    smoothed = w_loop(20, zeros, numerics, smoothing=("cesaro", 5))
    assert abs(float(plain) - float(smoothed)) > 1e-12


def test_explicit_check_flags_a_short_zero_list(numerics, zeta_zeros):
    check = explicit_check(2.5, zeta_zeros(5), numerics)
    assert check.zeros_used == 5
    assert float(check.lower_limit) == 0.5
    assert any("below" in w for w in check.warnings)
    with pytest.raises(DomainError):
        explicit_check(2.4, zeta_zeros(5), numerics)


def test_explicit_gap_is_taken_against_the_raw_average(numerics, zeta_zeros):
    check = explicit_check(2.5, zeta_zeros(5), numerics)
    loop, average = check.loop_integral.value, check.prime_average.value
    assert abs(check.gap.value - abs(loop - average)) < 1e-25
    assert abs(check.corrected_gap.value - abs(loop - average + check.lower_limit.value)) < 1e-25


@pytest.mark.parametrize("z, expected", [(-1.5j, 0.4977003), (-2.5j, 0.1839540)])
def test_euler_product_within_its_tail_bound(numerics, z, expected):
    result = euler_log_zeta(z, 1000, numerics)
    assert result.primes_used == 168
    assert abs(complex(result.value.value) - expected) <= float(result.tail_bound) + 1e-7


def test_euler_product_domain(numerics):
    with pytest.raises(ConvergenceDomainError):
        euler_log_zeta(0, 1000, numerics)
    with pytest.raises(DomainError):
        euler_log_zeta(-1.5j, 50, numerics)
