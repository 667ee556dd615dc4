import pytest

from databricks.labs.fzzt.errors import DomainError, NearZeroSingularity, RouteDomainError
from databricks.labs.fzzt.precision import Numerics
from databricks.labs.fzzt.xi import (
    ZeroList,
    a2n,
    compare_kernels,
    find_zeros,
    loop_observables,
    product_reconstruct,
    xi_eval,
    xi_function,
    zero_count_estimate,
    zeta,
)

FIRST_ZEROS = [14.134725142, 21.022039639, 25.010857580]


def test_reference_at_zero(numerics):
    value = xi_eval(0, "reference", numerics)
    assert abs(float(value.value.real) - 0.497120778188314) < 1e-12
    assert value.route == "reference"
    assert value.precision == 30


@pytest.mark.parametrize("z", [1, 5.5, 12])
def test_reference_is_even(numerics, z):
    xi = xi_function(numerics.digits)
    left, right = xi.reference(z), xi.reference(-z)
    assert abs(left - right) < numerics.ctx.mpf(10) ** -20 * abs(left)


def test_reference_is_real_on_the_real_axis(numerics):
    value = xi_function(numerics.digits).reference(7.25)
    assert abs(value.imag) < numerics.ctx.mpf(10) ** -25


def test_reference_near_first_zero(numerics):
    assert abs(xi_eval(14.134725, "reference", numerics).value.value) < 1e-5


def test_zeta_against_known_values(numerics):
    ctx = numerics.ctx
    assert abs(zeta(2, numerics) - ctx.pi**2 / 6) < numerics.tolerance()
    assert abs(zeta(-1, numerics) + ctx.mpf(1) / 12) < numerics.tolerance()


def test_fourier_route_agrees_with_reference(numerics):
    xi = xi_function(numerics.digits)
    value = xi.evaluate(5, "fourier")
    reference = xi.reference(5)
    assert abs(value.value.value - reference) < numerics.ctx.mpf(10) ** -15 * abs(reference)
    assert value.error_estimate is not None


def test_fourier_route_domain(numerics):
    with pytest.raises(RouteDomainError):
        xi_eval(3j, "fourier", numerics)
    with pytest.raises(RouteDomainError):
        xi_eval(1, "taylor", numerics)


def test_a2n_zero_is_xi_at_zero(numerics):
    xi = xi_function(numerics.digits)
    assert abs(a2n(0, numerics).value - xi.reference(0).real) < numerics.ctx.mpf(10) ** -20


@pytest.mark.parametrize("n", [1, 4, 12])
def test_a2n_positive(numerics, n):
    assert a2n(n, numerics) > 0


def test_a2n_rejects_negative_order(numerics):
    with pytest.raises(DomainError):
        a2n(-1, numerics)


def test_find_first_three_zeros(numerics):
    zeros = find_zeros(30, 0.05, numerics)
    assert len(zeros) == 3
    for found, expected in zip(zeros.values(), FIRST_ZEROS):
        assert abs(found - expected) < 1e-6
    xi0 = xi_function(numerics.digits).xi_zero.real
    assert all(r.value < 1e-10 * xi0 for r in zeros.residuals)
    assert zeros.complete
    assert zeros.scan_height == 30


def test_no_zeros_below_the_first(numerics):
    assert len(find_zeros(13, 0.05, numerics)) == 0


def test_coarse_scan_is_flagged(numerics):
    zeros = find_zeros(16, 0.1, numerics)
    assert not zeros.complete
    assert any("ScanStepTooCoarse" in w for w in zeros.warnings)
    with pytest.raises(DomainError):
        find_zeros(16, 0.5, numerics)


def test_product_at_zero_is_xi_zero(numerics, zeta_zeros):
    value = product_reconstruct(0, zeta_zeros(3), numerics)
    assert abs(value.value - xi_function(numerics.digits).xi_zero) < numerics.tolerance()


def test_product_vanishes_on_a_listed_zero(numerics):
    zeros = find_zeros(30, 0.05, numerics)
    value = product_reconstruct(zeros.zeros[0], zeros, numerics)
    assert abs(value.value) < 1e-20


def test_zero_list_merge_is_order_independent(numerics, zeta_zeros):
    whole = zeta_zeros(6)
    low = whole.head(3)
    high = ZeroList(
        zeros=whole.zeros[3:],
        brackets=whole.brackets[3:],
        residuals=whole.residuals[3:],
        coverage=((float(low.scan_height) - 1, whole.scan_height),),
        digits=numerics.digits,
    )
    assert low.merge(high).values() == high.merge(low).values() == whole.values()
    assert low.merge(high).scan_height == whole.scan_height


def test_zero_list_as_dict(numerics, zeta_zeros):
    zeros = zeta_zeros(4)
    restored = ZeroList.from_dict(zeros.as_dict())
    assert len(restored) == 4
    assert restored.digits == numerics.digits
    assert abs(restored.zeros[0].value - zeros.zeros[0].value) < numerics.tolerance()
    assert restored.scan_height == zeros.scan_height


def test_zero_list_below(zeta_zeros):
    zeros = zeta_zeros(5)
    below = zeros.below(26)
    assert len(below) == 3
    assert below.scan_height <= 26


def test_smooth_zero_count(numerics):
    assert abs(zero_count_estimate(30, numerics) - 3) < 1
    assert abs(zero_count_estimate(100, numerics) - 29) < 1.5


def test_loop_at_s_three(numerics, zeta_zeros):
    loop = loop_observables(-2.5j, zeta_zeros(5), numerics)
    assert abs(complex(loop.W.value) - 0.1839540080) < 1e-9


def test_loop_rejects_a_zero(numerics, zeta_zeros):
    zeros = zeta_zeros(2)
    with pytest.raises(NearZeroSingularity):
        loop_observables(zeros.zeros[0], zeros, numerics)


def test_kernel_variants_differ_but_transform_into_each_other():
    numerics = Numerics(30)
    report = compare_kernels(numerics, grid=[-1, 0, 1], points=(0.5,))
    assert report.max_gap > 0.2
    assert abs(float(report.derived_at_zero) - 0.4467) < 1e-3
    _, _, _, gap = report.identity[0]
    assert gap < 1e-10
