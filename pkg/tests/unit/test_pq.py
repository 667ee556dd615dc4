import pytest

from databricks.labs.fzzt.errors import DomainError, NonDecayingTruncation, OrderOverflow
from databricks.labs.fzzt.pq import (
    admissible_orders,
    extract_sk,
    gen_airy_residual,
    log_kernel_series,
    orth_poly,
    q_polynomial,
    truncated_potential,
    xi_p_eval,
)
from databricks.labs.fzzt.series import PowerSeries


def test_admissible_orders_are_odd(numerics):
    orders = admissible_orders(9, numerics)
    assert 1 in orders
    assert all(p % 2 == 1 for p in orders)


def test_log_kernel_has_no_odd_terms(numerics):
    logs = log_kernel_series(5, numerics)
    ctx = numerics.ctx
    assert all(abs(logs.coeffs[k]) < ctx.mpf(10) ** -20 for k in (1, 3, 5))
    assert ctx.re(logs.coeffs[2]) < 0


def test_couplings_at_p_five(numerics):
    ctx = numerics.ctx
    couplings = extract_sk(5, numerics)
    assert sorted(couplings.s) == [1, 2, 3]
    assert abs(numerics.number(couplings.s[2])) < ctx.mpf(10) ** -20
    expected = -2 * ctx.re(couplings.log_coefficients.coeffs[2])
    assert abs(numerics.number(couplings.s[1]) - expected) < numerics.tolerance()
    assert couplings.leading_coeff < 0
    assert couplings.convention == "series_matching"


def test_rebuilt_log_polynomial_matches_the_series(numerics):
    couplings = extract_sk(5, numerics)
    rebuilt = couplings.log_polynomial(numerics)
    ctx = numerics.ctx
    for k in range(7):
        assert abs(rebuilt.coeffs[k] - couplings.log_coefficients.coeffs[k]) < ctx.mpf(10) ** -20


def test_non_decaying_truncation(numerics):
    with pytest.raises(NonDecayingTruncation):
        extract_sk(2, numerics)
    with pytest.raises(DomainError):
        extract_sk(0, numerics)


def test_q_polynomial_for_the_gaussian_truncation(numerics):
    couplings = extract_sk(1, numerics)
    q = q_polynomial(couplings, numerics)
    # T = L0 + L2·φ², so Q(x) = i·2·L2·(ix) = −2·L2·x
    lead = couplings.log_coefficients.coeffs[2]
    assert abs(q.coeffs[1] + 2 * lead) < numerics.tolerance()
    assert abs(q.coeffs[0]) < numerics.tolerance()


def test_truncated_model_is_even(numerics):
    left = xi_p_eval(0.7, 1, numerics)
    right = xi_p_eval(-0.7, 1, numerics)
    assert abs(left.value - right.value) < numerics.ctx.mpf(10) ** -20


def test_generalized_airy_residual(numerics):
    result = gen_airy_residual(0.5, 1, numerics)
    assert float(result.residual) < 1e-20
    assert result.p == 1


def test_perturbed_q_breaks_the_equation(numerics):
    result = gen_airy_residual(0.5, 1, numerics, perturb=(0, 1e-3))
    assert float(result.residual) > 1e-4
    with pytest.raises(DomainError):
        gen_airy_residual(0.5, 1, numerics, perturb=(7, 1e-3))


def test_hermite_polynomials_from_a_quadratic_potential(numerics):
    square = PowerSeries.from_coefficients([0, 0, 1], numerics, 3)
    assert [round(float(c)) for c in orth_poly(0, square, numerics).coeffs] == [1]
    assert [round(float(c)) for c in orth_poly(2, square, numerics).coeffs] == [-2, 0, 4]
    assert [round(float(c)) for c in orth_poly(3, square, numerics).coeffs] == [0, -12, 0, 8]
    with pytest.raises(OrderOverflow):
        orth_poly(13, square, numerics)


def test_truncated_potential_at_p_one(numerics):
    potential = truncated_potential(extract_sk(1, numerics), numerics)
    assert [int(c) for c in potential.coeffs] == [0, 1]
