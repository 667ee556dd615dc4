import itertools

import mpmath
import pytest

from databricks.labs.fzzt.xi import a2n, find_zeros, loop_observables, product_reconstruct, xi_function


@pytest.mark.parametrize("z", [0, 1, 5, 10, 14, 20])
def test_routes_agree(numerics50, z):
    xi = xi_function(numerics50.digits)
    values = [xi.evaluate(z, route).value.value for route in ("reference", "fourier", "series")]
    tol = numerics50.ctx.mpf(10) ** -20
    for left, right in itertools.combinations(values, 2):
        assert abs(left - right) <= tol * abs(values[0])


def test_even_and_real_on_a_grid(numerics50):
    ctx = numerics50.ctx
    xi = xi_function(numerics50.digits)
    worst_imag, worst_even = ctx.zero, ctx.zero
    for x in ctx.linspace(-20, 20, 101):
        value = xi.reference(x)
        worst_imag = max(worst_imag, abs(ctx.im(value)))
        worst_even = max(worst_even, abs(value - xi.reference(-x)))
    assert worst_imag < ctx.mpf(10) ** -40
    assert worst_even < ctx.mpf(10) ** -40


def test_twenty_nine_zeros_below_one_hundred(numerics):
    zeros = find_zeros(100, 0.05, numerics)
    assert len(zeros) == 29
    assert zeros.complete
    for n, found in enumerate(zeros.values(), start=1):
        assert abs(found - mpmath.zetazero(n).imag) < 1e-10


def test_product_error_shrinks_with_the_cutoff(numerics, first_hundred_zeros):
    xi = xi_function(numerics.digits)
    for z in (2, 5, 8):
        reference = xi.reference(z)
        errors = [
            abs(product_reconstruct(z, first_hundred_zeros.below(cutoff), numerics).value - reference) / abs(reference)
            for cutoff in (30, 50, 70, 100)
        ]
        assert all(b < a for a, b in zip(errors, errors[1:]))


def test_resolvent_from_zeros_matches_differentiation(numerics, first_hundred_zeros):
    zeros = first_hundred_zeros.below(200)
    assert len(zeros) == 79
    loop = loop_observables(3, zeros, numerics)
    assert abs(complex(loop.R.value) - complex(loop.R_zero_sum.value)) < 1e-4


def test_second_moment_is_minus_the_curvature_at_zero(numerics):
    ctx = numerics.ctx
    xi = xi_function(numerics.digits)
    h = ctx.mpf(10) ** -6
    curvature = 2 * ctx.re(xi.reference(h) - xi.reference(0)) / h**2
    assert abs(a2n(1, numerics).value + curvature) < 1e-12
