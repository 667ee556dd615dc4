import pytest

from databricks.labs.fzzt.errors import IntegrandEvaluationFailure, NonConvergence, WindowTooSmall
from databricks.labs.fzzt.kernels import KernelSpec, airy_kernel, gaussian_kernel
from databricks.labs.fzzt.quadrature import (
    HalfLine,
    RealLine,
    Window,
    choose_window,
    fourier_transform,
    integrate,
    integrate_nd,
)


def test_exponential_on_half_line(numerics):
    ctx = numerics.ctx
    result = integrate(lambda x: ctx.exp(-x), HalfLine(), numerics.tolerance(), numerics)
    assert abs(result.value.value - 1) < numerics.tolerance()
    assert result.converged
    assert result.nodes_used > 0


def test_gaussian_on_real_line(numerics):
    ctx = numerics.ctx
    result = integrate(lambda x: ctx.exp(-x * x), RealLine(), numerics.tolerance(), numerics)
    assert abs(result.value.value - ctx.sqrt(ctx.pi)) < numerics.tolerance()


def test_window_with_breakpoints(numerics):
    ctx = numerics.ctx
    result = integrate(lambda x: abs(x), Window(-1, 2, (0,)), numerics.tolerance(), numerics)
    assert abs(result.value.value - ctx.mpf(5) / 2) < numerics.tolerance()


def test_two_dimensional(numerics):
    ctx = numerics.ctx
    result = integrate_nd(lambda x, y: x * y, [Window(0, 1), Window(0, 2)], ctx.mpf(10) ** -20, numerics)
    assert abs(result.value.value - 1) < ctx.mpf(10) ** -20


def test_integrand_failure_names_the_node(numerics):
    def broken(x):
        raise ZeroDivisionError("boom")

    with pytest.raises(IntegrandEvaluationFailure) as failure:
        integrate(broken, Window(0, 1), numerics.tolerance(), numerics)
    assert failure.value.node is not None


def test_nonconvergence_keeps_the_best_value(numerics):
    ctx = numerics.ctx
    with pytest.raises(NonConvergence) as failure:
        integrate(lambda x: ctx.sin(200 * x), Window(0, 50), numerics.tolerance(), numerics, max_degree=2)
    assert failure.value.best is not None
    assert failure.value.estimate is not None


def test_nonconvergence_can_be_allowed(numerics):
    ctx = numerics.ctx
    tol = numerics.tolerance()
    result = integrate(
        lambda x: ctx.sin(200 * x), Window(0, 50), tol, numerics, max_degree=2, allow_nonconvergence=True
    )
    assert not result.converged


def test_gaussian_transform(numerics):
    ctx = numerics.ctx
    result = fourier_transform(gaussian_kernel(), 1, numerics)
    assert abs(result.value.value - ctx.sqrt(ctx.pi) * ctx.exp(-ctx.mpf(1) / 4)) < numerics.tolerance()
    assert result.value.value.imag == 0


def test_gaussian_first_moment_is_odd(numerics):
    ctx = numerics.ctx
    at_zero = fourier_transform(gaussian_kernel(), 0, numerics, power=1)
    assert abs(at_zero.value.value) < numerics.tolerance()
    at_one = fourier_transform(gaussian_kernel(), 1, numerics, power=1)
    expected = ctx.mpc(0, 0.5) * ctx.sqrt(ctx.pi) * ctx.exp(-ctx.mpf(1) / 4)
    assert abs(at_one.value.value - expected) < numerics.tolerance()


def test_airy_kernel_at_zero(numerics):
    ctx = numerics.ctx
    result = fourier_transform(airy_kernel(), 0, numerics)
    expected = 2 * ctx.pi * ctx.airyai(0)
    assert abs(result.value.value - expected) < ctx.mpf(10) ** -20
    assert abs(result.value.value - ctx.mpf("2.23069")) < 1e-5


def test_window_ladder_runs_out(numerics):
    ctx = numerics.ctx
    slow = KernelSpec("slow", lambda phi, c: c.exp(-abs(phi)), lambda r, c: c.exp(-r), even=True, max_window=2)
    with pytest.raises(WindowTooSmall):
        choose_window(slow, numerics, 0, 0, ctx.mpf(10) ** -20)
