import pytest

from databricks.labs.fzzt.errors import (
    ComposeNonzeroConstantTerm,
    LogOfZeroConstantTerm,
    OrderMismatch,
    OrderOverflow,
)
from databricks.labs.fzzt.series import MAX_ORDER, PowerSeries, series_op


def test_log_of_one_plus_phi(numerics):
    s = PowerSeries.from_coefficients([1, 1], numerics, 3)
    log = series_op("log", s)
    ctx = numerics.ctx
    expected = [0, 1, ctx.mpf(-1) / 2, ctx.mpf(1) / 3]
    assert all(abs(a - b) < ctx.mpf(10) ** -28 for a, b in zip(log.coeffs, expected))


def test_exp_of_zero_series(numerics):
    out = series_op("exp", PowerSeries.zero(5, numerics))
    assert out.coeffs[0] == 1
    assert all(c == 0 for c in out.coeffs[1:])


def test_exp_log_round_trip(numerics):
    s = PowerSeries.from_coefficients([2, 1, 1], numerics, 8)
    back = series_op("exp", series_op("log", s))
    ctx = numerics.ctx
    assert all(abs(a - b) < numerics.tolerance() for a, b in zip(back.coeffs, s.coeffs))
    assert back.order == 8
    assert abs(back.coeffs[2] - 1) < ctx.mpf(10) ** -25


def test_multiplication_truncates_at_the_declared_order(numerics):
    a = PowerSeries.from_coefficients([1, 1], numerics, 2)
    square = a * a
    assert square.order == 2
    assert [int(c) for c in square.coeffs] == [1, 2, 1]
    cube = square * a
    assert [int(c) for c in cube.coeffs] == [1, 3, 3]


def test_compose_with_polynomial(numerics):
    outer = PowerSeries.from_coefficients([0, 1, 1], numerics, 3)
    inner = PowerSeries.from_coefficients([0, 2], numerics, 3)
    out = series_op("compose", outer, inner)
    assert [int(c) for c in out.coeffs] == [0, 2, 4, 0]


def test_differentiate(numerics):
    s = PowerSeries.from_coefficients([5, 1, 3, 2], numerics)
    assert [int(c) for c in series_op("differentiate", s).coeffs] == [1, 6, 6]


def test_evaluate_horner(numerics):
    s = PowerSeries.from_coefficients([1, 2, 3], numerics)
    assert s.evaluate(2) == 17


def test_errors(numerics):
    zero_constant = PowerSeries.from_coefficients([0, 1], numerics, 3)
    with pytest.raises(LogOfZeroConstantTerm):
        series_op("log", zero_constant)
    with pytest.raises(ComposeNonzeroConstantTerm):
        series_op("compose", zero_constant, PowerSeries.from_coefficients([1, 1], numerics, 3))
    with pytest.raises(OrderMismatch):
        series_op("add", zero_constant, PowerSeries.zero(2, numerics))
    with pytest.raises(OrderOverflow):
        PowerSeries.zero(MAX_ORDER + 1, numerics)
    with pytest.raises(OrderOverflow):
        PowerSeries.from_coefficients([1, 2, 3], numerics, 1)
