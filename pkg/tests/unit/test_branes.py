import pytest

from databricks.labs.fzzt.branes import BraneConfig, MomentTable, brane_brute_check, brane_partition
from databricks.labs.fzzt.errors import DomainError
from databricks.labs.fzzt.kernels import airy_kernel, gaussian_kernel


def g0(z, ctx):
    return ctx.sqrt(ctx.pi) * ctx.exp(-ctx.mpf(z) ** 2 / 4)


def test_single_brane_is_the_scalar_transform(numerics):
    ctx = numerics.ctx
    value = brane_partition(gaussian_kernel(), BraneConfig((0.7,)), numerics)
    assert abs(value.value - g0(0.7, ctx)) < numerics.tolerance()


def test_two_gaussian_branes(numerics):
    ctx = numerics.ctx
    value = brane_partition(gaussian_kernel(), BraneConfig((0.3, 1.2)), numerics)
    expected = ctx.mpc(0, 0.5) * g0(0.3, ctx) * g0(1.2, ctx)
    assert abs(value.value - expected) < numerics.ctx.mpf(10) ** -20


def test_swapping_eigenvalues_changes_nothing(numerics):
    kernel = gaussian_kernel()
    table = MomentTable(kernel, numerics)
    forward = brane_partition(kernel, BraneConfig((0.3, 1.2, -0.5)), numerics, table)
    backward = brane_partition(kernel, BraneConfig((-0.5, 1.2, 0.3)), numerics, table)
    assert abs(forward.value - backward.value) < numerics.ctx.mpf(10) ** -20


def test_confluent_pair(numerics):
    ctx = numerics.ctx
    value = brane_partition(gaussian_kernel(), BraneConfig((0.5, 0.5)), numerics)
    expected = ctx.mpc(0, 0.5) * g0(0.5, ctx) ** 2
    assert abs(value.value - expected) < ctx.mpf(10) ** -20


def test_near_confluent_pair_picks_the_stable_branch(numerics):
    ctx = numerics.ctx
    value = brane_partition(gaussian_kernel(), BraneConfig((0.5, 0.5001)), numerics)
    expected = ctx.mpc(0, 0.5) * g0(0.5, ctx) * g0(0.5001, ctx)
    assert abs(value.value - expected) < ctx.mpf(10) ** -15


def test_too_many_branes(numerics):
    with pytest.raises(DomainError):
        brane_partition(gaussian_kernel(), BraneConfig((0, 1, 2, 3, 4)), numerics)
    with pytest.raises(DomainError):
        BraneConfig(())


def test_table_must_match_the_kernel(numerics):
    table = MomentTable(airy_kernel(), numerics)
    with pytest.raises(DomainError):
        brane_partition(gaussian_kernel(), BraneConfig((0.1,)), numerics, table)


def test_moment_table_memoizes(numerics):
    table = MomentTable(gaussian_kernel(), numerics).populate(2, [0.25, 1])
    assert len(table) == 6
    assert table.max_m == 2
    assert float(table.derivative_gap(2, 1)) < 1e-15
    with pytest.raises(DomainError):
        table.derivative_gap(0, 1)


def test_first_moment_closed_form(numerics):
    ctx = numerics.ctx
    table = MomentTable(gaussian_kernel(), numerics)
    expected = ctx.mpc(0, 0.5) * 2 * g0(2, ctx)
    assert abs(table.get(1, 2) - expected) < numerics.tolerance()


def test_brute_check_domain(numerics):
    with pytest.raises(DomainError):
        brane_brute_check(gaussian_kernel(), BraneConfig((0.1, 0.2, 0.3)), numerics)
    with pytest.raises(DomainError):
        brane_brute_check(airy_kernel(), BraneConfig((0.1, 0.2)), numerics)


def test_brute_check_agrees_in_sign_with_the_reduced_form(numerics):
    check = brane_brute_check(gaussian_kernel(), BraneConfig((0, 1)), numerics, tol=1e-12)
    ctx = numerics.ctx
    expected = ctx.mpc(0, ctx.pi * ctx.exp(-ctx.mpf(0.25)) / 2)
    assert abs(check.reduced.value - expected) < 1e-20
    assert abs(check.direct.value - expected) < 1e-10
    assert abs(ctx.im(check.direct.value) - 1.22333740935355) < 1e-10
    assert check.discrepancy.value < 1e-10
