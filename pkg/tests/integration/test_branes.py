import pytest

from databricks.labs.fzzt.branes import BraneConfig, MomentTable, brane_brute_check, brane_partition
from databricks.labs.fzzt.kernels import airy_kernel, gaussian_kernel, xi_kernel


def kernel_named(name, numerics):
    match name:
        case "airy":
            return airy_kernel()
        case "gaussian":
            return gaussian_kernel()
    return xi_kernel(numerics)


@pytest.mark.parametrize("name", ["gaussian", "xi"])
def test_determinant_against_double_integral(numerics, name):
    check = brane_brute_check(kernel_named(name, numerics), BraneConfig((0.4, 1.3)), numerics)
    assert float(check.discrepancy) < 1e-10


@pytest.mark.parametrize("name", ["airy", "xi"])
def test_three_branes_are_symmetric(numerics, name):
    kernel = kernel_named(name, numerics)
    table = MomentTable(kernel, numerics)
    values = [
        brane_partition(kernel, BraneConfig(order), numerics, table).value
        for order in ((0.2, 0.9, -0.6), (0.9, -0.6, 0.2), (-0.6, 0.2, 0.9))
    ]
    scale = abs(values[0])
    assert all(abs(v - values[0]) <= numerics.ctx.mpf(10) ** -20 * scale for v in values)


def test_confluent_limit_is_continuous(numerics):
    kernel = airy_kernel()
    table = MomentTable(kernel, numerics)
    centre = numerics.ctx.mpf("0.3")

    def split(h):
        return brane_partition(kernel, BraneConfig((centre - h / 2, centre + h / 2)), numerics, table).value

    h = numerics.ctx.mpf("4e-3")
    extrapolated = (4 * split(h / 2) - split(h)) / 3
    confluent = brane_partition(kernel, BraneConfig((centre, centre)), numerics, table).value
    assert abs(extrapolated - confluent) < 1e-8
