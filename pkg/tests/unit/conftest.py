import logging

import mpmath
import pytest
from databricks.labs.blueprint.logger import install_logger

from databricks.labs.fzzt.precision import Numerics
from databricks.labs.fzzt.xi import ZeroList

install_logger()
logging.getLogger("databricks").setLevel("DEBUG")


@pytest.fixture
def numerics() -> Numerics:
    return Numerics(30)


@pytest.fixture
def numerics40() -> Numerics:
    return Numerics(40)


def known_zeros(count: int, numerics: Numerics) -> ZeroList:
    """First ``count`` ordinates from mpmath, shaped like a scan result."""
    values = [numerics.scalar(mpmath.zetazero(n).imag) for n in range(1, count + 1)]
    height = float(values[-1].value) + 0.01 if values else 0.0
    return ZeroList(
        zeros=tuple(values),
        brackets=tuple((v, v) for v in values),
        residuals=tuple(numerics.scalar(0) for _ in values),
        coverage=((0.0, height),),
        digits=numerics.digits,
    )


@pytest.fixture
def zeta_zeros(numerics):
    def inner(count: int) -> ZeroList:
        return known_zeros(count, numerics)

    return inner
