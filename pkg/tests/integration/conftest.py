import logging

import pytest
from databricks.labs.blueprint.logger import install_logger

from databricks.labs.fzzt.precision import Numerics
from databricks.labs.fzzt.xi import ZeroList, find_zeros

install_logger()
logging.getLogger("databricks").setLevel("DEBUG")


@pytest.fixture
def numerics() -> Numerics:
    return Numerics(30)


@pytest.fixture
def numerics50() -> Numerics:
    return Numerics(50)


@pytest.fixture(scope="session")
def first_hundred_zeros() -> ZeroList:
    """The scan behind the explicit formula: the 100th zero sits at 236.52."""
    zeros = find_zeros(240, 0.05, Numerics(30))
    assert len(zeros) >= 100
    return zeros
