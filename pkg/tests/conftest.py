import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from trivext.corpus import build_instance, serial_instance

settings.register_profile(
    "trivext",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("trivext")


@pytest.fixture(scope="session")
def serial2():
    """``F_2[x]/(x^3)`` presented as ``F_2`` extended by two copies of ``F_2``."""
    return serial_instance(2, 2)


@pytest.fixture(scope="session")
def dual_numbers_n2():
    return build_instance("F2[x]/(x^2)", 2, "regular")


@pytest.fixture(scope="session")
def dual_numbers_top():
    return build_instance("F2[x]/(x^2)", 1, "top")


def arr(data):
    return np.array(data, dtype=np.int64)
