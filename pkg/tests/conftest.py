import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite", deadline=None, max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def beamsplitter():
    """Balanced 50/50 beamsplitter."""
    return np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
