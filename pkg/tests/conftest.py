import numpy as np
import pytest
from hypothesis import settings

from fockweyl.group import WeightSystem

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

# The configurations exercised throughout: (lambda, alpha, beta)
WEIGHT_SYSTEMS = {
    "n1m1": WeightSystem([[0.8]], [0.0], 1.0),
    "n2m2": WeightSystem([[0.5, -0.9], [0.3, 0.7]], [0.4, -0.2], 0.7),
    "n1m2": WeightSystem([[0.6], [-0.4]], [0.0, 0.0], 2.0),
}


@pytest.fixture(params=sorted(WEIGHT_SYSTEMS))
def ws(request):
    return WEIGHT_SYSTEMS[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
