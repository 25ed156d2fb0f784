import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("repo", derandomize=True, deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture
def rng():
    return random.Random(20241016)
