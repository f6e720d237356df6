import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture
def center_profile():
    from cheart.datakit.types import ConditionProfile

    return ConditionProfile(
        age_years=45, gender="male", weight_kg=82.0, height_cm=168.5, sbp_mmhg=131.0
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
