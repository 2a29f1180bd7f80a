import random
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


# the acceptance module prints a verdict table; make sure it is visible with -v
def pytest_configure(config):
    sys.stdout.reconfigure(line_buffering=True)
