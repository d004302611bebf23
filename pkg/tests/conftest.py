import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from jordankit.models import load_chain, load_matpoly, load_matrix, load_recip_system

settings.register_profile("default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("acceptance", max_examples=500, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.getenv("JORDANKIT_HYPOTHESIS_PROFILE", "default"))

TEST_DATA = Path(__file__).resolve().parent.parent / "test_data"


@pytest.fixture
def data_file():
    return lambda name: TEST_DATA / name


@pytest.fixture(scope="session")
def worked_q():
    return load_matrix(TEST_DATA / "worked_3x3.json")


@pytest.fixture(scope="session")
def mixed_q():
    return load_matrix(TEST_DATA / "mixed_point.json")


@pytest.fixture(scope="session")
def recip_418():
    return load_recip_system(TEST_DATA / "recip_418.json")


@pytest.fixture(scope="session")
def recip_428():
    return load_recip_system(TEST_DATA / "recip_428.json")


@pytest.fixture(scope="session")
def chain_428():
    return load_chain(TEST_DATA / "chain_428.json")


@pytest.fixture(scope="session")
def jordan_block():
    return load_matpoly(TEST_DATA / "jordan_block.json")
