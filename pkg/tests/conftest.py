import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from helpers import load_fixture  # noqa: E402


@pytest.fixture
def two_visits():
    """C=5, s0=0, d=[7,0,-6,0], empty vehicles at epochs 1 and 3"""
    return load_fixture("two_visits_loss1.json")


@pytest.fixture
def delegated_unload():
    return load_fixture("delegated_unload.json")


@pytest.fixture
def zero_demand():
    return load_fixture("zero_demand.json")


@pytest.fixture
def fixtures_dir():
    from helpers import FIXTURES
    return FIXTURES
