import numpy as np
import pytest

from invopt.fixtures import (
    CASE_STUDY_SPECS,
    CASE_STUDY_STATS,
    make_case_study_history,
)


@pytest.fixture(scope="session")
def case_specs():
    return CASE_STUDY_SPECS


@pytest.fixture(scope="session")
def case_stats():
    return CASE_STUDY_STATS


@pytest.fixture(scope="session")
def case_history():
    return make_case_study_history(seed=2024)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)
