import numpy as np
import pytest

from nsopt.core import SampleSchedule
from nsopt.corpus import corpus


@pytest.fixture(scope="session")
def schedule():
    return SampleSchedule()


@pytest.fixture(scope="session")
def deep_schedule():
    return SampleSchedule(stages=20)


@pytest.fixture(scope="session")
def entries():
    return {e.name: e for e in corpus()}


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260810)
