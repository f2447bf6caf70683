import numpy as np
import pytest

from app.models.geometry import SensorArray

SPARSE_POSITIONS = [0, 1, 2, 3, 10, 17]


@pytest.fixture
def sparse_array():
    return SensorArray(positions=SPARSE_POSITIONS)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_array(rng, max_sensors=8, max_position=30, min_sensors=1):
    n = int(rng.integers(min_sensors, max_sensors + 1))
    return SensorArray(positions=sorted(rng.choice(max_position + 1, size=n, replace=False).tolist()))


def random_doas(rng, count, low=-80.0, high=80.0, min_gap=2.0):
    while True:
        doas = np.sort(rng.uniform(low, high, size=count))
        if count == 1 or np.min(np.diff(doas)) > min_gap:
            return doas.tolist()
