import math

import numpy as np
import pytest

from povm_frames.qubit import SIGMA_X, SIGMA_Y, SIGMA_Z, UnitVectorSet
from povm_frames.sampling import random_unit_vector

I2 = np.eye(2, dtype=complex)
SX, SY, SZ = np.array(SIGMA_X), np.array(SIGMA_Y), np.array(SIGMA_Z)
SQ3 = math.sqrt(3)


def trine_effects():
    vecs = [(1, 0, 0), (-0.5, 0, SQ3 / 2), (-0.5, 0, -SQ3 / 2)]
    return [(I2 + x * SX + y * SY + z * SZ) / 3 for x, y, z in vecs]


def random_vector_set(rng, n):
    """n - 2 random unit vectors closed off by two unit vectors summing to minus their total."""
    while True:
        head = random_unit_vector(rng, size=n - 2)
        s = -head.sum(axis=0)
        half = np.linalg.norm(s) / 2
        if half > 1:
            continue
        perp = random_unit_vector(rng)
        if half > 0:
            perp = np.cross(s, perp)
            perp /= np.linalg.norm(perp)
        t = math.sqrt(1 - half * half)
        tail = [s / 2 + t * perp, s / 2 - t * perp]
        return UnitVectorSet.normalized(np.vstack([head, tail]))


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(12345))
