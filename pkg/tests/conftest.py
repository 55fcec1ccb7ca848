import numpy as np
import pytest

from sospin.lattice import HeightField, Lattice, Mode, is_admissible


@pytest.fixture
def rand():
    return np.random.default_rng(20260810)


def random_nonneg_field(rand, side, hi=4, boundary=0):
    lat = Lattice(side)
    h = rand.integers(0, hi + 1, size=(side, side)).astype(np.int64)
    return HeightField(lat, h, boundary=boundary, mode=Mode.NONNEGATIVE)


def random_relaxed_field(rand, side, lo=-2, hi=4, boundary=0, dips=3):
    """Random admissible relaxed field: nonnegative base plus legal dips."""
    lat = Lattice(side)
    while True:
        h = rand.integers(0, hi + 1, size=(side, side)).astype(np.int64)
        for _ in range(dips):
            r = int(rand.integers(0, side))
            c = int(rand.integers(0, side))
            v = int(rand.integers(lo, 1))
            old = h[r, c]
            h[r, c] = v
            f = HeightField(lat, h, boundary=boundary, mode=Mode.RELAXED,
                            validate=False)
            if not is_admissible(f):
                h[r, c] = old
        f = HeightField(lat, h, boundary=boundary, mode=Mode.RELAXED,
                        validate=False)
        if is_admissible(f):
            return f
