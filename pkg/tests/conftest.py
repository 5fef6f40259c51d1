import numpy as np
import pytest
from hypothesis import strategies as st

from toricap.orthant import GeneratorSet, reduce


@st.composite
def generator_sets(draw, n=None, max_generators=4, low=-3.0, high=-0.2):
    n = draw(st.integers(1, 3)) if n is None else n
    m = draw(st.integers(1, max_generators))
    coord = st.floats(low, high, allow_nan=False, allow_infinity=False)
    pts = draw(st.lists(st.lists(coord, min_size=n, max_size=n), min_size=m, max_size=m))
    return GeneratorSet(np.array(pts))


@st.composite
def set_pairs(draw, max_generators=4):
    n = draw(st.integers(1, 3))
    return draw(generator_sets(n, max_generators)), draw(generator_sets(n, max_generators))


def random_reduced(rng, n, max_generators=4, low=-3.0, high=-0.2):
    m = int(rng.integers(1, max_generators + 1))
    return reduce(GeneratorSet(rng.uniform(low, high, size=(m, n))))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
