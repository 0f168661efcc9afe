import numpy as np
import pytest
from hypothesis import settings, strategies as st

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@st.composite
def grid_streams(draw, grids=(2, 4, 10, 64), max_size=80):
    L = draw(st.sampled_from(grids))
    u = draw(st.lists(st.integers(0, L), min_size=1, max_size=max_size))
    return u, L


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)
