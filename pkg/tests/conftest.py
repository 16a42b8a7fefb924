import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20250815)


@pytest.fixture
def grid_1d():
    from singheat import make_grid

    return make_grid(1, 8.0, 256)


@pytest.fixture
def grid_2d():
    from singheat import make_grid

    return make_grid(2, 6.0, 48)
