"""Shared fixtures: default parameters and small grids."""

import numpy as np
import pytest

from nehari_fpl import Params, build_grid


@pytest.fixture
def params():
    return Params(s=0.4, p=2.0, q=0.5, mu=0.05, N=1)


@pytest.fixture
def grid48(params):
    return build_grid(-1.0, 1.0, 48, params)


@pytest.fixture
def grid64(params):
    return build_grid(-1.0, 1.0, 64, params)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
