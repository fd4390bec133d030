from __future__ import annotations

import numpy as np
import pytest

from wigner4d import GridSpec, HBAR, WignerState, build_grid


@pytest.fixture
def small_grid():
    """8^4 periodic box with physical hbar."""
    return build_grid(GridSpec(-4.0, 4.0, -4.0, 4.0, -2.0, 2.0, -2.0, 2.0,
                               8, 8, 8, 8, hbar=HBAR))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_hermitian_state(grid, rng, scale=1.0) -> WignerState:
    raw = rng.standard_normal(grid.shape + (2, 2)) \
        + 1j * rng.standard_normal(grid.shape + (2, 2))
    return WignerState(grid, scale * 0.5 * (raw + np.conj(np.swapaxes(raw, -1, -2))))


def random_scalar_state(grid, rng, scale=1.0) -> WignerState:
    return WignerState(grid, scale * rng.standard_normal(grid.shape))
