"""Momentum-space states: construction, norms, splitting, round trips."""

import numpy as np
import pytest

from kgcurrent import (InitialData, MomentumState, SpectralGrid,
                       gaussian_state, load_state, random_state,
                       reconstruct_phi, save_state, split_frequency)
from kgcurrent.errors import GridMismatchError, ResolutionError
from kgcurrent.state import reconstruct_phi_dot


@pytest.fixture
def grid():
    return SpectralGrid(256, 16.0)


def test_state_arrays_are_frozen(grid):
    st = gaussian_state(grid, 0.0, 1.0)
    with pytest.raises(ValueError):
        st.a[0] = 1.0


def test_shape_mismatch_rejected(grid):
    with pytest.raises(GridMismatchError):
        MomentumState(grid, np.zeros(grid.n - 1), np.zeros(grid.n))


def test_gaussian_norm_is_one(grid):
    st = gaussian_state(grid, pbar=0.7, sigma_p=1.3)
    assert abs(st.norm - 1.0) < 1e-12


def test_normalized_fixes_norm(grid):
    rng = np.random.default_rng(0)
    st = random_state(grid, rng)
    assert abs(st.normalized().norm - 1.0) < 1e-12


def test_gaussian_band_guard():
    # momentum tail of sigma_p = 4 does not fit in |p| <= 8
    with pytest.raises(ResolutionError):
        gaussian_state(SpectralGrid(256, 8.0), pbar=0.0, sigma_p=4.0)


def test_gaussian_box_guard():
    # sigma_x = 100 does not fit in a box of length ~25
    with pytest.raises(ResolutionError):
        gaussian_state(SpectralGrid(64, 8.0), pbar=0.0, sigma_p=0.01)


def test_split_roundtrip(grid):
    """Cauchy data -> branches -> Cauchy data is the identity."""
    rng = np.random.default_rng(3)
    st = random_state(grid, rng, two_branch=True).normalized()
    phi = reconstruct_phi(st)
    phi_dot = reconstruct_phi_dot(st)
    back = split_frequency(InitialData(phi.values, phi_dot.values), grid)
    assert np.max(np.abs(back.a - st.a)) < 1e-12
    assert np.max(np.abs(back.b - st.b)) < 1e-12


def test_single_branch_field_value(grid):
    # a single populated node must reconstruct to its plane wave
    a = np.zeros(grid.n, dtype=complex)
    a[130] = 2.0 - 1.0j
    st = MomentumState(grid, a, np.zeros(grid.n))
    phi = reconstruct_phi(st).values
    expected = a[130] * np.exp(1j * grid.p[130] * grid.x) \
        * grid.dp / np.sqrt(2.0 * np.pi)
    assert np.max(np.abs(phi - expected)) < 1e-13


def test_save_load_roundtrip(tmp_path, grid):
    rng = np.random.default_rng(11)
    st = random_state(grid, rng, two_branch=True)
    path = tmp_path / "state.json"
    save_state(st, path)
    back = load_state(path)
    assert back.grid == grid
    assert back.t == st.t
    assert np.array_equal(back.a, st.a)
    assert np.array_equal(back.b, st.b)
