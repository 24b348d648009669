"""Evolution and the ballistic momentum readout."""

import numpy as np
import pytest

from kgcurrent import (SpectralGrid, compute_current, converge_time_of_flight,
                       evolve, gaussian_state, random_state, time_of_flight)
from kgcurrent.dynamics import nonrel_tof_check, t_safe_horizon
from kgcurrent.errors import UnsupportedInputError
from kgcurrent.state import MomentumState


@pytest.fixture
def wide():
    # relativistic spread: most of the packet moves near light speed
    return gaussian_state(SpectralGrid(4096, 16.0), pbar=0.0, sigma_p=2.0)


def test_evolve_phases():
    g = SpectralGrid(256, 16.0)
    rng = np.random.default_rng(2)
    st = random_state(g, rng, two_branch=True)
    out = evolve(st, 0.8)
    assert np.max(np.abs(out.a - st.a * np.exp(-1j * g.energies * 0.8))) < 1e-14
    assert np.max(np.abs(out.b - st.b * np.exp(+1j * g.energies * 0.8))) < 1e-14
    assert out.t == st.t + 0.8


def test_evolution_is_additive_and_reversible():
    g = SpectralGrid(256, 16.0)
    rng = np.random.default_rng(4)
    st = random_state(g, rng, two_branch=True)
    back = evolve(evolve(st, 1.1), -1.1)
    assert np.max(np.abs(back.a - st.a)) < 1e-13
    assert np.max(np.abs(back.b - st.b)) < 1e-13


def test_density_shape_conserved_under_evolution(wide):
    # total probability is invariant; the profile is not
    before = compute_current(wide)
    after = compute_current(evolve(wide, 5.0))
    g = wide.grid
    assert abs(np.sum(after.rho) * g.dx - np.sum(before.rho) * g.dx) < 1e-12
    assert np.max(np.abs(after.rho - before.rho)) > 1e-3


def test_tof_rejects_two_branch():
    g = SpectralGrid(256, 16.0)
    rng = np.random.default_rng(6)
    st = random_state(g, rng, two_branch=True)
    with pytest.raises(UnsupportedInputError):
        time_of_flight(st, 10.0)


def test_tof_rejects_displaced_packet():
    g = SpectralGrid(1024, 16.0)
    st = gaussian_state(g, pbar=0.0, sigma_p=2.0, x0=8.0)
    with pytest.raises(UnsupportedInputError):
        time_of_flight(st, 10.0)


def test_tof_flags_horizon(wide):
    res = time_of_flight(wide, 2.0 * t_safe_horizon(wide))
    assert res.meta.get("beyond_horizon")


def test_tof_relativistic_deviation(wide):
    """sigma_p = 2: the readout must deviate from |phi~|^2 by a finite,
    even-in-p amount while still integrating to one."""
    res = converge_time_of_flight(wide)
    assert res.meta["converged"]
    g = wide.grid
    l1 = np.sum(np.abs(res.g - res.born_g)) * g.dp
    assert l1 > 0.05
    assert abs(np.sum(res.g) * g.dp - 1.0) < 1e-3
    assert np.max(np.abs(res.g - res.g[::-1])) < 1e-12 * res.g.max()
    # frozen endpoint of the deterministic doubling protocol
    assert abs(l1 - 0.228062) < 1e-4


def test_tof_nonrelativistic_matches_born():
    g = SpectralGrid(8192, 0.08)
    st = gaussian_state(g, pbar=0.0, sigma_p=0.01)
    res = converge_time_of_flight(st)
    assert res.meta["converged"]
    assert np.sum(np.abs(res.g - res.born_g)) * g.dp < 1e-2


def test_tof_nonrel_estimator_close():
    g = SpectralGrid(8192, 0.08)
    st = gaussian_state(g, pbar=0.0, sigma_p=0.01)
    assert nonrel_tof_check(st, 1.0e6) < 1e-3


def test_horizon_scales_with_box():
    st1 = gaussian_state(SpectralGrid(1024, 16.0), 0.0, 2.0)
    st2 = gaussian_state(SpectralGrid(2048, 16.0), 0.0, 2.0)
    assert t_safe_horizon(st2) > 1.9 * t_safe_horizon(st1)
