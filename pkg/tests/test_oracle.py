"""Closed-form reference path and the localization sequence."""

import numpy as np
import pytest

from kgcurrent import (PlaneWaveSet, SpectralGrid, delta_sequence,
                       oracle_current, oracle_vs_spectral,
                       state_from_plane_waves)
from kgcurrent._kin import energy
from kgcurrent.oracle import kernel_factors, s_minus, s_plus, smearing_kernel
from kgcurrent.errors import ResolutionError


def test_mode_set_validation():
    with pytest.raises(ValueError):
        PlaneWaveSet([0.5], [2], [1.0])          # bad sign
    with pytest.raises(ValueError):
        PlaneWaveSet([0.5, 1.0], [1], [1.0])     # ragged
    with pytest.raises(ValueError):
        PlaneWaveSet(np.arange(65.0), np.ones(65, int), np.ones(65))


def test_single_mode_closed_form():
    for s in (+1, -1):
        q = -1.7
        rho, j = oracle_current(PlaneWaveSet([q], [s], [1.0]), 0.42, 2.3)
        assert abs(rho - energy(q)) < 1e-14
        assert abs(j - s * q) < 1e-14


def test_off_lattice_momentum_rejected():
    g = SpectralGrid(64, 8.0)
    with pytest.raises(ValueError):
        state_from_plane_waves(PlaneWaveSet([0.3], [1], [1.0]), g)


def test_oracle_equivalence_single_mode():
    g = SpectralGrid(128, 8.0)
    pw = PlaneWaveSet([g.p[100]], [1], [1.0])
    assert oracle_vs_spectral(pw, g) < 1e-12


def test_oracle_equivalence_random_sets():
    """The lattice pipeline must reproduce the closed form on any state
    of <= 8 modes, including under evolution to a later time."""
    g = SpectralGrid(256, 16.0)
    rng = np.random.default_rng(17)
    for _ in range(10):
        k = int(rng.integers(2, 9))
        idx = rng.choice(g.n // 2, size=k, replace=False) + g.n // 4
        pw = PlaneWaveSet(g.p[idx], rng.choice([-1, 1], size=k),
                          rng.normal(size=k) + 1j * rng.normal(size=k))
        assert oracle_vs_spectral(pw, g) < 1e-10
        assert oracle_vs_spectral(pw, g, t=3.7) < 1e-10


def test_kernel_diagonal_is_one():
    p = np.linspace(-100.0, 100.0, 2001)
    assert np.max(np.abs(smearing_kernel(p, p) - 1.0)) < 1e-14


def test_kernel_factorization():
    rng = np.random.default_rng(23)
    q, p = rng.uniform(-30, 30, 500), rng.uniform(-30, 30, 500)
    g1p, g2p = kernel_factors(p)
    g1q, g2q = kernel_factors(q)
    assert np.max(np.abs(smearing_kernel(q, p)
                         - (g1q * g1p + g2q * g2p))) < 1e-13


def test_kernel_components_unit_sum():
    p = np.linspace(-50.0, 50.0, 1001)
    assert np.max(np.abs(s_plus(p) ** 2 + s_minus(p) ** 2 - 1.0)) < 1e-14


def test_delta_band_guard():
    with pytest.raises(ResolutionError):
        delta_sequence(4, grid=SpectralGrid(256, 8.0))


def test_delta_member_frozen_diagnostics():
    r = delta_sequence(2)
    assert abs(r.integral - 1.0) < 1e-6
    assert abs(r.width - 1.010192498) < 1e-6
    # peak sits at the target point and the window profile is symmetric
    assert abs(r.x[np.argmax(r.rho)]) < 1e-9
    assert np.max(np.abs(r.rho - r.rho[::-1])) < 1e-10 * r.rho.max()


def test_delta_localizes_off_origin():
    r = delta_sequence(1, a=0.3)
    assert abs(r.x[np.argmax(r.rho)] - 0.3) < 1e-9


def test_delta_width_halving_and_resolution():
    widths, devs = [], []
    for n in (1, 2, 4, 8, 16):
        r = delta_sequence(n)
        widths.append(r.width)
        devs.append(np.max(np.abs(r.r_n - 1.0)))
        # r_n is exactly one at zero momentum transfer for every n
        mid = np.argmin(np.abs(r.p_probe))
        assert abs(r.r_n[mid] - 1.0) < 1e-6
    for w1, w2 in zip(widths, widths[1:]):
        assert abs(w1 / w2 - 2.0) < 0.2
    assert all(d1 > d2 for d1, d2 in zip(devs, devs[1:]))
