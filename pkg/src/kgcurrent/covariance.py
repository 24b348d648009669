"""Lorentz boosts of momentum-space states and covariance checks.

A boost with rapidity eta maps an on-shell momentum (s E, p) to
(s E', p') with p' = p cosh(eta) - s E sinh(eta), and a scalar density
amplitude transforms as a'(p') = a(p) E(p) / E(p').  Boosting a sampled
state therefore means resampling a smooth function at displaced nodes;
this module does it with shape-preserving cubic interpolation and
treats any appreciable norm drift as a hard failure rather than a
warning, since covariance tests are exactly the place where silent
resampling error would masquerade as physics.

Also here: the two closed forms of the mode-pair coefficient that
weights off-diagonal contributions to the density, one from the
invariant mass of the momentum sum and one from light-cone components.
They agree identically on-shell; both are exposed so the agreement can
be checked numerically pair by pair.
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from ._kin import MASS, energy, energy_minus, energy_plus
from .currents import born_at, current_at
from .errors import InterpolationError, ResolutionError, UnsupportedInputError
from .state import MomentumState

MAX_RAPIDITY = 2.0
SUPPORT_CUT = 1e-13         # amplitudes below this (relative) may fall off-band
NORM_DRIFT_TOL = 1e-4


@dataclass(frozen=True)
class BoostParams:
    """Rapidity eta with the associated (t, x) transformation matrix."""

    eta: float

    def __post_init__(self):
        if not np.isfinite(self.eta) or abs(self.eta) > MAX_RAPIDITY:
            raise ValueError(f"rapidity must be finite with |eta| <= "
                             f"{MAX_RAPIDITY}, got {self.eta}")

    @property
    def matrix(self) -> np.ndarray:
        ch, sh = np.cosh(self.eta), np.sinh(self.eta)
        return np.array([[ch, -sh], [-sh, ch]])


def boost_momentum(s: int, p, eta: float):
    """Spatial momentum of the boosted on-shell mode (s, p)."""
    return p * np.cosh(eta) - s * energy(p) * np.sinh(eta)


def _boost_branch(grid, amps: np.ndarray, s: int, eta: float) -> np.ndarray:
    if not np.any(amps):
        return np.zeros(grid.n, dtype=complex)
    p_new = boost_momentum(s, grid.p, eta)
    vals = amps * grid.energies / energy(p_new)
    live = np.flatnonzero(np.abs(amps) > SUPPORT_CUT * np.max(np.abs(amps)))
    lo, hi = p_new[live[0]], p_new[live[-1]]
    if lo < grid.p[0] or hi > grid.p[-1]:
        raise ResolutionError(
            f"boosted support [{lo:.3g}, {hi:.3g}] leaves the momentum band "
            f"[{grid.p[0]:.3g}, {grid.p[-1]:.3g}]; enlarge p_max")
    # p_new is strictly increasing in p, so it is a valid abscissa set.
    out = np.zeros(grid.n, dtype=complex)
    inside = (grid.p >= p_new[0]) & (grid.p <= p_new[-1])
    out[inside] = (PchipInterpolator(p_new, vals.real)(grid.p[inside])
                   + 1j * PchipInterpolator(p_new, vals.imag)(grid.p[inside]))
    return out


def boost_state(state: MomentumState, bp: BoostParams) -> MomentumState:
    """Resample the state onto the boosted frame's momentum lattice.

    The input clock must read zero: the amplitude-level map above is the
    t = 0 form of the transformation.
    """
    if state.t != 0.0:
        raise UnsupportedInputError("boost_state expects a state at t = 0; "
                                    "evolve and rebuild first")
    a = _boost_branch(state.grid, state.a, +1, bp.eta)
    b = _boost_branch(state.grid, state.b, -1, bp.eta)
    out = MomentumState(state.grid, a, b, 0.0, state.mass)
    drift = abs(out.norm - state.norm)
    if drift > NORM_DRIFT_TOL * max(state.norm, 1.0):
        raise InterpolationError(
            f"norm drifted by {drift:.3g} under boost resampling; "
            f"the grid does not resolve the boosted state")
    return out


def covariance_residual(state: MomentumState, bp: BoostParams,
                        sample_points: np.ndarray) -> float:
    """Max pointwise mismatch between the boosted-state current and the
    tensor-transformed original, relative to the current's peak size.

    sample_points is an (M, 2) array of (t, x) events in the boosted
    frame; each is pulled back through the inverse transformation.
    """
    pts = np.atleast_2d(np.asarray(sample_points, dtype=float))
    boosted = boost_state(state, bp)
    rho_b, j_b = current_at(boosted, pts[:, 0], pts[:, 1])
    back = pts @ BoostParams(-bp.eta).matrix.T
    rho_0, j_0 = current_at(state, back[:, 0], back[:, 1])
    ch, sh = np.cosh(bp.eta), np.sinh(bp.eta)
    rho_ref = ch * rho_0 - sh * j_0
    j_ref = -sh * rho_0 + ch * j_0
    scale = max(np.max(np.hypot(rho_b, j_b)), 1e-300)
    return float(max(np.max(np.abs(rho_b - rho_ref)),
                     np.max(np.abs(j_b - j_ref))) / scale)


def born_covariance_residual(state: MomentumState, bp: BoostParams,
                             sample_points: np.ndarray) -> float:
    """Same check applied to the |phi|^2 pair; this one is expected to
    come out large, which is the point of running it."""
    pts = np.atleast_2d(np.asarray(sample_points, dtype=float))
    boosted = boost_state(state, bp)
    rho_b, j_b = born_at(boosted, pts[:, 0], pts[:, 1], normalize=False)
    back = pts @ BoostParams(-bp.eta).matrix.T
    rho_0, j_0 = born_at(state, back[:, 0], back[:, 1], normalize=False)
    ch, sh = np.cosh(bp.eta), np.sinh(bp.eta)
    rho_ref = ch * rho_0 - sh * j_0
    j_ref = -sh * rho_0 + ch * j_0
    scale = max(np.max(np.hypot(rho_b, j_b)), 1e-300)
    return float(max(np.max(np.abs(rho_b - rho_ref)),
                     np.max(np.abs(j_b - j_ref))) / scale)


def onshell_momentum(s: int, q: float) -> tuple:
    """Two-momentum (s E(q), q) of the mode with frequency sign s."""
    return (s * energy(q), float(q))


LIGHTLIKE_TOL = 1e-12


def _lightcone_component(p0: float, p1: float, which: int) -> float:
    """p^+ = p0 + p1 or p^- = p0 - p1 for an on-shell two-vector,
    computed without cancellation.  Only the sign of p0 is trusted; the
    magnitude is reconstructed on-shell from p1."""
    s = 1 if p0 >= 0 else -1
    if which == +1:
        return s * energy_plus(s, p1)
    return s * energy_minus(s, p1)


def alpha_invariant_mass(pvec, kvec) -> float:
    """Pair coefficient xi / sqrt((p + k)^2) with xi the mean frequency
    sign; exactly zero for opposite-sign pairs.  Inputs are on-shell
    two-vectors (p0, p1) at unit mass.  Raises for lightlike momentum
    sums, where the coefficient is undefined.
    """
    p0, p1 = pvec
    k0, k1 = kvec
    xi = 0.5 * (np.sign(p0) + np.sign(k0))
    if xi == 0.0:
        return 0.0
    # (p + k)^2 factored through light-cone components; each factor is
    # cancellation-free even at large |p1|.
    plus = _lightcone_component(p0, p1, +1) + _lightcone_component(k0, k1, +1)
    minus = _lightcone_component(p0, p1, -1) + _lightcone_component(k0, k1, -1)
    s2 = plus * minus
    if s2 <= (LIGHTLIKE_TOL * (abs(p0) + abs(k0))) ** 2:
        raise UnsupportedInputError(
            f"momentum sum of pair {pvec}, {kvec} is lightlike")
    return float(xi / np.sqrt(s2))


def alpha_lightcone(pvec, kvec, which: int = +1) -> float:
    """The same coefficient from light-cone components p^+- = p0 +- p1:

        alpha = 2 Re[sqrt(p^w) conj(sqrt(k^w))] / (2 m (p^w + k^w))

    with principal complex square roots; `which` picks the component.
    Both choices agree with alpha_invariant_mass on-shell.
    """
    if which not in (+1, -1):
        raise ValueError("which must be +1 or -1")
    p0, p1 = pvec
    k0, k1 = kvec
    pw = _lightcone_component(p0, p1, which)
    kw = _lightcone_component(k0, k1, which)
    denom = pw + kw
    if abs(denom) <= LIGHTLIKE_TOL * (abs(pw) + abs(kw)):
        raise UnsupportedInputError(
            f"light-cone components of pair {pvec}, {kvec} cancel")
    num = 2.0 * np.real(np.sqrt(pw + 0j) * np.conj(np.sqrt(kw + 0j)))
    return float(num / (2.0 * MASS * denom))
