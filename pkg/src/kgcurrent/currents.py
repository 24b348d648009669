"""Transported probability density and current, Born pair, and the
deviation measure between them.

The density/current pair carried by a two-branch state is assembled from
four coherent sums.  Each mode with frequency sign s and momentum p
enters with light-cone weights sqrt((s E + p)/4m) and sqrt((s E - p)/4m),
taken with the principal complex square root, so negative-frequency
modes acquire purely imaginary weights.  With

    S1 = T[ sqrt(l+ /4m) amp ],   S2 = T[ conj(sqrt(l+ /4m)) amp ],
    S3 = T[ sqrt(l- /4m) amp ],   S4 = T[ conj(sqrt(l- /4m)) amp ],

where l± = s E ± p and T is the inverse transform over both branches,

    rho = |S1|^2 + |S2|^2 + |S3|^2 + |S4|^2
    j   = |S1|^2 + |S2|^2 - |S3|^2 - |S4|^2 .

rho >= 0 and |j| <= rho hold pointwise by construction, and continuity
d(rho)/dt + d(j)/dx = 0 holds exactly for the mode sum (on-shell
algebra), so the numerical continuity residual is pure time
discretization.  For single-branch states the pair reduces to
|D+ phi|^2 +- |D- phi|^2 with the multipliers D± = sqrt((E ± p)/2m).

The Born pair (|phi|^2, J_B) uses the two-point velocity kernel
u(p, k) = (p + k)/(p0 + k0); it is positive but not covariant, which
chi() quantifies and the covariance module demonstrates.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from ._kin import MASS, energy_minus, energy_plus, lightcone
from .errors import UnnormalizedStateWarning, UnsupportedInputError
from .grid import ComplexField, SpectralGrid, fft_forward, fft_inverse
from .state import MomentumState, _amps_at

TWO_PI = 2.0 * np.pi
PAIRSUM_MODE_CAP = 2048


@dataclass(frozen=True)
class BranchMultipliers:
    """Samples of the operator multipliers w_±(s, p) = sqrt((E ± s p)/2m)."""

    w_plus: np.ndarray
    w_minus: np.ndarray


@dataclass(frozen=True)
class CurrentField:
    """Density/current samples on the position lattice at time t."""

    grid: SpectralGrid
    rho: np.ndarray
    j: np.ndarray
    t: float
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ContinuityResidual:
    """Max-norm continuity defect with its order diagnostic.

    value is the residual at step dt, value_half at dt/2; their ratio
    should sit near 4 for a clean second-order central difference.
    flagged marks runs outside the asymptotic regime (dt too large, or
    so small the difference quotient hits the round-off floor).
    """

    value: float
    value_half: float
    dt: float
    order_ratio: float
    flagged: bool


def branch_multipliers(grid: SpectralGrid, s: int = 1) -> BranchMultipliers:
    """Multiplier samples for frequency sign s on every grid node.

    Computed through the stable light-cone pair, so the identities
    w+^2 + w-^2 = E/m and w+ w- = 1/2 hold to machine precision even
    at |p| >> m.
    """
    if s not in (1, -1):
        raise ValueError("s must be +1 or -1")
    wp = np.sqrt(energy_plus(s, grid.p) / (2.0 * MASS))
    wm = np.sqrt(energy_minus(s, grid.p) / (2.0 * MASS))
    return BranchMultipliers(wp, wm)


def apply_D(state: MomentumState, branch_sign: int, operator_sign: int) -> ComplexField:
    """Apply the spatial square-root multiplier to one branch.

    Returns the position field of sqrt((E + operator_sign * p)/2m)
    applied to the chosen branch's amplitude at the state's clock time.
    On a single spatial plane wave e^{i p x} the operator is just the
    scalar multiplier evaluated at p, regardless of branch.
    """
    if branch_sign not in (1, -1) or operator_sign not in (1, -1):
        raise ValueError("branch_sign and operator_sign must be +1 or -1")
    amp = state.a if branch_sign == 1 else state.b
    w = np.sqrt(energy_plus(operator_sign, state.grid.p) / (2.0 * MASS))
    return ComplexField(fft_inverse(w * amp, state.grid), "position")


def _fs_weights(g: SpectralGrid):
    """Principal roots of l±(s, p)/4m for both branches.

    Returns (c1a, c1b, c3a, c3b): the l+ and l- weights on the a branch
    (real) and on the b branch (purely imaginary).
    """
    p = g.p
    c1a = np.sqrt(lightcone(+1, p) / (4.0 * MASS) + 0j)          # l+ at s=+1
    c1b = np.sqrt(lightcone(-1, p) / (4.0 * MASS) + 0j)          # l+ at s=-1
    c3a = np.sqrt(energy_minus(+1, p) / (4.0 * MASS) + 0j)       # l- at s=+1
    c3b = np.sqrt(-energy_plus(+1, p) / (4.0 * MASS) + 0j)       # l- at s=-1
    return c1a, c1b, c3a, c3b


def _four_sums(state: MomentumState, pad: bool = False):
    """The four coherent position-space sums S1..S4 at the state's clock."""
    g = state.grid
    c1a, c1b, c3a, c3b = _fs_weights(g)
    a, b = state.a, state.b
    v1 = c1a * a + c1b * b
    v2 = np.conj(c1a) * a + np.conj(c1b) * b
    v3 = c3a * a + c3b * b
    v4 = np.conj(c3a) * a + np.conj(c3b) * b
    if pad:
        gf = g.padded()
        vecs = (g.embed_spectrum(v) for v in (v1, v2, v3, v4))
    else:
        gf = g
        vecs = (v1, v2, v3, v4)
    return gf, tuple(fft_inverse(v, gf) for v in vecs)


def _warn_if_unnormalized(state: MomentumState):
    n = state.norm
    if abs(n - 1.0) > 1e-8:
        warnings.warn(f"state norm is {n:.6g}, not 1; currents scale with it",
                      UnnormalizedStateWarning, stacklevel=3)


def compute_current(state: MomentumState) -> CurrentField:
    """Density and current of a state on its lattice at its clock time.

    For normalized states sum(rho) dx = 1 exactly (Parseval), rho >= 0
    pointwise, and |j| <= rho pointwise.
    """
    _warn_if_unnormalized(state)
    _, (s1, s2, s3, s4) = _four_sums(state)
    q1 = np.abs(s1) ** 2
    q2 = np.abs(s2) ** 2
    q3 = np.abs(s3) ** 2
    q4 = np.abs(s4) ** 2
    return CurrentField(state.grid, q1 + q2 + q3 + q4, q1 + q2 - q3 - q4, state.t)


def current_at(state: MomentumState, ts, xs):
    """Density and current at arbitrary spacetime points (direct sums).

    ts, xs : broadcastable arrays (a scalar t with an array of x is the
    common case); each pair (t, x) is evaluated by direct summation
    over modes, so x need not lie on the lattice and the evaluation is
    exact for the state's mode content (L-periodic in x).  Returns
    (rho, j) arrays.
    """
    g = state.grid
    ts, xs = np.broadcast_arrays(np.atleast_1d(np.asarray(ts, dtype=float)),
                                 np.atleast_1d(np.asarray(xs, dtype=float)))
    p, e = g.p, g.energies
    c1a, c1b, c3a, c3b = _fs_weights(g)
    dt = ts - state.t
    pa = np.exp(1j * (np.outer(xs, p) - np.outer(dt, e)))
    pb = np.exp(1j * (np.outer(xs, p) + np.outer(dt, e)))
    meas = g.dp / np.sqrt(TWO_PI)
    s1 = (pa @ (c1a * state.a) + pb @ (c1b * state.b)) * meas
    s2 = (pa @ (np.conj(c1a) * state.a) + pb @ (np.conj(c1b) * state.b)) * meas
    s3 = (pa @ (c3a * state.a) + pb @ (c3b * state.b)) * meas
    s4 = (pa @ (np.conj(c3a) * state.a) + pb @ (np.conj(c3b) * state.b)) * meas
    q1, q2, q3, q4 = (np.abs(s) ** 2 for s in (s1, s2, s3, s4))
    return q1 + q2 + q3 + q4, q1 + q2 - q3 - q4


# ---------------------------------------------------------------------------
# Born pair


def _born_norm(state: MomentumState) -> float:
    """sum |phi|^2 dx at the state's clock (not the energy-weighted norm)."""
    return float(np.sum(np.abs(state.a + state.b) ** 2) * state.grid.dp)


def born_density_current(state: MomentumState, method: str = "auto",
                         normalize: bool = True) -> CurrentField:
    """Born density |phi|^2 and its velocity-kernel current.

    J_B(x) = sum over mode pairs of A_n conj(A_m) u(p_n, p_m)
    e^{i (p_n - p_m) x} with u(p, k) = (p + k)/(p0 + k0), p0 = s E(p).

    Two implementations:

    * "spectral" (single-branch states, any n): J_B is recovered from
      the exact continuity relation d|phi|^2/dt = -dJ_B/dx on a
      band-doubled lattice, plus the explicit zero mode; O(n log n).
    * "pairsum" (any state, <= 2048 total modes): direct double sum
      over mode pairs, collapsed along difference diagonals; O(n^2).
      Pairs with p0_n + p0_m ~ 0 (opposite branches, equal energy) have
      a singular kernel; they are dropped and counted in
      meta["excluded_pairs"].

    method="auto" picks "spectral" when one branch vanishes, else
    "pairsum".  meta["path"] records the choice.  With normalize=True
    both outputs are scaled so that sum(rho) dx = 1.
    """
    g = state.grid
    a_live = bool(np.any(state.a))
    b_live = bool(np.any(state.b))
    if method == "auto":
        method = "spectral" if not (a_live and b_live) else "pairsum"
    if method == "spectral":
        if a_live and b_live:
            raise UnsupportedInputError(
                "spectral Born path needs a single-branch state; use pairsum")
        rho, j, meta = _born_spectral(state)
    elif method == "pairsum":
        n_modes = (g.n if a_live else 0) + (g.n if b_live else 0)
        if n_modes > PAIRSUM_MODE_CAP:
            raise UnsupportedInputError(
                f"pairsum Born path capped at {PAIRSUM_MODE_CAP} modes, got {n_modes}; "
                "use a coarser grid or the spectral path")
        rho, j, meta = _born_pairsum(state)
    else:
        raise ValueError(f"unknown method {method!r}")
    if normalize:
        z = float(np.sum(rho) * g.dx)
        rho = rho / z
        j = j / z
    return CurrentField(g, rho, j, state.t, meta)


def _born_spectral(state: MomentumState):
    g = state.grid
    gp = g.padded()
    e = g.energies
    amp = state.a + state.b
    # d(phi~)/dt: -iE on the a branch, +iE on the b branch
    damp = -1j * e * state.a + 1j * e * state.b
    phi = fft_inverse(g.embed_spectrum(amp), gp)
    dphi = fft_inverse(g.embed_spectrum(damp), gp)
    rho_fine = np.abs(phi) ** 2
    drho_amps = fft_forward(2.0 * np.real(np.conj(phi) * dphi), gp)
    # invert d j/dx = -d rho/dt mode by mode; zero mode from the diagonal
    ptil = gp.p.copy()
    ptil[gp.n // 2] = 1.0                      # placeholder, overwritten below
    j_amps = drho_amps / (-1j * ptil)
    vbar = np.sum((np.abs(state.a) ** 2 - np.abs(state.b) ** 2) * g.p / e)
    j_amps[gp.n // 2] = (g.dp / np.sqrt(TWO_PI)) * vbar
    j_fine = np.real(fft_inverse(j_amps, gp))
    return rho_fine[::2], j_fine[::2], {"path": "spectral"}


def _born_pairsum(state: MomentumState):
    g = state.grid
    n = g.n
    e = g.energies
    branches = []
    if np.any(state.a):
        branches.append((state.a, +1.0))
    if np.any(state.b):
        branches.append((state.b, -1.0))
    # difference-diagonal coefficients c_d, d = -(n-1)..(n-1)
    c = np.zeros(2 * n - 1, dtype=complex)
    excluded = 0
    idx = np.arange(n)
    diag = (idx[:, None] - idx[None, :]).ravel() + (n - 1)
    for a1, s1 in branches:
        for a2, s2 in branches:
            p0sum = s1 * e[:, None] + s2 * e[None, :]
            num = g.p[:, None] + g.p[None, :]
            bad = np.abs(p0sum) < 1e-12 * (e[:, None] + e[None, :])
            if np.any(bad):
                w = np.abs(a1[:, None]) * np.abs(a2[None, :])
                excluded += int(np.count_nonzero(bad & (w > 0)))
                kern = np.where(bad, 0.0, num / np.where(bad, 1.0, p0sum))
            else:
                kern = num / p0sum
            m = ((a1[:, None] * np.conj(a2)[None, :]) * kern).ravel()
            c += np.bincount(diag, weights=m.real, minlength=2 * n - 1) \
                + 1j * np.bincount(diag, weights=m.imag, minlength=2 * n - 1)
    c *= g.dp ** 2 / TWO_PI
    # place c_d at frequency d*dp on the band-doubled lattice and invert
    gp = g.padded()
    amps = np.zeros(gp.n, dtype=complex)
    amps[gp.n // 2 - (n - 1): gp.n // 2 + n] = c * np.sqrt(TWO_PI) / g.dp
    j_fine = np.real(fft_inverse(amps, gp))
    rho = np.abs(fft_inverse(state.a + state.b, g)) ** 2
    meta = {"path": "pairsum"}
    if excluded:
        meta["excluded_pairs"] = excluded
    return rho, j_fine[::2], meta


def born_at(state: MomentumState, ts, xs, normalize: bool = True):
    """Born pair at arbitrary spacetime points (single-branch states).

    Direct double sum per point, O(n^2) each; used by the covariance
    demonstration.  Returns (rho_b, j_b) arrays.
    """
    g = state.grid
    if np.any(state.a) and np.any(state.b):
        raise UnsupportedInputError("born_at supports single-branch states only")
    if g.n > PAIRSUM_MODE_CAP:
        raise UnsupportedInputError(f"born_at capped at n = {PAIRSUM_MODE_CAP}")
    sign = 1.0 if np.any(state.a) else -1.0
    amp0 = state.a if sign > 0 else state.b
    e = g.energies
    u = (g.p[:, None] + g.p[None, :]) / (sign * (e[:, None] + e[None, :]))
    ts, xs = np.broadcast_arrays(np.atleast_1d(np.asarray(ts, dtype=float)),
                                 np.atleast_1d(np.asarray(xs, dtype=float)))
    rho = np.empty(ts.shape)
    j = np.empty(ts.shape)
    z = _born_norm(state) if normalize else 1.0
    for i, (t, x) in enumerate(zip(ts, xs)):
        ph = amp0 * np.exp(1j * (g.p * x - sign * e * (t - state.t)))
        rho[i] = (np.abs(np.sum(ph)) ** 2) * g.dp ** 2 / TWO_PI / z
        j[i] = np.real(ph @ u @ np.conj(ph)) * g.dp ** 2 / TWO_PI / z
    return rho, j


def schrodinger_current(state: MomentumState) -> np.ndarray:
    """(1/m) Im(conj(phi) d(phi)/dx) on the lattice, the non-relativistic
    reference current, via an exact band-doubled spectral derivative."""
    g = state.grid
    gp = g.padded()
    amp = g.embed_spectrum(state.a + state.b)
    phi = fft_inverse(amp, gp)
    dphi = fft_inverse(1j * gp.p * amp, gp)
    return (np.imag(np.conj(phi) * dphi) / MASS)[::2]


def kg_zero_component(state: MomentumState) -> np.ndarray:
    """Zero component i(phi* dphi/dt - phi dphi*/dt) of the classic
    second-order current, normalized for plotting.

    Positive-definite samples are scaled to unit integral; otherwise
    (the indefinite cases this quantity is notorious for) scaled by the
    integral of |j0| instead.
    """
    g = state.grid
    phi = fft_inverse(state.a + state.b, g)
    dphi = fft_inverse(-1j * g.energies * (state.a - state.b), g)
    j0 = -2.0 * np.imag(np.conj(phi) * dphi)
    total = np.sum(j0) * g.dx
    if np.min(j0) >= -1e-12 * np.max(np.abs(j0)) and total > 0:
        return j0 / total
    return j0 / (np.sum(np.abs(j0)) * g.dx)


def chi(state: MomentumState) -> float:
    """L1 distance between the transported and Born densities, each
    renormalized to unit integral; ranges over [0, 2]."""
    g = state.grid
    rho = compute_current(state).rho
    rho = rho / (np.sum(rho) * g.dx)
    rho_b = np.abs(fft_inverse(state.a + state.b, g)) ** 2
    rho_b = rho_b / (np.sum(rho_b) * g.dx)
    return float(np.sum(np.abs(rho - rho_b)) * g.dx)


def _rho_padded(state: MomentumState, t: float) -> np.ndarray:
    a, b = _amps_at(state, t)
    shifted = MomentumState(state.grid, a, b, t)
    _, (s1, s2, s3, s4) = _four_sums(shifted, pad=True)
    return sum(np.abs(s) ** 2 for s in (s1, s2, s3, s4))


def continuity_residual(state: MomentumState, dt: float) -> ContinuityResidual:
    """Max-norm defect of d(rho)/dt + d(j)/dx with a centered difference.

    rho at t ± dt and the spectral derivative of j(t) are evaluated on a
    band-doubled lattice, so no aliasing enters and the residual decays
    as O(dt^2).  The dt/2 residual and their ratio come along for free;
    ratios far from 4 set the flagged bit.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    g = state.grid
    gp = g.padded()
    _, (s1, s2, s3, s4) = _four_sums(state, pad=True)
    j = (np.abs(s1) ** 2 + np.abs(s2) ** 2 - np.abs(s3) ** 2 - np.abs(s4) ** 2)
    djdx = np.real(fft_inverse(1j * gp.p * fft_forward(j + 0j, gp), gp))

    def resid(h):
        drho = (_rho_padded(state, state.t + h) - _rho_padded(state, state.t - h)) / (2.0 * h)
        return float(np.max(np.abs(drho + djdx)))

    r1 = resid(dt)
    r2 = resid(dt / 2.0)
    ratio = r1 / r2 if r2 > 0 else np.inf
    flagged = not (2.5 < ratio < 6.0)
    return ContinuityResidual(r1, r2, dt, ratio, flagged)
