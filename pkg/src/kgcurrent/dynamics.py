"""Free evolution and the time-of-flight momentum readout.

Evolution is diagonal in momentum space: a(p) picks up e^{-i E dt} and
b(p) picks up e^{+i E dt}.  The time-of-flight distribution samples the
transported density along ballistic rays,

    g(p) = (m^2 / E^3) * t * rho(p t / E, t),

which tends to the momentum distribution as t grows.  The ray points
x = p t / E leave the periodic box almost immediately, so rho is
evaluated by direct off-grid momentum sums.  Those sums are L-periodic:
they describe a lattice of packet images L apart, and the readout is
faithful only while every image other than the central one stays
outside the sampled velocity window.  time_of_flight computes the
resulting safe horizon

    t_safe = (L - margin) / (v_band + v_support)

and flags requests beyond it; the convergence driver doubles t up to
min(t_safe, budget).
"""

from dataclasses import dataclass, field

import numpy as np

from ._kin import MASS, energy, energy_minus, energy_plus
from .currents import compute_current
from .errors import ConvergenceError, UnsupportedInputError
from .grid import SpectralGrid
from .state import MomentumState, _amps_at

TWO_PI = 2.0 * np.pi
TAIL_MARGIN = 40.0          # e^{-40} leakage through the light-cone tails
SUPPORT_FLOOR = 1e-26       # |a|^2 below this counts as unpopulated


def evolve(state: MomentumState, dt: float) -> MomentumState:
    """Advance a state by dt (may be negative); returns a new state."""
    a, b = _amps_at(state, state.t + dt)
    return MomentumState(state.grid, a, b, state.t + dt, state.mass)


@dataclass(frozen=True)
class TofResult:
    """Ballistic momentum readout with its convergence diagnostic."""

    p_nodes: np.ndarray
    g: np.ndarray
    born_g: np.ndarray
    t_final: float
    convergence_gap: float
    meta: dict = field(default_factory=dict)


def _require_single_branch(state: MomentumState):
    if np.any(state.b):
        raise UnsupportedInputError(
            "time-of-flight readout is defined for positive-frequency states; "
            "the negative-frequency branch is populated")


def _band(grid: SpectralGrid) -> np.ndarray:
    """Output nodes: the inner half of the momentum lattice."""
    return np.flatnonzero(np.abs(grid.p) <= 0.5 * grid.p_max)


def t_safe_horizon(state: MomentumState) -> float:
    """Largest t at which the periodic images cannot leak into the readout."""
    g = state.grid
    sel = _band(g)
    v_band = float(np.max(np.abs(g.p[sel]) / g.energies[sel]))
    w = np.abs(state.a) ** 2
    live = np.flatnonzero(w > SUPPORT_FLOOR * np.max(w))
    p_sup = float(np.max(np.abs(g.p[live])))
    v_sup = p_sup / energy(p_sup)
    return (g.length - TAIL_MARGIN) / max(v_band + v_sup, 1e-12)


def _rho_ballistic(state: MomentumState, t: float, sel: np.ndarray) -> np.ndarray:
    """rho(p t / E, t) at the selected nodes by direct momentum sums."""
    g = state.grid
    p_out = g.p[sel]
    xs = p_out * t / g.energies[sel]
    a_t, _ = _amps_at(state, t)
    wp = np.sqrt(energy_plus(1, g.p) / (2.0 * MASS))
    wm = np.sqrt(energy_minus(1, g.p) / (2.0 * MASS))
    va, vb = wp * a_t, wm * a_t
    rho = np.empty(xs.size)
    step = max(1, int(4.0e6 / g.n))
    for i in range(0, xs.size, step):
        phases = np.exp(1j * xs[i:i + step, None] * g.p[None, :])
        rho[i:i + step] = np.abs(phases @ va) ** 2 + np.abs(phases @ vb) ** 2
    return rho * g.dp ** 2 / TWO_PI


def _g_at(state: MomentumState, t: float, sel: np.ndarray) -> np.ndarray:
    g = state.grid
    e = g.energies[sel]
    return (MASS ** 2 / e ** 3) * t * _rho_ballistic(state, t, sel)


def time_of_flight(state: MomentumState, t: float) -> TofResult:
    """Readout at a single time t, with the gap against t/2 as diagnostic.

    The state must be positive-frequency, normalized, and centered near
    the origin (|<x>| <= 1).  born_g is the normalized |phi~|^2 on the
    same nodes.
    """
    _require_single_branch(state)
    g = state.grid
    centroid = float(np.sum(g.x * compute_current(state).rho) * g.dx)
    if abs(centroid) > 1.0:
        raise UnsupportedInputError(
            f"packet centroid <x> = {centroid:.3g} is not near the origin")
    sel = _band(g)
    horizon = t_safe_horizon(state)
    g_t = _g_at(state, t, sel)
    g_half = _g_at(state, t / 2.0, sel)
    gap = float(np.sum(np.abs(g_t - g_half)) * g.dp)
    w = np.abs(state.a) ** 2
    born = w[sel] / (np.sum(w) * g.dp)
    meta = {"t_safe": horizon}
    if t > horizon:
        meta["beyond_horizon"] = True
    return TofResult(g.p[sel], g_t, born, float(t), gap, meta)


def converge_time_of_flight(state: MomentumState, tol: float = 0.01,
                            t_budget: float = 1e8) -> TofResult:
    """Double t from an eighth of the horizon until the L1 gap between
    consecutive readouts drops below tol, or the budget/horizon is hit.

    The returned result carries meta["converged"]; a False value is the
    caller's cue to exit nonzero while still using the partial output.
    """
    _require_single_branch(state)
    g = state.grid
    sel = _band(g)
    t_cap = min(t_safe_horizon(state), float(t_budget))
    if t_cap <= 0:
        raise ConvergenceError("no admissible readout time on this grid")
    schedule = [t_cap / 8.0, t_cap / 4.0, t_cap / 2.0, t_cap]
    w = np.abs(state.a) ** 2
    born = w[sel] / (np.sum(w) * g.dp)
    prev = None
    gap = np.inf
    for t in schedule:
        cur = _g_at(state, t, sel)
        if prev is not None:
            gap = float(np.sum(np.abs(cur - prev)) * g.dp)
            if gap < tol:
                return TofResult(g.p[sel], cur, born, float(t), gap,
                                 {"t_safe": t_cap, "converged": True})
        prev = cur
    return TofResult(g.p[sel], prev, born, float(schedule[-1]), gap,
                     {"t_safe": t_cap, "converged": bool(gap < tol)})


def nonrel_tof_check(state: MomentumState, t: float) -> float:
    """L1 distance between the readout and its non-relativistic estimator
    (1/m) * t * |phi(p t / m, t)|^2; shrinks with the momentum spread."""
    _require_single_branch(state)
    g = state.grid
    sel = _band(g)
    res = _g_at(state, t, sel)
    p_out = g.p[sel]
    xs = p_out * t / MASS
    a_t, _ = _amps_at(state, t)
    phi = np.empty(xs.size, dtype=complex)
    step = max(1, int(4.0e6 / g.n))
    for i in range(0, xs.size, step):
        phases = np.exp(1j * xs[i:i + step, None] * g.p[None, :])
        phi[i:i + step] = phases @ a_t
    g24 = (t / MASS) * np.abs(phi) ** 2 * g.dp ** 2 / TWO_PI
    return float(np.sum(np.abs(res - g24)) * g.dp)
