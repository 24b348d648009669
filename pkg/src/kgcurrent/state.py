"""Two-branch momentum-space states of the free wave equation
(d^2/dt^2 - d^2/dx^2 + 1) phi = 0 in natural units.

A state stores amplitudes a(p), b(p) against the mode convention

    phi(x, t) = (1/sqrt(2*pi)) * integral [ a(p) e^{i(p x - E t)}
                                          + b(p) e^{i(p x + E t)} ] dp

with E = E(p) = sqrt(p^2 + 1).  The a-branch carries positive frequency,
the b-branch negative frequency.  Amplitudes are stored at the state's
own clock time t: evolving by dt multiplies a by e^{-i E dt} and b by
e^{+i E dt} and advances the clock.

The norm that the rest of the package conserves and normalizes to is the
energy-weighted quadrature

    sum_j E(p_j) (|a_j|^2 + |b_j|^2) dp  =  1,

which makes the transported density integrate to exactly 1.
"""

import json
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import erfc

from .errors import GridMismatchError, ResolutionError
from .grid import ComplexField, SpectralGrid, fft_forward, fft_inverse

TAIL_TOL = 1e-10


@dataclass(frozen=True)
class MomentumState:
    """Immutable two-branch spectral state on a SpectralGrid."""

    grid: SpectralGrid
    a: np.ndarray
    b: np.ndarray
    t: float = 0.0
    mass: float = 1.0

    def __post_init__(self):
        a = np.array(self.a, dtype=complex)
        b = np.array(self.b, dtype=complex)
        if a.shape != (self.grid.n,) or b.shape != (self.grid.n,):
            raise GridMismatchError("amplitude arrays must match the grid length")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "t", float(self.t))

    @property
    def norm(self) -> float:
        """Energy-weighted norm sum E (|a|^2 + |b|^2) dp."""
        w = self.grid.energies
        return float(np.sum(w * (np.abs(self.a) ** 2 + np.abs(self.b) ** 2)) * self.grid.dp)

    def normalized(self) -> "MomentumState":
        n = self.norm
        if n == 0.0:
            raise ValueError("cannot normalize the zero state")
        s = 1.0 / np.sqrt(n)
        return replace(self, a=self.a * s, b=self.b * s)


@dataclass(frozen=True)
class InitialData:
    """Cauchy data (phi, dphi/dt) sampled on the position lattice."""

    phi: np.ndarray
    phi_dot: np.ndarray


def gaussian_state(grid: SpectralGrid, pbar: float = 0.0, sigma_p: float = 1.0,
                   x0: float = 0.0) -> MomentumState:
    """Normalized positive-frequency Gaussian packet.

    a(p) is proportional to exp(-(p - pbar)^2 / sigma_p^2) * exp(-i p x0),
    b = 0.  The phase factor centers the packet at x = x0.

    Raises
    ------
    ValueError
        If sigma_p <= 0.
    ResolutionError
        If more than 1e-10 of the packet's weight falls beyond the
        momentum cutoff, or the position envelope does not fit the box.
    """
    if sigma_p <= 0.0:
        raise ValueError(f"sigma_p must be positive, got {sigma_p}")
    # weight |a|^2 ~ exp(-2 (p-pbar)^2 / sigma^2); fraction beyond the cutoff
    sq2 = np.sqrt(2.0)
    p_tail = 0.5 * (erfc(sq2 * (grid.p_max - pbar) / sigma_p)
                    + erfc(sq2 * (grid.p_max + pbar) / sigma_p))
    if p_tail * np.hypot(1.0, grid.p_max) > TAIL_TOL:
        raise ResolutionError(
            f"momentum tail beyond p_max={grid.p_max} holds ~{p_tail:.2e} of the norm; "
            f"increase p_max (packet needs p_max >~ {abs(pbar) + 6 * sigma_p:.3g})")
    # |phi(x)|^2 ~ exp(-sigma^2 (x-x0)^2 / 2); fraction outside the box
    x_tail = erfc((0.5 * grid.length - abs(x0)) * sigma_p / sq2)
    if x_tail > TAIL_TOL:
        raise ResolutionError(
            f"position envelope does not fit the box L={grid.length:.4g}; "
            "decrease dp (increase n) or move x0 toward the center")
    a = np.exp(-((grid.p - pbar) / sigma_p) ** 2) * np.exp(-1j * grid.p * x0)
    state = MomentumState(grid, a, np.zeros(grid.n, dtype=complex))
    return state.normalized()


def random_state(grid: SpectralGrid, rng: np.random.Generator,
                 two_branch: bool = True) -> MomentumState:
    """Normalized state with smooth random amplitudes, for ensemble tests.

    A fixed Gaussian envelope keeps the spectrum comfortably inside the
    band so every draw is well resolved.
    """
    env = np.exp(-(grid.p / (grid.p_max / 3.0)) ** 2)
    def draw():
        return (rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n)) * env
    a = draw()
    b = draw() if two_branch else np.zeros(grid.n, dtype=complex)
    return MomentumState(grid, a, b).normalized()


def split_frequency(init: InitialData, grid: SpectralGrid) -> MomentumState:
    """Split Cauchy data at t = 0 into branch amplitudes.

    With phi~ and phi_dot~ the momentum transforms of the data,

        a(p) = (phi~ + i phi_dot~ / E) / 2
        b(p) = (phi~ - i phi_dot~ / E) / 2

    which inverts the mode convention: a + b = phi~ and
    -i E (a - b) = phi_dot~.
    """
    phi_t = fft_forward(np.asarray(init.phi, dtype=complex), grid)
    dot_t = fft_forward(np.asarray(init.phi_dot, dtype=complex), grid)
    ie = 1j * dot_t / grid.energies
    return MomentumState(grid, 0.5 * (phi_t + ie), 0.5 * (phi_t - ie))


def _amps_at(state: MomentumState, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Branch amplitudes advanced from the state's clock to absolute time t."""
    dt = t - state.t
    if dt == 0.0:
        return state.a, state.b
    ph = np.exp(-1j * state.grid.energies * dt)
    return state.a * ph, state.b * np.conj(ph)


def reconstruct_phi(state: MomentumState, t: float | None = None) -> ComplexField:
    """Position-space amplitude phi(x, t) on the lattice.

    t defaults to the state's own time.
    """
    if t is None:
        t = state.t
    a, b = _amps_at(state, t)
    return ComplexField(fft_inverse(a + b, state.grid), "position")


def reconstruct_phi_dot(state: MomentumState, t: float | None = None) -> ComplexField:
    """Position-space time derivative d(phi)/dt on the lattice."""
    if t is None:
        t = state.t
    a, b = _amps_at(state, t)
    e = state.grid.energies
    return ComplexField(fft_inverse(-1j * e * a + 1j * e * b, state.grid), "position")


def save_state(state: MomentumState, path) -> None:
    """Write a state to JSON: {grid: {n, p_max}, t, a: [[re, im], ...], b: ...}.

    Floats are serialized with shortest-exact repr, so load_state
    reproduces every double bit for bit.
    """
    doc = {
        "grid": {"n": state.grid.n, "p_max": state.grid.p_max},
        "t": state.t,
        "a": [[float(z.real), float(z.imag)] for z in state.a],
        "b": [[float(z.real), float(z.imag)] for z in state.b],
    }
    with open(path, "w", newline="\n") as fh:
        json.dump(doc, fh)
        fh.write("\n")


def load_state(path) -> MomentumState:
    """Inverse of save_state."""
    with open(path) as fh:
        doc = json.load(fh)
    grid = SpectralGrid(int(doc["grid"]["n"]), float(doc["grid"]["p_max"]))
    def unpack(rows):
        arr = np.asarray(rows, dtype=float)
        return arr[:, 0] + 1j * arr[:, 1]
    return MomentumState(grid, unpack(doc["a"]), unpack(doc["b"]), t=float(doc["t"]))
