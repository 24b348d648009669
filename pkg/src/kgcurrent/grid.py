"""Uniform symmetric momentum lattice and unitary Fourier transforms.

Conventions (natural units, lambda_C = 1):

    momentum nodes   p_j = -p_max + j*dp,  j = 0..n-1,  dp = 2*p_max/n
    position nodes   x_k = -L/2 + k*dx,    L = 2*pi/dp, dx = L/n
    forward          f~(p) = (1/sqrt(2*pi)) * sum_k f(x_k) e^{-i p x_k} dx
    inverse          f(x)  = (1/sqrt(2*pi)) * sum_j f~(p_j) e^{+i p x} dp

With dp*dx*n = 2*pi the pair is unitary: sum |f|^2 dx = sum |f~|^2 dp
exactly (discrete Parseval).  Off-grid evaluation uses the same inverse
kernel at arbitrary x and therefore agrees with the lattice inverse at
the lattice points and is L-periodic in x.

Both transforms reduce to a single FFT after conjugating by the
alternating sign vector (-1)^j; this is exact for n divisible by 4,
which the constructor guarantees (n a power of two, n >= 16).
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import GridMismatchError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class SpectralGrid:
    """Symmetric momentum lattice with n nodes and cutoff p_max.

    Parameters
    ----------
    n : int
        Number of nodes, a power of two, at least 16.
    p_max : float
        Momentum cutoff; nodes run from -p_max to p_max - dp.
    """

    n: int
    p_max: float

    def __post_init__(self):
        if self.n < 16 or (self.n & (self.n - 1)) != 0:
            raise ValueError(f"n must be a power of two >= 16, got {self.n}")
        if not (self.p_max > 0.0):
            raise ValueError(f"p_max must be positive, got {self.p_max}")

    @property
    def dp(self) -> float:
        return 2.0 * self.p_max / self.n

    @property
    def dx(self) -> float:
        return np.pi / self.p_max

    @property
    def length(self) -> float:
        """Spatial period L = 2*pi/dp."""
        return TWO_PI / self.dp

    @cached_property
    def p(self) -> np.ndarray:
        return -self.p_max + self.dp * np.arange(self.n)

    @cached_property
    def x(self) -> np.ndarray:
        return -0.5 * self.length + self.dx * np.arange(self.n)

    @cached_property
    def energies(self) -> np.ndarray:
        """On-shell energies E(p_j) = sqrt(p_j^2 + 1)."""
        return np.hypot(1.0, self.p)

    @cached_property
    def _signs(self) -> np.ndarray:
        s = np.ones(self.n)
        s[1::2] = -1.0
        return s

    def padded(self) -> "SpectralGrid":
        """Grid with doubled band [-2*p_max, 2*p_max), same dp and L.

        Products of two band-limited lattice fields are exactly
        representable on it, which the spectral-derivative paths rely on.
        """
        return SpectralGrid(2 * self.n, 2.0 * self.p_max)

    def embed_spectrum(self, amps: np.ndarray) -> np.ndarray:
        """Zero-pad momentum amplitudes from this grid into padded()."""
        out = np.zeros(2 * self.n, dtype=complex)
        out[self.n // 2: self.n // 2 + self.n] = amps
        return out


@dataclass(frozen=True)
class ComplexField:
    """Complex samples tagged with the domain they live in.

    values : complex array of length grid.n
    domain : "position" or "momentum"
    """

    values: np.ndarray
    domain: str

    def __post_init__(self):
        if self.domain not in ("position", "momentum"):
            raise ValueError(f"unknown domain {self.domain!r}")
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))


def _check(field: ComplexField, grid: SpectralGrid, domain: str):
    if field.domain != domain:
        raise GridMismatchError(f"expected a {domain} field, got {field.domain}")
    if field.values.shape != (grid.n,):
        raise GridMismatchError(
            f"field length {field.values.shape} does not match grid n={grid.n}")


def fft_forward(values: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Position samples -> momentum amplitudes (array-level fast path)."""
    s = grid._signs
    return (grid.dx / np.sqrt(TWO_PI)) * (s * np.fft.fft(s * values))


def fft_inverse(values: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Momentum amplitudes -> position samples (array-level fast path)."""
    s = grid._signs
    return (grid.dp * grid.n / np.sqrt(TWO_PI)) * (s * np.fft.ifft(s * values))


def forward_transform(f: ComplexField, grid: SpectralGrid) -> ComplexField:
    """Unitary transform of a position field to the momentum domain."""
    _check(f, grid, "position")
    return ComplexField(fft_forward(f.values, grid), "momentum")


def inverse_transform(f: ComplexField, grid: SpectralGrid) -> ComplexField:
    """Unitary transform of a momentum field to the position domain."""
    _check(f, grid, "momentum")
    return ComplexField(fft_inverse(f.values, grid), "position")


def eval_offgrid(amps: ComplexField, grid: SpectralGrid, x) -> np.ndarray:
    """Evaluate sum_j amps_j e^{i p_j x} dp / sqrt(2*pi) at arbitrary x.

    Direct summation, O(n) per evaluation point; periodic in x with
    period grid.length.  Matches inverse_transform at lattice points.
    """
    _check(amps, grid, "momentum")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(x.shape, dtype=complex)
    # chunk so the (points x n) phase matrix stays under ~64 MB
    step = max(1, int(4.0e6 / grid.n))
    for i in range(0, x.size, step):
        block = x[i:i + step, None] * grid.p[None, :]
        out[i:i + step] = np.exp(1j * block) @ amps.values
    return out * (grid.dp / np.sqrt(TWO_PI))
