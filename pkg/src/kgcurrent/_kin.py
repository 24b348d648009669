"""Stable on-shell kinematics in natural units (m = c = hbar = 1).

Every routine here is plain float64 algebra on the mass shell
E(p) = sqrt(p^2 + 1).  The light-cone pair (E + |p|, E - |p|) is computed
without cancellation: the small member is obtained from the exact on-shell
product (E + |p|)(E - |p|) = m^2, so e.g. E - p at p = 1e3 keeps full
relative precision instead of losing ~9 digits to subtraction.
"""

import numpy as np

MASS = 1.0


def energy(p):
    """On-shell energy E(p) = sqrt(p^2 + m^2)."""
    return np.hypot(MASS, p)


def lightcone_pair(p):
    """Return (E + |p|, E - |p|) with the small member computed stably.

    E - |p| is m^2 / (E + |p|), exact on shell and free of cancellation.
    """
    big = energy(p) + np.abs(p)
    small = MASS * MASS / big
    return big, small


def lightcone(s, p):
    """Signed light-cone component s*E(p) + p for frequency sign s = +-1.

    For s = +1 this is E + p >= 0; for s = -1 it is -(E - p) <= 0.
    Both are routed through the stable pair so that the near-zero member
    (reached as |p| grows) keeps full relative precision.
    """
    big, small = lightcone_pair(p)
    pos = np.where(p >= 0, big, small)      # E + p
    neg = np.where(p >= 0, small, big)      # E - p
    return np.where(s > 0, pos, -neg)


def energy_plus(s, p):
    """E(p) + s*p, always >= 0, computed stably."""
    big, small = lightcone_pair(p)
    return np.where(s * p >= 0, big, small)


def energy_minus(s, p):
    """E(p) - s*p, always >= 0, computed stably."""
    big, small = lightcone_pair(p)
    return np.where(s * p >= 0, small, big)
