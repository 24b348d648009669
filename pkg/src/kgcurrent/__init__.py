"""Positive, conserved, causal probability density and current for free
spinless relativistic particles in one space dimension.

Natural units throughout: m = c = hbar = 1, so the Compton wavelength is
the unit of length and momenta are in units of m*c.
"""

__version__ = "0.1.0"

from .grid import ComplexField, SpectralGrid, eval_offgrid, forward_transform, inverse_transform
from .state import (InitialData, MomentumState, gaussian_state, load_state,
                    random_state, reconstruct_phi, save_state, split_frequency)
from .currents import (BranchMultipliers, CurrentField, apply_D, born_density_current,
                       branch_multipliers, chi, compute_current, continuity_residual,
                       current_at, kg_zero_component, schrodinger_current)
from .dynamics import TofResult, converge_time_of_flight, evolve, nonrel_tof_check, time_of_flight
from .covariance import (BoostParams, alpha_lightcone, alpha_invariant_mass,
                         boost_state, born_covariance_residual, covariance_residual)
from .oracle import (DeltaSeqResult, PlaneWaveSet, delta_sequence, oracle_current,
                     oracle_vs_spectral, state_from_plane_waves)
