"""Secrecy-rate-maximizing beamforming for AN-aided directional modulation."""

__version__ = "0.1.0"

from .array import ArrayConfig, Scenario, channel_gram, phase_shift, steering_vector
from .beamformers import (
    BeamformerSolution,
    ConvergenceTrace,
    solve_leakage,
    solve_max_sr,
    solve_nsp,
)
from .metrics import AnProjection, PowerProfile, rate_at, secrecy_rate
from .solvers import NumericalError, gpi_solve, largest_generalized_eigvec

__all__ = [
    "ArrayConfig",
    "Scenario",
    "phase_shift",
    "steering_vector",
    "channel_gram",
    "PowerProfile",
    "AnProjection",
    "rate_at",
    "secrecy_rate",
    "NumericalError",
    "largest_generalized_eigvec",
    "gpi_solve",
    "BeamformerSolution",
    "ConvergenceTrace",
    "solve_max_sr",
    "solve_leakage",
    "solve_nsp",
]
