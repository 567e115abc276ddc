"""Tunneling times through piecewise-constant barrier profiles."""
from . import backend
from .asymptotics import hartman_phase_time, opaque_amplitudes, resonance_condition
from .errors import (
    DegenerateKinematicsError,
    EnergyDomainError,
    InsufficientTransmissionError,
    MappingError,
    NearResonanceError,
    ProfileError,
    SchemeError,
    StepTooLargeError,
    TunnelTimeError,
)
from .phasetime import PhaseTimeResult, phase_time, phase_time_curve
from .profile import NATURAL, PhysicalConstants, PotentialProfile, load_profile
from .resonance import ResonanceFit, resonance_scan
from .scattering import ScatteringSolution, solve_matching_direct, solve_scattering
from .transfer import TransferMatrix, interface_matrix, propagation_matrix

__version__ = "0.1.0"

__all__ = [
    "NATURAL",
    "DegenerateKinematicsError",
    "EnergyDomainError",
    "InsufficientTransmissionError",
    "MappingError",
    "NearResonanceError",
    "PhaseTimeResult",
    "PhysicalConstants",
    "PotentialProfile",
    "ProfileError",
    "ResonanceFit",
    "ScatteringSolution",
    "SchemeError",
    "StepTooLargeError",
    "TransferMatrix",
    "TunnelTimeError",
    "backend",
    "hartman_phase_time",
    "interface_matrix",
    "load_profile",
    "opaque_amplitudes",
    "phase_time",
    "phase_time_curve",
    "propagation_matrix",
    "resonance_condition",
    "resonance_scan",
    "solve_matching_direct",
    "solve_scattering",
]
