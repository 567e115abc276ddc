"""Time-domain propagation of Gaussian packets through barrier profiles."""
from .arrival import ArrivalRecord, advancement, backward_tail_position, measure_arrival
from .experiment import ExperimentSetup, arrival_experiment, default_setup, filter_shift, transmitted_wave
from .grid import GridSpec, WavepacketState, gaussian_width_law, init_gaussian
from .propagate import CrankNicolson, DetectorTrace, Propagation, evolve, propagate, write_frame

__all__ = [
    "ArrivalRecord",
    "CrankNicolson",
    "DetectorTrace",
    "ExperimentSetup",
    "GridSpec",
    "Propagation",
    "WavepacketState",
    "advancement",
    "arrival_experiment",
    "backward_tail_position",
    "default_setup",
    "evolve",
    "filter_shift",
    "gaussian_width_law",
    "init_gaussian",
    "measure_arrival",
    "propagate",
    "transmitted_wave",
    "write_frame",
]
