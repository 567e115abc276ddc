"""Sweeps, the acceptance report, the waveguide mapping and the command line."""
from .emit import emit
from .sweep import SweepSpec, load_sweep, run_sweep
from .waveguide import WaveguideParams, waveguide_map

__all__ = ["SweepSpec", "WaveguideParams", "emit", "load_sweep", "run_sweep", "waveguide_map"]
