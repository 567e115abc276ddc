"""Packet-through-profile experiments and a stationary-superposition oracle."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..profile import NATURAL, PhysicalConstants, PotentialProfile
from ..scattering import solve_scattering
from .arrival import ArrivalRecord, measure_arrival, peak_time
from .grid import GridSpec, init_gaussian
from .propagate import Propagation, propagate

#: k * dx and (E dt / hbar) targets used for default grids
K_DX = 0.08
E_DT = 0.025


@dataclass(frozen=True)
class ExperimentSetup:
    grid: GridSpec
    x0: float
    k0: float
    sigma: float
    detector_x: float
    n_steps: int


def default_setup(profile: PotentialProfile, constants: PhysicalConstants, energy: float,
                  sigma_k: float = 50.0, detector_offset: float | None = None,
                  dx: float | None = None, dt: float | None = None) -> ExperimentSetup:
    """Grid and packet placement: start 6 sigma before the profile, detector just past it."""
    hb, m = constants.hbar, constants.mass
    k0 = math.sqrt(2 * m * energy) / hb
    sigma = sigma_k / k0
    vmax = profile.max_height if profile.segments else 0.0
    kmax = max(k0, math.sqrt(2 * m * abs(vmax - energy)) / hb)
    dx = dx or K_DX / kmax
    dt = dt or E_DT * hb / max(energy, vmax)
    D = profile.extent
    det = D + (detector_offset if detector_offset is not None else 8.0 / k0)
    x0 = -6 * sigma
    v = hb * k0 / m
    t_final = (det - x0) / v + 5 * sigma / v
    grid = GridSpec.with_spacing(-14 * sigma, D + 12 * sigma, dx, dt)
    return ExperimentSetup(grid, x0, k0, sigma, det, int(math.ceil(t_final / dt)))


def arrival_experiment(profile: PotentialProfile, constants: PhysicalConstants = NATURAL, energy: float = 0.5,
                       sigma_k: float = 50.0, setup: ExperimentSetup | None = None,
                       absorbing: bool = True, **propagate_kw) -> tuple[ArrivalRecord, Propagation, ExperimentSetup]:
    """Send a Gaussian through ``profile`` and time its transmitted part at the detector."""
    setup = setup or default_setup(profile, constants, energy, sigma_k)
    state = init_gaussian(setup.grid, setup.x0, setup.k0, setup.sigma, profile=profile)
    prop = propagate(state, profile, constants, setup.n_steps, detectors=[setup.detector_x],
                     absorbing=absorbing, **propagate_kw)
    return measure_arrival(prop.trace, initial_norm=state.norm), prop, setup


def transmitted_wave(profile: PotentialProfile, constants: PhysicalConstants, x0: float, k0: float,
                     sigma: float, x: float, times: np.ndarray, n_k: int = 4001, span: float = 9.0) -> np.ndarray:
    """Exact transmitted psi(x, t) for x beyond the profile, by superposing stationary states.

    The packet exp(-(x-x0)^2/(2 sigma^2) + i k0 x) has spectrum
    exp(-(k-k0)^2 sigma^2 / 2 - i (k - k0) x0); each component picks up t(k).
    """
    hb, m = constants.hbar, constants.mass
    k = np.linspace(max(k0 - span / sigma, 1e-6 * k0), k0 + span / sigma, n_k)
    t = np.array([solve_scattering(profile, constants, hb**2 * kk**2 / (2 * m)).transmission_amp for kk in k])
    amp = np.exp(-((k - k0) ** 2) * sigma**2 / 2 - 1j * (k - k0) * x0) * t
    phase = np.exp(1j * (np.outer(np.atleast_1d(times), -hb * k**2 / (2 * m)) + k * x))
    dk = k[1] - k[0]
    # unit-norm packet: (pi sigma^2)^(-1/4) in x, sigma / sqrt(2 pi) from the Fourier pair
    norm = sigma / math.sqrt(2 * math.pi) / (math.pi * sigma**2) ** 0.25
    return (phase @ amp) * dk * norm


def superposition_peak_time(profile, constants, x0, k0, sigma, x, t_guess, half_window, n_t=801) -> float:
    """Peak time of |psi_T(x, t)|^2 from :func:`transmitted_wave`, refined on a fine time grid."""
    times = np.linspace(t_guess - half_window, t_guess + half_window, n_t)
    rho = np.abs(transmitted_wave(profile, constants, x0, k0, sigma, x, times)) ** 2
    return peak_time(times, rho)


def filter_shift(profile: PotentialProfile, constants: PhysicalConstants, k0: float, sigma: float) -> float:
    """Shift of the transmitted spectrum centre, (d ln|t|/dk) / sigma^2, for a Gaussian packet."""
    hb, m = constants.hbar, constants.mass
    h = 1e-4 * k0
    lt = [math.log(abs(solve_scattering(profile, constants, hb**2 * kk**2 / (2 * m)).transmission_amp))
          for kk in (k0 - h, k0 + h)]
    return (lt[1] - lt[0]) / (2 * h) / sigma**2
