"""Phase time hbar * d/dE arg[t(E) e^{ikD}] for arbitrary profiles."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import backend
from .asymptotics import resonance_condition
from .errors import DegenerateKinematicsError, EnergyDomainError, StepTooLargeError
from .profile import NATURAL, PhysicalConstants, PotentialProfile

#: "far from resonances": |cavity denominator| must exceed this fraction of 2 chi k.
FAR_FROM_RESONANCE = 0.1
#: initial energy step as a fraction of E
REL_STEP = 1e-4
#: adjacent stencil phases further apart than this are ambiguous to unwrap
MAX_PHASE_JUMP = 0.5 * math.pi

_STENCIL = np.array([-2.0, -1.0, 1.0, 2.0])
_WEIGHTS = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0


@dataclass(frozen=True)
class PhaseTimeResult:
    energy: float
    tau: float
    reference_length: float
    step_used: float
    resonance_flag: bool
    error_estimate: float = 0.0

    def to_record(self) -> dict:
        return asdict(self)


def edge_phase(profile: PotentialProfile, constants: PhysicalConstants, energies) -> np.ndarray:
    """arg[t(E) e^{ikD}] (wrapped) for an array of energies."""
    inc, _, _ = backend.kernels.transfer_batch(
        profile.widths, profile.heights, np.ascontiguousarray(energies, dtype=float),
        constants.hbar, constants.mass,
    )
    return -np.angle(inc)


def _unwrapped(phases: np.ndarray, center: float) -> np.ndarray:
    """Nearest-branch unwrapping of stencil phases relative to the central phase."""
    rel = np.angle(np.exp(1j * (phases - center)))
    ordered = np.concatenate([rel[:2], [0.0], rel[2:]])
    jumps = np.abs(np.diff(ordered))
    if np.any(jumps > MAX_PHASE_JUMP):
        raise StepTooLargeError(f"stencil phase jump {jumps.max():.3f} rad exceeds {MAX_PHASE_JUMP:.3f}")
    return rel


def near_resonance(profile, constants, energies, guard: float = FAR_FROM_RESONANCE) -> bool:
    """True if any cavity denominator is within ``guard`` (or changes sign) across ``energies``."""
    signed = []
    for e in energies:
        vals = cavity_guard_values(profile, constants, e)
        if any(abs(v) < guard for v in vals):
            return True
        signed.append(vals)
    signed = np.array(signed)
    return bool(signed.size and np.any(np.diff(np.sign(signed), axis=0) != 0))


def cavity_guard_values(profile: PotentialProfile, constants: PhysicalConstants, energy: float) -> list[float]:
    """Signed cavity denominators D / (2 k sqrt(chi_l chi_r)) for every gap between barriers above E."""
    k = math.sqrt(2 * constants.mass * energy) / constants.hbar
    vals = []
    for left, gap, right in profile.cavity_runs():
        vl, vr = profile.segments[left][1], profile.segments[right][1]
        if vl <= energy or vr <= energy:
            continue
        cl = math.sqrt(2 * constants.mass * (vl - energy)) / constants.hbar
        cr = math.sqrt(2 * constants.mass * (vr - energy)) / constants.hbar
        vals.append(resonance_condition(k, cl, gap, cr) / (2 * k * math.sqrt(cl * cr)))
    return vals


def _five_point(profile, constants, energy, h, center_phase):
    energies = energy + h * _STENCIL
    rel = _unwrapped(edge_phase(profile, constants, energies), center_phase)
    return float(_WEIGHTS @ rel) / h


def phase_time(
    profile: PotentialProfile,
    constants: PhysicalConstants = NATURAL,
    energy: float = 0.5,
    rel_step: float = REL_STEP,
    guard: float = FAR_FROM_RESONANCE,
) -> PhaseTimeResult:
    """Numeric phase time with the reference plane at the far edge of the profile.

    Five-point central differences at steps h, h/2, h/4 combined by two
    Richardson levels.  ``error_estimate`` is the last Richardson correction.
    """
    if not energy > 0:
        raise EnergyDomainError(f"energy must be positive, got {energy!r}")
    h = rel_step * energy
    if energy - 2 * h <= 0:
        raise EnergyDomainError("stencil reaches E <= 0")
    lo, hi = energy - 2 * h, energy + 2 * h
    for v in profile.heights:
        if lo - 1e-12 * v <= v <= hi + 1e-12 * v:
            raise DegenerateKinematicsError(f"differentiation stencil [{lo}, {hi}] crosses height {v}")
    center = float(edge_phase(profile, constants, [energy])[0])
    d = [_five_point(profile, constants, energy, h / 2**i, center) for i in range(3)]
    r1 = [(16 * d[i + 1] - d[i]) / 15 for i in range(2)]
    r2 = (64 * r1[1] - r1[0]) / 63
    tau = constants.hbar * r2
    flag = near_resonance(profile, constants, energy + h * np.array([-2, -1, 0, 1, 2]), guard)
    return PhaseTimeResult(
        energy=float(energy),
        tau=float(tau),
        reference_length=profile.extent,
        step_used=h,
        resonance_flag=flag,
        error_estimate=float(abs(constants.hbar * (r2 - r1[1]))),
    )


def phase_time_curve(profile, constants, energies, step=None) -> np.ndarray:
    """Phase time on a grid, all stencils evaluated in one batch.

    ``step`` is an absolute energy step (scalar or per point); defaults to
    ``REL_STEP * E``.  One Richardson level.
    """
    energies = np.asarray(energies, dtype=float)
    h = REL_STEP * energies if step is None else np.broadcast_to(np.asarray(step, dtype=float), energies.shape)
    centre = edge_phase(profile, constants, energies)
    d = []
    for hh in (h, h / 2):
        pts = energies[:, None] + hh[:, None] * _STENCIL[None, :]
        ph = edge_phase(profile, constants, pts.ravel()).reshape(pts.shape)
        rel = np.angle(np.exp(1j * (ph - centre[:, None])))
        d.append((rel @ _WEIGHTS) / hh)
    return constants.hbar * (16 * d[1] - d[0]) / 15
