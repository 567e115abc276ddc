"""Undersized-waveguide <-> rectangular-barrier correspondence (stationary only).

For the TE10 mode of a rectangular guide of width w the longitudinal
wavenumber obeys beta^2 = (omega^2 - omega_c^2) / c^2 with omega_c = pi c / w.
Reading the cutoff as a potential, a normal segment carries k^2 =
(omega^2 - omega_c,normal^2) / c^2 and an undersized one an evanescent
chi^2 = (omega_c,undersized^2 - omega^2) / c^2.  In natural units
(hbar = m = 1) this is a barrier of height (k^2 + chi^2) / 2 at E = k^2 / 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import MappingError
from ..profile import NATURAL, PhysicalConstants, PotentialProfile

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class WaveguideParams:
    """Alternating undersized / normal sections, starting and ending undersized."""

    guide_width_normal: float
    guide_width_undersized: float
    frequency: float
    segment_lengths: tuple[float, ...] = field(default=())
    wave_speed: float = SPEED_OF_LIGHT

    def __post_init__(self):
        object.__setattr__(self, "segment_lengths", tuple(float(s) for s in self.segment_lengths))
        if not 0 < self.guide_width_undersized < self.guide_width_normal:
            raise MappingError("undersized width must be positive and below the normal width")
        if len(self.segment_lengths) % 2 != 1:
            raise MappingError("segment_lengths must alternate undersized/normal and start and end undersized")

    @property
    def omega(self) -> float:
        return 2 * math.pi * self.frequency

    def cutoff(self, width: float) -> float:
        """TE10 angular cutoff frequency."""
        return math.pi * self.wave_speed / width

    @property
    def omega_c_normal(self) -> float:
        return self.cutoff(self.guide_width_normal)

    @property
    def omega_c_undersized(self) -> float:
        return self.cutoff(self.guide_width_undersized)

    @classmethod
    def from_dict(cls, doc: dict) -> "WaveguideParams":
        return cls(
            guide_width_normal=float(doc["guide_width_normal"]),
            guide_width_undersized=float(doc["guide_width_undersized"]),
            frequency=float(doc["frequency"]),
            segment_lengths=tuple(doc["segment_lengths"]),
            wave_speed=float(doc.get("wave_speed", SPEED_OF_LIGHT)),
        )


def waveguide_map(params: WaveguideParams) -> tuple[PotentialProfile, PhysicalConstants, float]:
    """Equivalent (profile, constants, energy) in natural units; lengths are kept as given."""
    c, w = params.wave_speed, params.omega
    wn, wu = params.omega_c_normal, params.omega_c_undersized
    if w <= wn:
        raise MappingError("frequency at or below the normal-guide cutoff: no propagating mode")
    if w >= 2 * wn:
        raise MappingError("frequency above the second-mode cutoff of the normal guide (not single-mode)")
    if w >= wu:
        raise MappingError("frequency at or above the undersized cutoff: no evanescence")
    k2 = (w**2 - wn**2) / c**2
    chi2 = (wu**2 - w**2) / c**2
    energy = k2 / 2
    height = (k2 + chi2) / 2
    segs = tuple(
        (length, height if i % 2 == 0 else 0.0) for i, length in enumerate(params.segment_lengths)
    )
    return PotentialProfile(segs, name="waveguide"), NATURAL, energy


def dispersion_residuals(params: WaveguideParams) -> tuple[float, float]:
    """Relative mismatch of the mapped (k, chi) with the guide dispersion relations."""
    profile, constants, energy = waveguide_map(params)
    c, w = params.wave_speed, params.omega
    k = math.sqrt(2 * constants.mass * energy) / constants.hbar
    chi = math.sqrt(2 * constants.mass * (profile.max_height - energy)) / constants.hbar
    beta_n = (w**2 - params.omega_c_normal**2) / c**2
    kappa_u = (params.omega_c_undersized**2 - w**2) / c**2
    return abs(k**2 - beta_n) / beta_n, abs(chi**2 - kappa_u) / kappa_u


def group_delay_from_phase_time(tau: float, params: WaveguideParams) -> float:
    """Electromagnetic group delay d(phase)/d(omega) in seconds.

    The mapped energy E = (omega^2 - omega_c^2) / (2 c^2) gives dE/domega = omega / c^2.
    """
    return tau * params.omega / params.wave_speed**2
