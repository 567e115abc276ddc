"""Closed-form opaque-barrier limits for the two-barrier geometry.

Everything here is evaluated literally (no e^{-2 chi a} corrections), so the
exact solver agrees with these expressions up to O(e^{-2 chi a}).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import NearResonanceError
from .profile import NATURAL, PhysicalConstants

#: |denominator| < NEAR_RESONANCE_GUARD * 2 chi k makes the cavity factor unusable.
NEAR_RESONANCE_GUARD = 1e-6


@dataclass(frozen=True)
class OpaqueLimitAmplitudes:
    alpha2: complex
    beta2: complex
    refl2: complex
    trans2: complex
    alpha1: complex
    beta1: complex
    refl1: complex
    trans1: complex
    A: float

    @property
    def total_transmission(self) -> complex:
        return self.trans1 * self.trans2

    def as_dict(self) -> dict[str, complex]:
        """Keyed like :meth:`ScatteringSolution.two_barrier_amplitudes`."""
        return {
            "A_R1": self.refl1, "A_T1": self.trans1, "alpha1": self.alpha1, "beta1": self.beta1,
            "A_R2": self.refl2, "A_T2": self.trans2, "alpha2": self.alpha2, "beta2": self.beta2,
        }


def resonance_condition(k: float, chi: float, gap: float, chi_right: float | None = None) -> float:
    """Cavity denominator 2 chi k cos(k g) + (chi^2 - k^2) sin(k g).

    Equals Im[(chi + ik)^2 e^{ikg}]; with ``chi_right`` given, the two walls
    may differ: Im[(chi + ik)(chi_right + ik) e^{ikg}].  Zeros are the
    Fabry-Perot-like transmission resonances of the gap.
    """
    c2 = chi if chi_right is None else chi_right
    return float(((chi + 1j * k) * (c2 + 1j * k) * cmath.exp(1j * k * gap)).imag)


def cavity_factor(k: float, chi: float, gap: float, guard: float = NEAR_RESONANCE_GUARD) -> float:
    """Real factor A = 2 chi k / resonance_condition."""
    den = resonance_condition(k, chi, gap)
    if abs(den) < guard * 2 * chi * k:
        raise NearResonanceError(f"cavity denominator {den:.3e} within guard of a resonance (gap={gap})")
    return 2 * chi * k / den


def opaque_amplitudes(k: float, chi: float, a: float, L: float,
                      guard: float = NEAR_RESONANCE_GUARD) -> OpaqueLimitAmplitudes:
    """Opaque-limit coefficients for barriers [0, a] and [L, L + a]."""
    if not (k > 0 and chi > 0):
        raise ValueError("k and chi must be positive")
    if not (0 < a <= L):
        raise ValueError("need 0 < a <= L")
    ik = 1j * k
    A = cavity_factor(k, chi, L - a, guard)
    den = ik - chi
    decay = math.exp(-chi * a)
    return OpaqueLimitAmplitudes(
        alpha2=cmath.exp(ik * L) * 2 * ik / den,
        beta2=cmath.exp(ik * L - 2 * chi * a) * (-2 * ik * (ik + chi)) / den**2,
        refl2=cmath.exp(2 * ik * L) * (ik + chi) / den,
        trans2=decay * cmath.exp(-ik * a) * (-4 * ik * chi) / den**2,
        alpha1=2 * ik / den,
        beta1=math.exp(-2 * chi * a) * (k - 1j * chi) * math.sin(k * (L - a)) / chi * A,
        refl1=(ik + chi) / den,
        trans1=decay * cmath.exp(-ik * L) * A,
        A=A,
    )


def single_barrier_opaque_factor(k: float, chi: float) -> complex:
    """-4ik chi / (ik - chi)^2, the width-independent part of opaque transmission."""
    ik = 1j * k
    return -4 * ik * chi / (ik - chi) ** 2


def hartman_phase_time(k: float, chi: float, constants: PhysicalConstants = NATURAL) -> float:
    """Opaque-limit phase time 2m / (hbar k chi); takes no widths or gaps."""
    if not (k > 0 and chi > 0):
        raise ValueError("k and chi must be positive")
    return 2 * constants.mass / (constants.hbar * k * chi)


def exact_cavity_factor(amplitudes: dict[str, complex], k: float, chi: float, a: float, L: float) -> complex:
    """Exact-solver analogue of A: A_T1 e^{chi a} e^{ikL}; its imaginary part vanishes as chi a grows."""
    return amplitudes["A_T1"] * math.exp(chi * a) * cmath.exp(1j * k * L)
