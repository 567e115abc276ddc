"""2x2 transfer matrices for piecewise-constant potentials.

Convention: within a segment starting at ``x_s`` the wavefunction is

    psi(x) = f * exp(i q (x - x_s)) + b * exp(-i q (x - x_s))

with ``q = sqrt(2 m (E - V)) / hbar`` on the principal branch, so an
evanescent segment has ``q = i chi`` and ``f``/``b`` are the decaying /
growing coefficients.  Every matrix maps coefficients on the *right* to
coefficients on the *left*.

Large evanescent factors are carried as ``entries * exp(log_scale)`` so
that products over many opaque segments neither overflow nor lose phase.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateKinematicsError

#: chi * w above which a propagation matrix is stored in log-amplitude form.
LOG_FORM_THRESHOLD = 50.0


@dataclass(frozen=True)
class TransferMatrix:
    entries: np.ndarray
    log_scale: float = 0.0

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError("transfer matrix must be 2x2")
        object.__setattr__(self, "entries", m)

    @classmethod
    def identity(cls) -> "TransferMatrix":
        return cls(np.eye(2, dtype=complex))

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        prod = self.entries @ other.entries
        log_scale = self.log_scale + other.log_scale
        peak = np.abs(prod).max()
        if peak > 0 and (peak > 1e100 or peak < 1e-100):
            prod = prod / peak
            log_scale += float(np.log(peak))
        return TransferMatrix(prod, log_scale)

    def matrix(self) -> np.ndarray:
        """Dense matrix; overflows to inf if the scale exceeds double range."""
        return self.entries * np.exp(self.log_scale)

    @property
    def det(self) -> complex:
        m = self.entries
        d = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        return complex(d * np.exp(2.0 * self.log_scale))

    def apply(self, vec) -> np.ndarray:
        return self.matrix() @ np.asarray(vec, dtype=complex)

    def transmission(self) -> complex:
        """Left-incidence transmission with coefficients referenced at the lead edges."""
        return complex(np.exp(-self.log_scale) / self.entries[0, 0])

    def reflection(self) -> complex:
        return complex(self.entries[1, 0] / self.entries[0, 0])

    def allclose(self, other: "TransferMatrix", rtol: float = 1e-12) -> bool:
        a, b = self.matrix(), other.matrix()
        return bool(np.allclose(a, b, rtol=rtol, atol=rtol * np.abs(b).max()))


def interface_matrix(k_left: complex, k_right: complex) -> TransferMatrix:
    """Continuity of psi and psi' across an interface located at the common origin.

    ``det = k_right / k_left``.
    """
    if k_left == 0 or k_right == 0:
        raise DegenerateKinematicsError("zero wavenumber at interface (E equals a segment height)")
    rho = complex(k_right) / complex(k_left)
    return TransferMatrix(0.5 * np.array([[1 + rho, 1 - rho], [1 - rho, 1 + rho]]))


def propagation_matrix(wavenumber: complex, width: float) -> TransferMatrix:
    """diag(exp(-i q w), exp(+i q w)): moves the coefficient origin from the right edge to the left.

    For ``q = i chi`` the entries are ``exp(+chi w)`` and ``exp(-chi w)``;
    beyond :data:`LOG_FORM_THRESHOLD` the growth factor is kept in ``log_scale``.
    """
    if width < 0:
        raise ValueError("width must be non-negative")
    q = complex(wavenumber)
    growth = abs(q.imag) * width
    if growth <= LOG_FORM_THRESHOLD:
        return TransferMatrix(np.diag([cmath.exp(-1j * q * width), cmath.exp(1j * q * width)]))
    # pull exp(growth) out of both entries; the small one underflows gracefully
    phase_arg = q.real * width
    sign = 1.0 if q.imag > 0 else -1.0
    big_first = sign > 0
    e_small = np.exp(-2.0 * growth)
    if big_first:
        d = [cmath.exp(-1j * phase_arg), e_small * cmath.exp(1j * phase_arg)]
    else:
        d = [e_small * cmath.exp(-1j * phase_arg), cmath.exp(1j * phase_arg)]
    return TransferMatrix(np.diag(d), growth)
