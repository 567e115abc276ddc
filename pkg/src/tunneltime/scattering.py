"""Stationary scattering through piecewise-constant potentials.

Two independent routes are provided:

* :func:`solve_scattering` propagates coefficients right-to-left through
  per-segment transfer matrices (any number of segments).
* :func:`solve_matching_direct` assembles the eight continuity equations of
  the barrier/gap/barrier geometry and solves them as one linear system.

They share nothing beyond the kinematics and are used to check each other.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateKinematicsError, ProfileError
from .profile import NATURAL, PhysicalConstants, PotentialProfile
from .transfer import TransferMatrix, interface_matrix, propagation_matrix

TWO_BARRIER_NAMES = ("A_R1", "A_T1", "alpha1", "beta1", "A_R2", "A_T2", "alpha2", "beta2")


@dataclass(frozen=True)
class ScatteringSolution:
    """All plane-wave / evanescent coefficients at one energy, left incidence.

    ``region_coeffs[0]`` is the left lead ``(1, r)`` referenced at x = 0,
    ``region_coeffs[j + 1]`` is segment ``j`` referenced at its left edge, and
    ``region_coeffs[-1]`` is the right lead ``(t_edge, 0)`` referenced at x = D.
    ``transmission_amp`` uses the absolute convention psi = t exp(ikx) for
    x > D, i.e. ``t = t_edge * exp(-ikD)``.
    """

    energy: float
    reflection_amp: complex
    transmission_amp: complex
    region_coeffs: np.ndarray
    wavenumbers: np.ndarray
    edges: np.ndarray
    log_transmission: float = float("nan")

    @property
    def R(self) -> float:
        return abs(self.reflection_amp) ** 2

    @property
    def T(self) -> float:
        return abs(self.transmission_amp) ** 2

    @property
    def transmission_edge(self) -> complex:
        """Transmission amplitude referenced at the right edge, t * exp(ikD)."""
        return complex(self.region_coeffs[-1, 0])

    def psi(self, x) -> np.ndarray:
        """Reconstruct the stationary wavefunction on arbitrary points."""
        x = np.asarray(x, dtype=float)
        out = np.empty(x.shape, dtype=complex)
        # region index: 0 left lead, j+1 segment j, n+1 right lead
        idx = np.searchsorted(self.edges, x, side="right")
        origins = np.concatenate([[0.0], self.edges])
        for r in np.unique(idx):
            mask = idx == r
            q = self.wavenumbers[r]
            f, b = self.region_coeffs[r]
            dx = x[mask] - origins[r]
            out[mask] = f * np.exp(1j * q * dx) + b * np.exp(-1j * q * dx)
        return out

    def interface_mismatch(self) -> np.ndarray:
        """Relative jumps of (psi, psi') at every interface, shape (n_interfaces, 2)."""
        origins = np.concatenate([[0.0], self.edges])
        rows = []
        for j, xe in enumerate(self.edges):
            left, right = j, j + 1
            vals = []
            for r in (left, right):
                q = self.wavenumbers[r]
                f, b = self.region_coeffs[r]
                dx = xe - origins[r]
                ep, em = np.exp(1j * q * dx), np.exp(-1j * q * dx)
                vals.append((f * ep + b * em, 1j * q * (f * ep - b * em)))
            (p0, d0), (p1, d1) = vals
            k = abs(self.wavenumbers[0])
            scale = max(abs(p0), abs(d0) / k, 1e-300)
            rows.append((abs(p0 - p1) / scale, abs(d0 - d1) / (k * scale)))
        return np.array(rows)

    def two_barrier_amplitudes(self) -> dict[str, complex]:
        """Coefficients in the two-barrier convention of the five-region ansatz.

        Regions III-V there carry a common ``A_T1`` prefactor and use absolute
        ``exp(+-ikx)`` in regions I, III and V.
        """
        if len(self.region_coeffs) != 5:
            raise ProfileError("two-barrier amplitudes need a barrier/gap/barrier profile")
        k = self.wavenumbers[0]
        a = self.edges[1]
        A_T1 = self.region_coeffs[2, 0] * np.exp(-1j * k * a)
        c_back = self.region_coeffs[2, 1] * np.exp(1j * k * a)
        return {
            "A_R1": complex(self.reflection_amp),
            "A_T1": complex(A_T1),
            "alpha1": complex(self.region_coeffs[1, 0]),
            "beta1": complex(self.region_coeffs[1, 1]),
            "A_R2": complex(c_back / A_T1),
            "A_T2": complex(self.transmission_amp / A_T1),
            "alpha2": complex(self.region_coeffs[3, 0] / A_T1),
            "beta2": complex(self.region_coeffs[3, 1] / A_T1),
        }


def _wavenumbers(profile: PotentialProfile, constants: PhysicalConstants, energy: float) -> np.ndarray:
    profile.check_energy(energy)
    k0 = constants.wavenumber(energy)
    qs = [k0] + [constants.wavenumber(energy - v) for v in profile.heights] + [k0]
    return np.array(qs, dtype=complex)


def profile_matrix(profile: PotentialProfile, constants: PhysicalConstants, energy: float) -> TransferMatrix:
    """Ordered product of per-segment matrices, lead edge to lead edge."""
    qs = _wavenumbers(profile, constants, energy)
    m = TransferMatrix.identity()
    for j, w in enumerate(profile.widths):
        m = m @ interface_matrix(qs[j], qs[j + 1]) @ propagation_matrix(qs[j + 1], w)
    return m @ interface_matrix(qs[-2], qs[-1])


def solve_scattering(
    profile: PotentialProfile,
    constants: PhysicalConstants = NATURAL,
    energy: float = 0.5,
    incidence: str = "left",
) -> ScatteringSolution:
    """Exact scattering state with unit incidence.

    Coefficients are built from the right lead ``(1, 0)`` leftwards and then
    renormalised by the incident amplitude; each step is either a diagonal
    rescaling or an O(1)-conditioned interface map, so even exponentially
    small coefficients keep full relative precision.

    ``incidence="right"`` solves the mirrored profile; the returned
    coefficients then refer to the mirrored geometry.
    """
    if incidence == "right":
        return solve_scattering(profile.reversed(), constants, energy)
    if incidence != "left":
        raise ValueError("incidence must be 'left' or 'right'")
    qs = _wavenumbers(profile, constants, energy)
    widths = profile.widths
    n = len(widths)
    mantissa = np.zeros((n + 2, 2), dtype=complex)
    logs = np.zeros(n + 2)
    vec = np.array([1.0 + 0j, 0.0 + 0j])
    log_acc = 0.0
    mantissa[n + 1] = vec
    for j in range(n, -1, -1):
        vec = interface_matrix(qs[j], qs[j + 1]).entries @ vec
        if j > 0:
            # vec holds segment j-1 at its right edge; move the origin to the left edge
            vec, grow = _propagate_left(vec, qs[j], widths[j - 1])
            log_acc += grow
        peak = np.abs(vec).max()
        vec = vec / peak
        log_acc += math.log(peak)
        mantissa[j] = vec
        logs[j] = log_acc
    inc = mantissa[0, 0]
    coeffs = np.empty_like(mantissa)
    for r in range(n + 2):
        coeffs[r] = mantissa[r] / inc * math.exp(logs[r] - logs[0]) if logs[r] - logs[0] > -745 else 0.0
    k0 = qs[0].real
    D = profile.extent
    t_edge = coeffs[-1, 0]
    log_t = -logs[0] - math.log(abs(inc))
    edges = profile.edges
    return ScatteringSolution(
        energy=float(energy),
        reflection_amp=complex(coeffs[0, 1]),
        transmission_amp=complex(t_edge * np.exp(-1j * k0 * D)),
        region_coeffs=coeffs,
        wavenumbers=qs,
        edges=edges,
        log_transmission=log_t,
    )


def _propagate_left(vec, q, w):
    """Apply diag(exp(-iqw), exp(iqw)) with the larger modulus factored out as a log."""
    l1, l2 = q.imag * w, -q.imag * w
    top = max(l1, l2)
    ph = q.real * w
    out = np.array([
        vec[0] * math.exp(l1 - top) * np.exp(-1j * ph),
        vec[1] * math.exp(l2 - top) * np.exp(1j * ph),
    ])
    return out, top


def transmission_amplitude(profile: PotentialProfile, constants: PhysicalConstants, energy: float) -> complex:
    """Absolute-convention transmission amplitude t(E)."""
    return solve_scattering(profile, constants, energy).transmission_amp


# ---------------------------------------------------------------------------
# direct matching-condition solve (two-barrier oracle)
# ---------------------------------------------------------------------------

def solve_matching_direct(
    profile: PotentialProfile, constants: PhysicalConstants = NATURAL, energy: float = 0.5
) -> ScatteringSolution:
    """Solve the eight continuity equations of the barrier/gap/barrier geometry.

    Unknowns (products are linearised by absorbing ``A_T1``):
    ``A_R1, alpha1, beta1, A_T1, A_T1*A_R2, A_T1*alpha2, A_T1*beta2, A_T1*A_T2``.
    Columns and rows are equilibrated by the exponentials each unknown
    multiplies, which leaves the equations unchanged but keeps the system
    well conditioned for opaque barriers.
    """
    segs = profile.segments
    if len(segs) != 3 or segs[1][1] != 0.0 or segs[0] != segs[2]:
        raise ProfileError("direct solve needs an equal barrier / free gap / barrier profile")
    a, V0 = segs[0]
    L = a + segs[1][0]
    profile.check_energy(energy)
    if not V0 > energy and a > 0:
        raise ProfileError("direct solve is written for tunnelling energies E < V0")
    k = math.sqrt(2 * constants.mass * energy) / constants.hbar
    if a == 0:
        # barriers collapse; equations degenerate to free propagation
        return solve_scattering(profile, constants, energy)
    chi = math.sqrt(2 * constants.mass * (V0 - energy)) / constants.hbar
    if chi == 0:
        raise DegenerateKinematicsError("chi = 0")

    # Unknown order: A_R1, alpha1, beta1, A_T1, C, D, F, G with
    # C = A_T1 A_R2, D = A_T1 alpha2, F = A_T1 beta2, G = A_T1 A_T2.
    # Each entry is stored as (coefficient, exponent of e^{chi a}); columns are
    # scaled by the expected size of their unknown, rows by their largest entry.
    ik = 1j * k
    e = lambda x: np.exp(1j * k * x)  # noqa: E731
    rows = [
        # x = 0: psi_I = psi_II and derivative
        ({0: (1, 0), 1: (-1, 0), 2: (-1, 0)}, -1),
        ({0: (-ik, 0), 1: (chi, 0), 2: (-chi, 0)}, -ik),
        # x = a
        ({1: (1, -1), 2: (1, 1), 3: (-e(a), 0), 4: (-e(-a), 0)}, 0),
        ({1: (-chi, -1), 2: (chi, 1), 3: (-ik * e(a), 0), 4: (ik * e(-a), 0)}, 0),
        # x = L
        ({3: (e(L), 0), 4: (e(-L), 0), 5: (-1, 0), 6: (-1, 0)}, 0),
        ({3: (ik * e(L), 0), 4: (-ik * e(-L), 0), 5: (chi, 0), 6: (-chi, 0)}, 0),
        # x = L + a
        ({5: (1, -1), 6: (1, 1), 7: (-e(L + a), 0)}, 0),
        ({5: (-chi, -1), 6: (chi, 1), 7: (-ik * e(L + a), 0)}, 0),
    ]
    col_exp = np.array([0, 0, -2, -1, -1, -1, -3, -2], dtype=float)
    ca = chi * a
    M = np.zeros((8, 8), dtype=complex)
    rhs = np.zeros(8, dtype=complex)
    for i, (entries, b) in enumerate(rows):
        expo = {j: p + col_exp[j] for j, (_, p) in entries.items()}
        top = max(expo.values())
        if b != 0:
            top = max(top, 0.0)
        for j, (c, _) in entries.items():
            M[i, j] = c * math.exp((expo[j] - top) * ca)
        rhs[i] = b * math.exp(-top * ca)
    try:
        y = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateKinematicsError("singular matching system") from exc
    if not np.all(np.isfinite(y)):
        raise DegenerateKinematicsError("singular matching system")
    x = y * np.exp(col_exp * ca)
    A_R1, alpha1, beta1, A_T1, C, D, F, G = x
    return _solution_from_two_barrier(profile, constants, energy, k, chi, a, L,
                                      A_R1, alpha1, beta1, A_T1, C, D, F, G)


def _solution_from_two_barrier(profile, constants, energy, k, chi, a, L, A_R1, alpha1, beta1, A_T1, C, D, F, G):
    coeffs = np.array(
        [
            [1.0, A_R1],
            [alpha1, beta1],
            [A_T1 * np.exp(1j * k * a), C * np.exp(-1j * k * a)],
            [D, F],
            [G * np.exp(1j * k * (L + a)), 0.0],
        ],
        dtype=complex,
    )
    qs = np.array([k, 1j * chi, k, 1j * chi, k], dtype=complex)
    return ScatteringSolution(
        energy=float(energy),
        reflection_amp=complex(A_R1),
        transmission_amp=complex(G),
        region_coeffs=coeffs,
        wavenumbers=qs,
        edges=profile.edges,
        log_transmission=math.log(abs(G)) if G != 0 else -math.inf,
    )
