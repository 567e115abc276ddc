"""Norm-preserving implicit time stepping of the 1D Schrodinger equation.

Crank-Nicolson in time with the compact fourth-order (Numerov) Laplacian
in space: H = -hbar^2/(2m) B^{-1} delta^2 / dx^2 + V with B = 1 + delta^2/12.
Multiplying both sides by B keeps the system tridiagonal, and because B and
delta^2 commute H stays Hermitian, so each step is exactly unitary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import backend
from ..errors import SchemeError
from ..profile import NATURAL, PhysicalConstants, PotentialProfile
from .grid import GridSpec, WavepacketState

#: absorbers off: norm drift beyond this is treated as an unstable scheme
NORM_DRIFT_LIMIT = 1e-6
#: fraction of the grid covered by the absorbing ramp on each side
ABSORBER_FRACTION = 0.1


def absorbing_potential(grid: GridSpec, strength: float, fraction: float = ABSORBER_FRACTION,
                        power: int = 2) -> np.ndarray:
    """Polynomial ramp W(x) >= 0 in the outer ``fraction`` of the grid (used as V - iW)."""
    x = grid.x
    span = fraction * (grid.x_max - grid.x_min)
    w = np.zeros_like(x)
    left = x < grid.x_min + span
    right = x > grid.x_max - span
    w[left] = ((grid.x_min + span - x[left]) / span) ** power
    w[right] = ((x[right] - (grid.x_max - span)) / span) ** power
    return strength * w


@dataclass
class DetectorTrace:
    """psi sampled at detector points (and both neighbours) after every step."""

    times: np.ndarray
    detector_x: np.ndarray
    samples: np.ndarray  # (n_steps, n_detectors, 3)
    dx: float
    hbar: float = 1.0
    mass: float = 1.0

    def density(self, d: int = 0) -> np.ndarray:
        return np.abs(self.samples[:, d, 1]) ** 2

    def current(self, d: int = 0) -> np.ndarray:
        lo, mid, hi = self.samples[:, d, 0], self.samples[:, d, 1], self.samples[:, d, 2]
        return (self.hbar / self.mass) * np.imag(np.conj(mid) * (hi - lo) / (2 * self.dx))

    def extend(self, other: "DetectorTrace") -> "DetectorTrace":
        return DetectorTrace(
            np.concatenate([self.times, other.times]), self.detector_x,
            np.concatenate([self.samples, other.samples]), self.dx, self.hbar, self.mass,
        )


@dataclass
class Propagation:
    state: WavepacketState
    trace: DetectorTrace | None = None
    snapshots: list[WavepacketState] = field(default_factory=list)
    initial_norm: float = 1.0

    @property
    def absorbed(self) -> float:
        return self.initial_norm - self.state.norm


class CrankNicolson:
    """Pre-factorised stepper for one (grid, profile, constants) combination."""

    def __init__(self, grid: GridSpec, profile: PotentialProfile | None, constants: PhysicalConstants = NATURAL,
                 absorbing: bool = False, absorber_strength: float | None = None, kernels=None):
        self.grid = grid
        self.constants = constants
        self.absorbing = absorbing
        self.kernels = kernels or backend.kernels
        x = grid.x
        # cell averages keep each barrier's area exact when its edges fall between nodes
        if profile is not None:
            v = profile.cell_average(x, grid.dx).astype(complex)
        else:
            v = np.zeros(grid.n_points, complex)
        if absorbing:
            if absorber_strength is None:
                absorber_strength = 0.5 * (profile.max_height if profile is not None and profile.segments else 1.0)
            v = v - 1j * absorbing_potential(grid, absorber_strength)
        self.potential = v
        hb, m, dx, dt = constants.hbar, constants.mass, grid.dx, grid.dt
        kin = -hb**2 / (2 * m * dx**2)
        c = 1j * dt / (2 * hb)
        n = grid.n_points
        b_off, b_mid = 1.0 / 12.0, 10.0 / 12.0
        v_prev = np.concatenate([[0.0], v[:-1]])
        v_next = np.concatenate([v[1:], [0.0]])
        g_lower = kin + v_prev / 12.0
        g_diag = -2 * kin + 10.0 * v / 12.0
        g_upper = kin + v_next / 12.0
        self.a_lower = np.ascontiguousarray(b_off + c * g_lower, dtype=complex)
        self.a_diag = np.ascontiguousarray(b_mid + c * g_diag, dtype=complex)
        self.a_upper = np.ascontiguousarray(b_off + c * g_upper, dtype=complex)
        self.b_lower = np.ascontiguousarray(b_off - c * g_lower, dtype=complex)
        self.b_diag = np.ascontiguousarray(b_mid - c * g_diag, dtype=complex)
        self.b_upper = np.ascontiguousarray(b_off - c * g_upper, dtype=complex)
        self.a_lower[0] = self.b_lower[0] = 0.0
        self.a_upper[n - 1] = self.b_upper[n - 1] = 0.0
        self.factor = self.kernels.thomas_factor(self.a_lower, self.a_diag, self.a_upper)

    def run(self, psi: np.ndarray, n_steps: int, probes: np.ndarray) -> np.ndarray:
        """Advance ``psi`` in place; returns the probe trace (n_steps, len(probes))."""
        trace = np.empty((n_steps, len(probes)), dtype=complex)
        self.kernels.cn_evolve(psi, n_steps, self.b_lower, self.b_diag, self.b_upper,
                               self.a_lower, self.factor, np.ascontiguousarray(probes, dtype=np.intp), trace)
        return trace


def propagate(
    state: WavepacketState,
    profile: PotentialProfile | None,
    constants: PhysicalConstants = NATURAL,
    n_steps: int = 1000,
    detectors=(),
    absorbing: bool = False,
    chunk: int = 1000,
    snapshot_every: int | None = None,
    frame_every: int | None = None,
    frame_dir: str | Path | None = None,
    stepper: CrankNicolson | None = None,
) -> Propagation:
    """Evolve ``state`` by ``n_steps`` and record psi at ``detectors`` after every step."""
    grid = state.grid
    if stepper is None:
        stepper = CrankNicolson(grid, profile, constants, absorbing=absorbing)
    det_x = np.atleast_1d(np.asarray(detectors, dtype=float))
    idx = np.array([grid.index(x) for x in det_x], dtype=np.intp)
    if np.any((idx < 1) | (idx > grid.n_points - 2)):
        raise ValueError("detectors must lie strictly inside the grid")
    probes = np.stack([idx - 1, idx, idx + 1], axis=1).ravel() if len(idx) else np.zeros(0, np.intp)
    psi = np.array(state.psi, dtype=complex, copy=True)
    norm0 = state.norm
    t0 = state.t
    dt = grid.dt
    every = [e for e in (snapshot_every, frame_every, chunk) if e]
    block = min(every) if every else n_steps
    samples = []
    snapshots = []
    done = 0
    if frame_dir is not None:
        Path(frame_dir).mkdir(parents=True, exist_ok=True)
    while done < n_steps:
        m = min(block, n_steps - done)
        tr = stepper.run(psi, m, probes)
        samples.append(tr)
        done += m
        t = t0 + done * dt
        cur = WavepacketState(psi=psi.copy(), t=t, grid=grid, absorbing=stepper.absorbing)
        if not stepper.absorbing and abs(cur.norm - norm0) > NORM_DRIFT_LIMIT:
            raise SchemeError(f"norm drifted by {cur.norm - norm0:.3e} after {done} steps")
        if not np.all(np.isfinite(psi[:: max(1, len(psi) // 64)])):
            raise SchemeError("non-finite wavefunction")
        if snapshot_every and done % snapshot_every == 0:
            snapshots.append(cur)
        if frame_every and frame_dir is not None and done % frame_every == 0:
            write_frame(cur, Path(frame_dir) / f"frame_{done:07d}.txt")
    final = WavepacketState(psi=psi, t=t0 + n_steps * dt, grid=grid, absorbing=stepper.absorbing)
    trace = None
    if len(idx):
        allt = np.concatenate(samples) if samples else np.empty((0, len(probes)), complex)
        trace = DetectorTrace(
            times=t0 + dt * np.arange(1, n_steps + 1),
            detector_x=grid.x[idx],
            samples=allt.reshape(n_steps, len(idx), 3),
            dx=grid.dx, hbar=constants.hbar, mass=constants.mass,
        )
    return Propagation(state=final, trace=trace, snapshots=snapshots, initial_norm=norm0)


def evolve(state: WavepacketState, profile: PotentialProfile | None, constants: PhysicalConstants = NATURAL,
           n_steps: int = 1000, absorbing: bool = False) -> WavepacketState:
    """Advance a state by ``n_steps`` Crank-Nicolson steps."""
    return propagate(state, profile, constants, n_steps, absorbing=absorbing).state


def write_frame(state: WavepacketState, path: str | Path) -> None:
    """Columnar text dump: x, |psi|^2."""
    data = np.column_stack([state.grid.x, state.density()])
    np.savetxt(path, data, header=f"t = {state.t!r}\nx density", fmt="%.17g")


def required_steps(t_final: float, dt: float) -> int:
    return int(math.ceil(t_final / dt - 1e-9))
