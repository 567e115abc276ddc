"""Arrival-time observables at a detector plane."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import trapezoid

from ..errors import InsufficientTransmissionError
from .grid import WavepacketState
from .propagate import DetectorTrace

#: transmitted probability below this is numerical noise
TRANSMISSION_FLOOR = 1e-12


@dataclass(frozen=True)
class ArrivalRecord:
    detector_x: float
    t_peak: float
    t_centroid: float
    transmitted_fraction: float

    def to_record(self) -> dict:
        return asdict(self)


def _trace_from_history(history: Sequence[WavepacketState], detector_x: float) -> DetectorTrace:
    grid = history[0].grid
    i = grid.index(detector_x)
    samples = np.array([[s.psi[i - 1], s.psi[i], s.psi[i + 1]] for s in history])[:, None, :]
    return DetectorTrace(
        times=np.array([s.t for s in history]),
        detector_x=np.array([grid.x[i]]),
        samples=samples,
        dx=grid.dx,
    )


def peak_time(times: np.ndarray, signal: np.ndarray) -> float:
    """Time of the maximum of ``signal`` refined by a parabola through three samples."""
    s = int(np.argmax(signal))
    if s == 0 or s == len(signal) - 1:
        raise InsufficientTransmissionError("signal maximum lies at the edge of the recorded window")
    y0, y1, y2 = signal[s - 1], signal[s], signal[s + 1]
    denom = y0 - 2 * y1 + y2
    shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
    dt = times[s + 1] - times[s]
    return float(times[s] + shift * dt)


def measure_arrival(history, detector_x: float | None = None, detector: int = 0,
                    initial_norm: float = 1.0) -> ArrivalRecord:
    """Peak and current-centroid passage times at a detector.

    ``history`` is either a :class:`DetectorTrace` recorded during
    propagation or a time-ordered sequence of states.
    """
    if isinstance(history, DetectorTrace):
        trace = history
        if detector_x is not None:
            detector = int(np.argmin(np.abs(trace.detector_x - detector_x)))
    else:
        if detector_x is None:
            raise ValueError("detector_x is required for a state history")
        trace = _trace_from_history(list(history), detector_x)
        detector = 0
    times = trace.times
    j = trace.current(detector)
    flux = float(trapezoid(j, times))
    if not flux > TRANSMISSION_FLOOR * initial_norm:
        raise InsufficientTransmissionError(f"transmitted probability {flux:.3e} below floor")
    t_peak = peak_time(times, trace.density(detector))
    jp = np.clip(j, 0.0, None)
    t_centroid = float(np.sum(times * jp) / np.sum(jp))
    return ArrivalRecord(
        detector_x=float(trace.detector_x[detector]),
        t_peak=t_peak,
        t_centroid=t_centroid,
        transmitted_fraction=flux / initial_norm,
    )


def backward_tail_position(state: WavepacketState, x_limit: float, level: float = 0.5) -> float:
    """Leftmost x (below ``x_limit``) where |psi|^2 first reaches ``level`` of its maximum there.

    Compared against a free reference packet this quantifies the "advancement"
    of the packet's trailing edge before the first barrier.
    """
    x = state.grid.x
    mask = x < x_limit
    rho = state.density()[mask]
    xs = x[mask]
    thr = level * rho.max()
    i = int(np.argmax(rho >= thr))
    if i == 0:
        return float(xs[0])
    # linear interpolation between the bracketing samples
    x0, x1, r0, r1 = xs[i - 1], xs[i], rho[i - 1], rho[i]
    return float(x0 + (thr - r0) * (x1 - x0) / (r1 - r0))


def advancement(state: WavepacketState, free_state: WavepacketState, x_limit: float = 0.0) -> float:
    """Shift of the trailing half-maximum relative to an unobstructed packet at the same time."""
    if not math.isclose(state.t, free_state.t, rel_tol=1e-9):
        raise ValueError("states must be taken at the same time")
    return backward_tail_position(state, x_limit) - backward_tail_position(free_state, x_limit)
