"""Transmission-peak scanning and Lorentzian fits of the delay near resonances."""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import OptimizeWarning, brentq, curve_fit, minimize_scalar

from . import backend
from .asymptotics import resonance_condition
from .errors import EnergyDomainError
from .phasetime import phase_time_curve
from .profile import NATURAL, PhysicalConstants, PotentialProfile

#: fits below this R^2 are kept but flagged
FIT_QUALITY_THRESHOLD = 0.99
#: half-width of the fit window in units of Gamma
FIT_WINDOW = 3.0


@dataclass(frozen=True)
class ResonanceFit:
    E_r: float
    Gamma: float
    tau_nr: float
    fit_quality: float
    E_peak: float = math.nan
    peak_transmission: float = math.nan
    flagged: bool = False

    def delay(self, energy, hbar: float = 1.0):
        """Fitted delay hbar Gamma / ((E - E_r)^2 + Gamma^2) + tau_nr."""
        return lorentzian_delay(np.asarray(energy, dtype=float), self.E_r, self.Gamma, self.tau_nr, hbar)

    def to_record(self) -> dict:
        return asdict(self)


def lorentzian_delay(E, E_r, Gamma, tau_nr, hbar=1.0):
    return hbar * Gamma / ((E - E_r) ** 2 + Gamma**2) + tau_nr


def log_transmission(profile: PotentialProfile, constants: PhysicalConstants, energies) -> np.ndarray:
    """ln |t(E)|^2, safe against underflow for opaque profiles."""
    inc, _, logs = backend.kernels.transfer_batch(
        profile.widths, profile.heights, np.ascontiguousarray(energies, dtype=float),
        constants.hbar, constants.mass,
    )
    return -2.0 * (np.log(np.abs(inc)) + logs)


def _refine_peak(profile, constants, lo, hi) -> float:
    """Golden-section/parabolic maximisation of ln|t|^2 inside [lo, hi]."""
    f = lambda e: -float(log_transmission(profile, constants, [e])[0])  # noqa: E731
    res = minimize_scalar(f, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-15 * abs(hi)})
    return float(res.x)


def _half_width(profile, constants, e_peak, log_peak, e_min, e_max) -> float:
    """Half width at half maximum of |t|^2 (mean of both sides where found)."""
    target = log_peak - math.log(2.0)
    g = lambda e: float(log_transmission(profile, constants, [e])[0]) - target  # noqa: E731
    widths = []
    for direction, limit in ((1, e_max), (-1, e_min)):
        step = 1e-12 * e_peak
        far = e_peak
        while True:
            step *= 2
            far = e_peak + direction * step
            if (direction > 0 and far >= limit) or (direction < 0 and far <= limit):
                break
            if g(far) < 0:
                root = brentq(g, *sorted((e_peak + direction * step / 2, far)), xtol=1e-15, rtol=1e-14)
                widths.append(abs(root - e_peak))
                break
    if not widths:
        raise ArithmeticError("no half-maximum crossing found")
    return float(np.mean(widths))


def fit_resonance(profile, constants, e_peak, gamma0, n_fit=121, window=FIT_WINDOW) -> ResonanceFit:
    """Least-squares fit of the delay curve on E_peak +- window * Gamma."""
    E_r, gamma = e_peak, gamma0
    tau_bg = 0.0
    quality = 0.0
    for it in range(3):
        grid = np.linspace(E_r - window * gamma, E_r + window * gamma, n_fit)
        tau = phase_time_curve(profile, constants, grid, step=gamma * 1e-3)
        if it == 0:
            tau_bg = float(min(tau[0], tau[-1]))
        # fit in units of the current width so all parameters are O(1)
        u = (grid - E_r) / gamma
        scale = constants.hbar / gamma
        with warnings.catch_warnings():
            # the covariance is unused; a singular one only means an exact fit
            warnings.simplefilter("ignore", OptimizeWarning)
            popt, _cov = curve_fit(
                lambda u, c, w, bg: scale * w / ((u - c) ** 2 + w**2) + bg,
                u, tau, p0=(0.0, 1.0, tau_bg), maxfev=10000,
            )
        E_r, gamma, tau_bg = E_r + popt[0] * gamma, abs(popt[1]) * gamma, float(popt[2])
        E_r, gamma = float(E_r), float(gamma)
        resid = tau - lorentzian_delay(grid, E_r, gamma, tau_bg, constants.hbar)
        ss_tot = float(np.sum((tau - tau.mean()) ** 2))
        quality = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 0.0
    quality = min(max(quality, 0.0), 1.0)
    return ResonanceFit(E_r=E_r, Gamma=gamma, tau_nr=tau_bg, fit_quality=quality,
                        flagged=quality < FIT_QUALITY_THRESHOLD)


def resonance_scan(
    profile: PotentialProfile,
    constants: PhysicalConstants = NATURAL,
    E_range: tuple[float, float] = (0.05, 0.95),
    n_points: int = 2000,
) -> list[ResonanceFit]:
    """Locate |t|^2 maxima on a grid, refine each, and fit its delay Lorentzian.

    Returns an empty list when the profile has no cavity peaks in range.
    """
    e_min, e_max = map(float, E_range)
    if not 0 < e_min < e_max:
        raise EnergyDomainError("E_range must satisfy 0 < E_min < E_max")
    if profile.segments and e_max >= profile.heights[profile.heights > 0].min(initial=math.inf):
        raise EnergyDomainError("E_range must stay below the lowest barrier")
    if n_points < 100:
        raise ValueError("n_points must be at least 100")
    grid = np.linspace(e_min, e_max, n_points)
    lt = log_transmission(profile, constants, grid)
    idx = np.where((lt[1:-1] > lt[:-2]) & (lt[1:-1] > lt[2:]))[0] + 1
    fits = []
    for i in idx:
        e_peak = _refine_peak(profile, constants, grid[i - 1], grid[i + 1])
        log_peak = float(log_transmission(profile, constants, [e_peak])[0])
        gamma0 = _half_width(profile, constants, e_peak, log_peak, e_min, e_max)
        fit = fit_resonance(profile, constants, e_peak, gamma0)
        fits.append(ResonanceFit(**{**asdict(fit), "E_peak": e_peak, "peak_transmission": math.exp(log_peak)}))
    return fits


def predicted_resonance(profile: PotentialProfile, constants: PhysicalConstants, near: float,
                        bracket: float = 0.05) -> float:
    """Zero of the opaque-limit cavity denominator closest to ``near`` (equal-barrier double well)."""
    (left, gap, right), = profile.cavity_runs()
    vl, vr = profile.segments[left][1], profile.segments[right][1]

    def den(e):
        k = math.sqrt(2 * constants.mass * e) / constants.hbar
        cl = math.sqrt(2 * constants.mass * (vl - e)) / constants.hbar
        cr = math.sqrt(2 * constants.mass * (vr - e)) / constants.hbar
        return resonance_condition(k, cl, gap, cr)

    lo, hi = near * (1 - bracket), near * (1 + bracket)
    hi = min(hi, min(vl, vr) * (1 - 1e-9))
    grid = np.linspace(lo, hi, 201)
    vals = np.array([den(e) for e in grid])
    roots = [brentq(den, grid[i], grid[i + 1], xtol=1e-15)
             for i in np.where(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]]
    if not roots:
        raise ArithmeticError("no cavity resonance near the given energy")
    return float(min(roots, key=lambda r: abs(r - near)))
