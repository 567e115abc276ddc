"""Spatial grids, wavepacket states and Gaussian initial conditions."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import ProfileError
from ..profile import NATURAL, PhysicalConstants, PotentialProfile

MIN_POINTS = 2**10


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    n_points: int
    dt: float

    def __post_init__(self):
        if self.n_points < MIN_POINTS:
            raise ValueError(f"n_points must be >= {MIN_POINTS}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        if not self.dt > 0:
            raise ValueError("dt must be positive")

    @classmethod
    def with_spacing(cls, x_min: float, x_max: float, dx: float, dt: float) -> "GridSpec":
        n = int(round((x_max - x_min) / dx)) + 1
        return cls(x_min, x_min + (n - 1) * dx, max(n, MIN_POINTS), dt)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    def index(self, x: float) -> int:
        return int(round((x - self.x_min) / self.dx))

    def check_lead_room(self, profile: PotentialProfile, sigma: float, widths: float = 10.0) -> None:
        """Require ``widths`` packet widths of free lead on both sides of the profile."""
        room = widths * sigma
        if self.x_min > -room or self.x_max < profile.extent + room:
            raise ValueError(
                f"grid [{self.x_min}, {self.x_max}] leaves less than {widths} packet widths "
                f"around the profile [0, {profile.extent}]"
            )


@dataclass(frozen=True)
class WavepacketState:
    psi: np.ndarray
    t: float
    grid: GridSpec
    absorbing: bool = False
    norm: float = field(default=math.nan)

    def __post_init__(self):
        if math.isnan(self.norm):
            object.__setattr__(self, "norm", float(np.sum(np.abs(self.psi) ** 2) * self.grid.dx))

    def density(self) -> np.ndarray:
        return np.abs(self.psi) ** 2

    def with_psi(self, psi: np.ndarray, t: float, absorbing: bool | None = None) -> "WavepacketState":
        return replace(self, psi=psi, t=t, norm=math.nan,
                       absorbing=self.absorbing if absorbing is None else absorbing)

    def probability(self, x_lo: float = -math.inf, x_hi: float = math.inf) -> float:
        x = self.grid.x
        mask = (x >= x_lo) & (x < x_hi)
        return float(np.sum(self.density()[mask]) * self.grid.dx)

    def centroid(self) -> float:
        rho = self.density()
        return float(np.sum(self.grid.x * rho) / np.sum(rho))

    def width(self) -> float:
        """Standard deviation of |psi|^2 in x."""
        rho = self.density()
        x = self.grid.x
        mu = np.sum(x * rho) / np.sum(rho)
        return float(math.sqrt(np.sum((x - mu) ** 2 * rho) / np.sum(rho)))

    def momentum_distribution(self) -> tuple[np.ndarray, np.ndarray]:
        """(k, |phi(k)|^2) normalised to unit sum."""
        phi = np.fft.fft(self.psi)
        k = 2 * np.pi * np.fft.fftfreq(self.grid.n_points, d=self.grid.dx)
        w = np.abs(phi) ** 2
        return k, w / w.sum()

    def mean_momentum(self) -> float:
        """Spectral mean wavenumber <k>."""
        k, w = self.momentum_distribution()
        return float(np.sum(k * w))

    def energy(self, profile: PotentialProfile | None = None, constants: PhysicalConstants = NATURAL) -> float:
        """<H> with the exact (spectral) kinetic operator."""
        k, w = self.momentum_distribution()
        kin = float(np.sum((constants.hbar * k) ** 2 / (2 * constants.mass) * w))
        if profile is None:
            return kin
        rho = self.density()
        return kin + float(np.sum(profile.potential(self.grid.x) * rho) / np.sum(rho))


def gaussian_width_law(sigma: float, t: float, constants: PhysicalConstants = NATURAL) -> float:
    """Position standard deviation of a free packet psi ~ exp(-(x-x0)^2 / (2 sigma^2))."""
    s = sigma * math.sqrt(1 + (constants.hbar * t / (constants.mass * sigma**2)) ** 2)
    return s / math.sqrt(2)


def init_gaussian(
    grid: GridSpec,
    x0: float,
    k0: float,
    sigma: float,
    profile: PotentialProfile | None = None,
) -> WavepacketState:
    """Unit-norm packet ``exp(-(x - x0)^2 / (2 sigma^2) + i k0 x)``.

    ``sigma`` is the amplitude width: <E> = hbar^2 k0^2 / 2m + hbar^2 / (4 m sigma^2).
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if profile is not None and x0 + 5 * sigma > 0:
        raise ProfileError(f"packet at x0={x0} overlaps the profile (need x0 <= -5 sigma = {-5 * sigma})")
    if sigma * k0 < 10:
        warnings.warn(f"sigma*k0 = {sigma * k0:.3g} < 10: packet is far from monochromatic", stacklevel=2)
    x = grid.x
    psi = np.exp(-((x - x0) ** 2) / (2 * sigma**2) + 1j * k0 * x)
    psi /= math.sqrt(np.sum(np.abs(psi) ** 2) * grid.dx)
    return WavepacketState(psi=psi, t=0.0, grid=grid)
