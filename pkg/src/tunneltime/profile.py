"""Piecewise-constant potentials, physical constants and kinematics.

A profile is an ordered list of ``(width, height)`` segments starting at
``x = 0``, flanked by semi-infinite zero-potential leads.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import yaml

from .errors import DegenerateKinematicsError, EnergyDomainError, ProfileError

#: Relative tolerance below which E is considered equal to a segment height.
DEGENERACY_TOL = 1e-12

HBAR_SI = 1.054571817e-34
ELECTRON_MASS_SI = 9.1093837015e-31


@dataclass(frozen=True)
class PhysicalConstants:
    """Reduced Planck constant and particle mass (natural units by default)."""

    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise ValueError("hbar and mass must be strictly positive")

    @classmethod
    def si(cls) -> "PhysicalConstants":
        """Electron in SI units."""
        return cls(hbar=HBAR_SI, mass=ELECTRON_MASS_SI)

    def wavenumber(self, kinetic: complex) -> complex:
        """Complex wavenumber sqrt(2 m (E - V)) / hbar.

        For ``E < V`` the principal branch yields ``i * chi`` with ``chi > 0``,
        so ``exp(i q x)`` is the decaying wave.
        """
        return np.sqrt(2.0 * self.mass * complex(kinetic)) / self.hbar

    def energy(self, k: float) -> float:
        return (self.hbar * k) ** 2 / (2.0 * self.mass)


NATURAL = PhysicalConstants()


@dataclass(frozen=True)
class Kinematics:
    """Free-lead wavenumber, velocity and per-height decay constants at energy E."""

    energy: float
    constants: PhysicalConstants = NATURAL

    def __post_init__(self):
        if not self.energy > 0:
            raise EnergyDomainError(f"energy must be positive, got {self.energy!r}")

    @property
    def k(self) -> float:
        return math.sqrt(2.0 * self.constants.mass * self.energy) / self.constants.hbar

    @property
    def velocity(self) -> float:
        return self.constants.hbar * self.k / self.constants.mass

    def chi(self, height: float) -> float:
        """Decay constant sqrt(2 m (V - E)) / hbar for a classically forbidden segment."""
        if not height > self.energy:
            raise ValueError(f"chi is only real for V > E (V={height}, E={self.energy})")
        return math.sqrt(2.0 * self.constants.mass * (height - self.energy)) / self.constants.hbar

    def q(self, height: float) -> complex:
        """Local complex wavenumber; raises on E == V."""
        check_degenerate(self.energy, height)
        return self.constants.wavenumber(self.energy - height)


def check_degenerate(energy: float, height: float) -> None:
    if abs(energy - height) <= DEGENERACY_TOL * max(abs(energy), abs(height)):
        raise DegenerateKinematicsError(
            f"E={energy!r} coincides with segment height {height!r}; nudge the energy"
        )


@dataclass(frozen=True)
class PotentialProfile:
    """Ordered constant-potential segments; leads on both sides are at V = 0.

    Zero-width segments are allowed and are physically inert.
    """

    segments: tuple[tuple[float, float], ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        segs = tuple((float(w), float(v)) for w, v in self.segments)
        for w, v in segs:
            if not (math.isfinite(w) and w >= 0):
                raise ProfileError(f"segment width must be finite and >= 0, got {w!r}")
            if not (math.isfinite(v) and v >= 0):
                raise ProfileError(f"segment height must be finite and >= 0, got {v!r}")
        object.__setattr__(self, "segments", segs)

    # construction helpers -------------------------------------------------

    @classmethod
    def from_segments(cls, segments: Iterable[Sequence[float]], name: str = "") -> "PotentialProfile":
        return cls(tuple((w, v) for w, v in segments), name=name)

    @classmethod
    def free(cls, extent: float) -> "PotentialProfile":
        return cls(((extent, 0.0),), name="free")

    @classmethod
    def single_barrier(cls, height: float, width: float) -> "PotentialProfile":
        return cls(((width, height),), name="single")

    @classmethod
    def double_barrier(cls, height: float, width: float, gap: float) -> "PotentialProfile":
        """Two equal barriers of width ``a`` separated by ``gap = L - a``."""
        return cls(((width, height), (gap, 0.0), (width, height)), name="double")

    @classmethod
    def barrier_train(
        cls, height: float | Sequence[float], widths: Sequence[float], gaps: Sequence[float]
    ) -> "PotentialProfile":
        """``len(widths)`` barriers with ``len(widths) - 1`` free gaps between them."""
        if len(gaps) != max(len(widths) - 1, 0):
            raise ProfileError("need exactly one gap between consecutive barriers")
        heights = [height] * len(widths) if np.isscalar(height) else list(height)
        segs = []
        for i, (w, v) in enumerate(zip(widths, heights)):
            if i:
                segs.append((gaps[i - 1], 0.0))
            segs.append((w, v))
        return cls(tuple(segs), name=f"train{len(widths)}")

    # geometry ---------------------------------------------------------------

    @property
    def widths(self) -> np.ndarray:
        return np.array([w for w, _ in self.segments], dtype=float)

    @property
    def heights(self) -> np.ndarray:
        return np.array([v for _, v in self.segments], dtype=float)

    @property
    def extent(self) -> float:
        """Total length D of the potential region."""
        return float(sum(w for w, _ in self.segments))

    @property
    def edges(self) -> np.ndarray:
        """Interface positions, starting at 0 and ending at the extent."""
        return np.concatenate([[0.0], np.cumsum(self.widths)])

    def potential(self, x) -> np.ndarray:
        """Evaluate V(x); each segment is closed on the left."""
        x = np.asarray(x, dtype=float)
        v = np.zeros_like(x)
        edges = self.edges
        for (w, h), lo, hi in zip(self.segments, edges[:-1], edges[1:]):
            if w > 0:
                v[(x >= lo) & (x < hi)] = h
        return v

    def cell_average(self, x, dx: float) -> np.ndarray:
        """Mean of V over [x - dx/2, x + dx/2]; keeps barrier areas exact on a grid."""
        x = np.asarray(x, dtype=float)
        v = np.zeros_like(x)
        edges = self.edges
        for (w, h), lo, hi in zip(self.segments, edges[:-1], edges[1:]):
            if w > 0 and h != 0:
                overlap = np.minimum(x + dx / 2, hi) - np.maximum(x - dx / 2, lo)
                v += h * np.clip(overlap, 0.0, None) / dx
        return v

    @property
    def max_height(self) -> float:
        return float(self.heights.max()) if self.segments else 0.0

    def barrier_indices(self) -> list[int]:
        return [i for i, (w, v) in enumerate(self.segments) if v > 0 and w > 0]

    def cavity_runs(self) -> list[tuple[int, float, int]]:
        """Free stretches bounded by barriers on both sides: (left barrier, gap width, right barrier)."""
        out = []
        last_barrier = None
        gap = 0.0
        for i, (w, v) in enumerate(self.segments):
            if v > 0 and w > 0:
                if last_barrier is not None and gap > 0:
                    out.append((last_barrier, gap, i))
                last_barrier, gap = i, 0.0
            elif v == 0:
                gap += w
        return out

    def reversed(self) -> "PotentialProfile":
        return PotentialProfile(tuple(reversed(self.segments)), name=self.name)

    def is_symmetric(self) -> bool:
        return self.segments == tuple(reversed(self.segments))

    def with_segment(self, index: int, width: float | None = None, height: float | None = None):
        segs = list(self.segments)
        w, v = segs[index]
        segs[index] = (w if width is None else width, v if height is None else height)
        return PotentialProfile(tuple(segs), name=self.name)

    def check_energy(self, energy: float) -> None:
        if not energy > 0:
            raise EnergyDomainError(f"energy must be positive, got {energy!r}")
        for _, v in self.segments:
            check_degenerate(energy, v)

    # serialization ----------------------------------------------------------

    def to_dict(self, constants: PhysicalConstants | None = None) -> dict:
        doc: dict = {}
        if self.name:
            doc["name"] = self.name
        if constants is not None:
            doc["constants"] = {"hbar": constants.hbar, "mass": constants.mass}
        doc["segments"] = [{"width": w, "height": v} for w, v in self.segments]
        return doc


def profile_from_dict(doc: dict) -> tuple[PotentialProfile, PhysicalConstants | None]:
    """Parse the profile document schema (see README)."""
    if not isinstance(doc, dict) or "segments" not in doc:
        raise ProfileError("profile document needs a 'segments' list")
    segs = []
    for item in doc["segments"]:
        if isinstance(item, dict):
            try:
                segs.append((float(item["width"]), float(item["height"])))
            except KeyError as exc:
                raise ProfileError(f"segment entry missing {exc}") from None
        else:
            w, v = item
            segs.append((float(w), float(v)))
    constants = None
    if "constants" in doc and doc["constants"] is not None:
        c = doc["constants"]
        constants = PhysicalConstants(hbar=float(c.get("hbar", 1.0)), mass=float(c.get("mass", 1.0)))
    return PotentialProfile(tuple(segs), name=str(doc.get("name", ""))), constants


def load_profile(path: str | Path) -> tuple[PotentialProfile, PhysicalConstants | None]:
    """Read a YAML (or JSON) profile file."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    doc = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    return profile_from_dict(doc)


def dump_profile(profile: PotentialProfile, path: str | Path, constants: PhysicalConstants | None = None) -> None:
    path = Path(path)
    doc = profile.to_dict(constants)
    if path.suffix == ".json":
        path.write_text(json.dumps(doc, indent=2), encoding="utf-8")
    else:
        path.write_text(yaml.safe_dump(doc, sort_keys=False), encoding="utf-8")
