"""Parameter sweeps over a base profile with flat, provenance-carrying records."""
from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from ..errors import ProfileError, TunnelTimeError
from ..phasetime import FAR_FROM_RESONANCE, cavity_guard_values, phase_time
from ..profile import NATURAL, PhysicalConstants, PotentialProfile, profile_from_dict
from ..resonance import resonance_scan
from ..scattering import solve_scattering
from ..wavepacket.experiment import arrival_experiment

SWEPT_PARAMETERS = ("barrier_width", "gap_width", "energy", "barrier_count")
OUTPUTS = ("phase_time", "transmission", "resonances", "wavepacket_arrival")


@dataclass(frozen=True)
class SweepSpec:
    """What to vary, over which values, and which observables to record.

    ``barrier_width`` and ``gap_width`` set every barrier (every cavity) of
    the base profile to the grid value.  ``barrier_count`` rebuilds an
    N-barrier train from the first barrier and the first cavity.
    """

    base_profile: PotentialProfile
    swept_parameter: str
    grid: tuple[float, ...]
    outputs: tuple[str, ...] = ("phase_time",)
    energy: float = 0.5
    constants: PhysicalConstants = NATURAL
    guard: float = FAR_FROM_RESONANCE
    E_range: tuple[float, float] | None = None
    sigma_k: float = 50.0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        grid = tuple(float(v) for v in self.grid)
        object.__setattr__(self, "grid", grid)
        if self.swept_parameter not in SWEPT_PARAMETERS:
            raise ValueError(f"swept_parameter must be one of {SWEPT_PARAMETERS}")
        unknown = set(self.outputs) - set(OUTPUTS)
        if unknown or not self.outputs:
            raise ValueError(f"outputs must be a nonempty subset of {OUTPUTS}")
        # canonical order keeps the emitted table independent of how outputs were listed
        object.__setattr__(self, "outputs", tuple(o for o in OUTPUTS if o in self.outputs))
        if not grid:
            raise ValueError("grid must be nonempty")
        steps = np.diff(grid)
        if len(grid) > 1 and not (np.all(steps > 0) or np.all(steps < 0)):
            raise ValueError("grid must be strictly monotone")
        p = self.base_profile
        if self.swept_parameter in ("barrier_width", "barrier_count") and not p.barrier_indices():
            raise ProfileError(f"{self.swept_parameter} sweep needs a profile with a barrier")
        if self.swept_parameter == "gap_width" and not p.cavity_runs():
            raise ProfileError("gap_width sweep needs a profile with a gap between barriers")
        if self.swept_parameter == "barrier_count":
            if any(v != int(v) or v < 1 for v in grid):
                raise ValueError("barrier_count grid values must be positive integers")
            if max(grid) > 1 and not p.cavity_runs():
                raise ProfileError("barrier_count > 1 needs a gap in the base profile to copy")
        if self.swept_parameter == "energy" and min(grid) <= 0:
            raise ValueError("energies must be positive")
        if self.swept_parameter in ("barrier_width", "gap_width") and min(grid) < 0:
            raise ValueError("widths must be >= 0")

    def profile_at(self, value: float) -> PotentialProfile:
        p = self.base_profile
        kind = self.swept_parameter
        if kind == "energy":
            return p
        if kind == "barrier_width":
            return PotentialProfile(
                tuple((value, v) if i in p.barrier_indices() else (w, v) for i, (w, v) in enumerate(p.segments)),
                name=p.name,
            )
        if kind == "gap_width":
            return _with_gaps(p, value)
        first = p.barrier_indices()[0]
        width, height = p.segments[first]
        n = int(value)
        gap = p.cavity_runs()[0][1] if n > 1 else 0.0
        return PotentialProfile.barrier_train(height, [width] * n, [gap] * (n - 1))

    def energy_at(self, value: float) -> float:
        return value if self.swept_parameter == "energy" else self.energy

    def to_dict(self) -> dict:
        doc = {
            "base_profile": self.base_profile.to_dict(self.constants),
            "swept_parameter": self.swept_parameter,
            "grid": list(self.grid),
            "outputs": list(self.outputs),
            "energy": self.energy,
            "guard": self.guard,
            "sigma_k": self.sigma_k,
        }
        if self.E_range is not None:
            doc["E_range"] = list(self.E_range)
        if self.name:
            doc["name"] = self.name
        return doc

    @property
    def spec_hash(self) -> str:
        text = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    @classmethod
    def from_dict(cls, doc: dict, guard: float | None = None) -> "SweepSpec":
        profile, constants = profile_from_dict(doc["base_profile"])
        rng = doc.get("E_range")
        return cls(
            base_profile=profile,
            swept_parameter=doc["swept_parameter"],
            grid=tuple(doc["grid"]),
            outputs=tuple(doc.get("outputs", ("phase_time",))),
            energy=float(doc.get("energy", 0.5)),
            constants=constants or NATURAL,
            guard=float(guard if guard is not None else doc.get("guard", FAR_FROM_RESONANCE)),
            E_range=tuple(map(float, rng)) if rng is not None else None,
            sigma_k=float(doc.get("sigma_k", 50.0)),
            name=str(doc.get("name", "")),
        )


def _with_gaps(profile: PotentialProfile, gap: float) -> PotentialProfile:
    """Replace every free stretch between two barriers by a single gap of width ``gap``."""
    barriers = profile.barrier_indices()
    first, last = barriers[0], barriers[-1]
    segs = list(profile.segments[: first + 1])
    pending = False
    for i in range(first + 1, last + 1):
        w, v = profile.segments[i]
        if i in barriers:
            if pending:
                segs.append((gap, 0.0))
            segs.append((w, v))
            pending = False
        elif v == 0:
            pending = True
        else:
            segs.append((w, v))
    segs.extend(profile.segments[last + 1:])
    return PotentialProfile(tuple(segs), name=profile.name)


def load_sweep(path: str | Path, guard: float | None = None) -> SweepSpec:
    """Read a YAML (or JSON) sweep document."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    doc = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    return SweepSpec.from_dict(doc, guard=guard)


def _guarded(profile, constants, energy, guard) -> bool:
    try:
        return any(abs(v) < guard for v in cavity_guard_values(profile, constants, energy))
    except ValueError:
        return False


def _observe(spec: SweepSpec, output: str, profile: PotentialProfile, energy: float) -> tuple[dict, bool]:
    """Values for one output at one point, plus whether a guard was tripped."""
    c = spec.constants
    if output == "phase_time":
        res = phase_time(profile, c, energy, guard=spec.guard)
        return {"energy": energy, "tau": res.tau, "error_estimate": res.error_estimate,
                "reference_length": res.reference_length}, res.resonance_flag
    if output == "transmission":
        sol = solve_scattering(profile, c, energy)
        return {"energy": energy, "T": sol.T, "R": sol.R, "ln_abs_t": float(sol.log_transmission),
                "unitarity_defect": abs(sol.R + sol.T - 1.0),
                "t_re": sol.transmission_amp.real, "t_im": sol.transmission_amp.imag}, False
    if output == "resonances":
        heights = profile.heights[profile.heights > 0]
        rng = spec.E_range or (0.02 * heights.min(), 0.98 * heights.min())
        fits = resonance_scan(profile, c, rng)
        row = {"n_resonances": len(fits)}
        if fits:
            f = fits[0]
            row.update(E_r=f.E_r, Gamma=f.Gamma, tau_nr=f.tau_nr, fit_quality=f.fit_quality)
        return row, any(f.flagged for f in fits)
    # wavepacket_arrival
    arr, prop, _ = arrival_experiment(profile, c, energy, sigma_k=spec.sigma_k)
    return {"energy": energy, "t_peak": arr.t_peak, "t_centroid": arr.t_centroid,
            "transmitted_fraction": arr.transmitted_fraction, "detector_x": arr.detector_x}, False


def run_point(spec: SweepSpec, index: int) -> list[dict]:
    """All requested outputs at grid point ``index``; failures become flagged rows."""
    value = spec.grid[index]
    energy = spec.energy_at(value)
    head = {"spec_hash": spec.spec_hash, "index": index, "parameter": spec.swept_parameter, "value": value}
    rows = []
    try:
        profile = spec.profile_at(value)
        guarded = _guarded(profile, spec.constants, energy, spec.guard)
    except TunnelTimeError as exc:
        return [{**head, "output": o, "status": "failed", "near_resonance": False,
                 "message": f"{type(exc).__name__}: {exc}"} for o in spec.outputs]
    for output in spec.outputs:
        try:
            values, tripped = _observe(spec, output, profile, energy)
            flag = guarded or tripped
            rows.append({**head, "output": output, "status": "flagged" if flag else "ok",
                         "near_resonance": guarded, "message": "", **values})
        except TunnelTimeError as exc:
            rows.append({**head, "output": output, "status": "failed", "near_resonance": guarded,
                         "message": f"{type(exc).__name__}: {exc}"})
    return rows


def _run_point_args(args):
    return run_point(*args)


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[dict]:
    """Evaluate every grid point; rows are ordered by grid index, then output."""
    n = len(spec.grid)
    if jobs <= 1 or n == 1:
        chunks = [run_point(spec, i) for i in range(n)]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, n)) as pool:
            chunks = list(pool.map(_run_point_args, [(spec, i) for i in range(n)]))
    return [row for chunk in chunks for row in chunk]


def hartman_plateau(energy: float = 0.5, height: float = 1.0, gap: float = 3.0,
                    chi_a=(10, 15, 20, 25, 30), constants: PhysicalConstants = NATURAL) -> list[dict]:
    """Phase time of an equal double barrier against chi * a."""
    chi = math.sqrt(2 * constants.mass * (height - energy)) / constants.hbar
    spec = SweepSpec(PotentialProfile.double_barrier(height, 1.0, gap), "barrier_width",
                     tuple(ca / chi for ca in chi_a), ("phase_time",), energy=energy, constants=constants)
    rows = run_sweep(spec)
    return [{"chi_a": ca, "a": r["value"], "tau": r["tau"]} for ca, r in zip(chi_a, rows)]
