"""Command-line entry point: ``tunneltime <subcommand> [options]``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
import yaml

from ..errors import TunnelTimeError
from ..phasetime import FAR_FROM_RESONANCE, phase_time
from ..profile import NATURAL, PhysicalConstants, dump_profile, load_profile
from ..resonance import resonance_scan
from ..scattering import solve_scattering
from ..wavepacket.experiment import arrival_experiment, default_setup
from .acceptance import reproduce
from .emit import emit
from .sweep import OUTPUTS, load_sweep, run_sweep
from .waveguide import WaveguideParams, dispersion_residuals, group_delay_from_phase_time, waveguide_map


class UsageError(Exception):
    """Invalid option combination (exit status 2)."""


def _constants(args, from_file: PhysicalConstants | None) -> PhysicalConstants:
    if args.units == "si":
        return PhysicalConstants.si()
    if args.units == "natural":
        return NATURAL
    return from_file or NATURAL


def _load(args):
    if not args.profile:
        raise UsageError("--profile is required")
    profile, consts = load_profile(args.profile)
    return profile, _constants(args, consts)


def _guard(args) -> float:
    return args.tolerance if args.tolerance is not None else FAR_FROM_RESONANCE


def _complex_fields(name: str, z: complex) -> dict:
    return {f"{name}_re": float(z.real), f"{name}_im": float(z.imag)}


def cmd_scatter(args) -> list[dict]:
    profile, c = _load(args)
    sol = solve_scattering(profile, c, args.energy, incidence=args.incidence)
    if args.coefficients:
        rows = []
        for i, (q, (f, b)) in enumerate(zip(sol.wavenumbers, sol.region_coeffs)):
            x_left = float(sol.edges[i - 1]) if i > 0 else float("-inf")
            rows.append({"region": i, "x_left": x_left, **_complex_fields("q", q),
                         **_complex_fields("f", f), **_complex_fields("b", b)})
        return rows
    return [{"energy": sol.energy, "R": sol.R, "T": sol.T, "ln_abs_t": float(sol.log_transmission),
             "unitarity_defect": abs(sol.R + sol.T - 1.0),
             **_complex_fields("r", sol.reflection_amp), **_complex_fields("t", sol.transmission_amp)}]


def cmd_phase_time(args) -> list[dict]:
    profile, c = _load(args)
    if args.energies:
        lo, hi, n = args.energies
        energies = np.linspace(float(lo), float(hi), int(n))
    elif args.energy is not None:
        energies = [args.energy]
    else:
        raise UsageError("give --energy or --energies LO HI N")
    rows = []
    for e in energies:
        try:
            rows.append({**phase_time(profile, c, float(e), guard=_guard(args)).to_record(), "status": "ok"})
        except TunnelTimeError as exc:
            rows.append({"energy": float(e), "status": f"failed: {type(exc).__name__}: {exc}"})
    return rows


def cmd_sweep(args) -> list[dict]:
    spec = load_sweep(args.spec, guard=args.tolerance)
    if args.units is not None:
        spec = replace(spec, constants=_constants(args, None))
    return run_sweep(spec, jobs=args.jobs)


def cmd_resonances(args) -> list[dict]:
    profile, c = _load(args)
    fits = resonance_scan(profile, c, tuple(args.range), n_points=args.points)
    return [{"index": i, **f.to_record()} for i, f in enumerate(fits)]


def cmd_wavepacket(args) -> list[dict]:
    if args.waveguide:
        raise UsageError("the waveguide correspondence holds for stationary problems only; "
                         "it cannot drive a wavepacket run")
    profile, c = _load(args)
    setup = default_setup(profile, c, args.energy, args.sigma_k, detector_offset=args.detector_offset,
                          dx=args.dx, dt=args.dt)
    kw = {}
    if args.frames:
        kw.update(frame_dir=args.frames, frame_every=args.frame_every)
    arr, prop, setup = arrival_experiment(profile, c, args.energy, args.sigma_k, setup=setup,
                                          absorbing=not args.no_absorb, **kw)
    return [{**arr.to_record(), "energy": args.energy, "sigma": setup.sigma, "k0": setup.k0,
             "x0": setup.x0, "dx": setup.grid.dx, "dt": setup.grid.dt, "n_steps": setup.n_steps,
             "absorbed": prop.absorbed}]


def cmd_waveguide(args) -> list[dict]:
    outputs = [o.strip() for o in args.outputs.split(",") if o.strip()]
    if "wavepacket_arrival" in outputs:
        raise UsageError("the waveguide correspondence holds for stationary problems only; "
                         "wavepacket_arrival is not available here")
    bad = set(outputs) - {"phase_time", "transmission"}
    if bad:
        raise UsageError(f"unsupported waveguide outputs {sorted(bad)}")
    doc = yaml.safe_load(Path(args.params).read_text(encoding="utf-8"))
    params = WaveguideParams.from_dict(doc)
    profile, c, energy = waveguide_map(params)
    rk, rchi = dispersion_residuals(params)
    row = {"energy": energy, "height": profile.max_height, "k": float(np.sqrt(2 * energy)),
           "chi": float(np.sqrt(2 * (profile.max_height - energy))),
           "dispersion_residual_k": rk, "dispersion_residual_chi": rchi}
    if "transmission" in outputs:
        sol = solve_scattering(profile, c, energy)
        row.update(T=sol.T, ln_abs_t=float(sol.log_transmission))
    if "phase_time" in outputs:
        res = phase_time(profile, c, energy, guard=_guard(args))
        row.update(tau=res.tau, group_delay_s=group_delay_from_phase_time(res.tau, params),
                   near_resonance=res.resonance_flag)
    if args.dump_profile:
        dump_profile(profile, args.dump_profile, c)
    return [row]


def cmd_reproduce(args) -> list[dict]:
    checks = [int(s) for s in args.checks.split(",")] if args.checks else None
    results, report = reproduce(checks, seed=args.seed)
    print(report, file=sys.stderr if args.out in (None, "-") and args.records else sys.stdout)
    args._failed = not all(r.passed for r in results)
    return [r.to_record() for r in results] if args.records or args.out not in (None, "-") else []


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--profile", help="profile file (YAML, or JSON by suffix)")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    common.add_argument("--units", choices=("natural", "si"), default=None,
                        help="constants: natural (hbar = m = 1) or SI electron; default from the profile file")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized property checks")
    common.add_argument("--tolerance", type=float, default=None,
                        help=f"near-resonance guard threshold (default {FAR_FROM_RESONANCE})")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="tunneltime", description="Stationary and time-dependent tunneling times.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("scatter", parents=[common], help="amplitudes at one energy")
    s.add_argument("--energy", type=float, required=True)
    s.add_argument("--incidence", choices=("left", "right"), default="left")
    s.add_argument("--coefficients", action="store_true", help="emit per-region coefficients instead")
    s.set_defaults(func=cmd_scatter)

    s = sub.add_parser("phase-time", parents=[common], help="phase time at an energy or on a grid")
    s.add_argument("--energy", type=float)
    s.add_argument("--energies", nargs=3, metavar=("LO", "HI", "N"))
    s.set_defaults(func=cmd_phase_time)

    s = sub.add_parser("sweep", parents=[common], help="run a sweep spec file")
    s.add_argument("spec", help="sweep spec (YAML or JSON)")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("resonances", parents=[common], help="transmission peaks with Lorentzian delay fits")
    s.add_argument("--range", nargs=2, type=float, metavar=("E_MIN", "E_MAX"), required=True)
    s.add_argument("--points", type=int, default=2000)
    s.set_defaults(func=cmd_resonances)

    s = sub.add_parser("wavepacket", parents=[common], help="Gaussian packet arrival at a detector")
    s.add_argument("--energy", type=float, required=True, help="carrier energy hbar^2 k0^2 / 2m")
    s.add_argument("--sigma-k", type=float, default=50.0, help="sigma * k0")
    s.add_argument("--detector-offset", type=float, default=None, help="detector distance past the profile")
    s.add_argument("--dx", type=float, default=None)
    s.add_argument("--dt", type=float, default=None)
    s.add_argument("--no-absorb", action="store_true", help="disable absorbing boundary layers")
    s.add_argument("--frames", help="directory for density frame dumps")
    s.add_argument("--frame-every", type=int, default=500)
    s.add_argument("--waveguide", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_wavepacket)

    s = sub.add_parser("waveguide", parents=[common], help="map waveguide parameters to a barrier profile")
    s.add_argument("params", help="waveguide parameter file (YAML)")
    s.add_argument("--outputs", default="phase_time,transmission",
                   help=f"comma list from {', '.join(o for o in OUTPUTS if o != 'resonances')}")
    s.add_argument("--dump-profile", help="also write the mapped profile here")
    s.set_defaults(func=cmd_waveguide)

    s = sub.add_parser("reproduce", parents=[common], help="run the acceptance suite")
    s.add_argument("--checks", help="comma list of check numbers (default all)")
    s.add_argument("--records", action="store_true", help="also emit check records as a table")
    s.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    args._failed = False
    try:
        rows = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (TunnelTimeError, OSError, KeyError, yaml.YAMLError, json.JSONDecodeError) as exc:
        print(f"tunneltime: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if rows:
        emit(rows, args.format, args.out)
    return 1 if args._failed else 0


if __name__ == "__main__":
    sys.exit(main())
