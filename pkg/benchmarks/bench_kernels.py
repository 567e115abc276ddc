"""Compiled vs. numpy/scipy kernels: batched transfer sweeps and Crank-Nicolson steps.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--points 16384] [--steps 2000]
"""
from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from tunneltime import backend
from tunneltime.profile import NATURAL, PotentialProfile
from tunneltime.wavepacket import CrankNicolson, GridSpec, init_gaussian


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def bench_transfer(kernels, n_energies, n_barriers):
    p = PotentialProfile.barrier_train(1.0, [3.0] * n_barriers, [2.0] * (n_barriers - 1))
    e = np.linspace(0.01, 0.99, n_energies)
    w, h = p.widths, p.heights
    return lambda: kernels.transfer_batch(w, h, e, NATURAL.hbar, NATURAL.mass)


def bench_cn(kernels, n_points, n_steps):
    p = PotentialProfile.double_barrier(1.0, 2.0, 3.0)
    grid = GridSpec(-200.0, 200.0, n_points, 0.01)
    psi0 = init_gaussian(grid, -100.0, 1.0, 20.0, profile=p).psi
    stepper = CrankNicolson(grid, p, NATURAL, kernels=kernels)
    probes = np.array([grid.index(50.0)], dtype=np.intp)

    def run():
        stepper.run(psi0.copy(), n_steps, probes)

    return run


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--energies", type=int, default=20000)
    ap.add_argument("--barriers", type=int, default=4)
    ap.add_argument("--points", type=int, default=16384)
    ap.add_argument("--steps", type=int, default=2000)
    args = ap.parse_args(argv)

    names = backend.available()
    cases = [
        (f"transfer_batch {args.energies} E x {args.barriers} barriers",
         lambda k: bench_transfer(k, args.energies, args.barriers)),
        (f"cn_evolve {args.points} pts x {args.steps} steps", lambda k: bench_cn(k, args.points, args.steps)),
    ]
    print(f"{'case':48s} {'backend':9s} {'best [s]':>10s} {'median [s]':>11s} {'speedup':>8s}")
    for label, make in cases:
        ref = None
        for name in reversed(names):  # python first, as the reference
            best, med = best_of(make(backend.get(name)), args.repeat)
            ref = ref or best
            print(f"{label:48s} {name:9s} {best:10.4f} {med:11.4f} {ref / best:7.1f}x")
    if "compiled" not in names:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
