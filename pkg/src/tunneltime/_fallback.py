"""Pure numpy/scipy implementations of the compiled kernels (same signatures)."""
from __future__ import annotations

import numpy as np
from scipy.linalg import solve_banded


def transfer_batch(widths, heights, energies, hbar, mass):
    widths = np.asarray(widths, dtype=float)
    heights = np.asarray(heights, dtype=float)
    E = np.asarray(energies, dtype=float)
    n = len(widths)
    k0 = np.sqrt((2.0 * mass * E).astype(complex)) / hbar
    f = np.ones_like(k0)
    b = np.zeros_like(k0)
    scale = np.zeros(E.shape)
    qr = k0
    for j in range(n, -1, -1):
        ql = np.sqrt((2.0 * mass * (E - heights[j - 1])).astype(complex)) / hbar if j > 0 else k0
        rho = qr / ql
        f, b = 0.5 * ((1 + rho) * f + (1 - rho) * b), 0.5 * ((1 - rho) * f + (1 + rho) * b)
        if j > 0:
            w = widths[j - 1]
            l1 = ql.imag * w
            ph = ql.real * w
            top = np.abs(l1)
            f = f * np.exp(l1 - top - 1j * ph)
            b = b * np.exp(-l1 - top + 1j * ph)
            scale = scale + top
        peak = np.maximum(np.abs(f), np.abs(b))
        f = f / peak
        b = b / peak
        scale = scale + np.log(peak)
        qr = ql
    return f, b / f, scale


def thomas_factor(lower, diag, upper):
    # solve_banded refactors every step; the "factor" is the banded matrix itself
    n = len(diag)
    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = np.asarray(upper)[:-1]
    ab[1] = diag
    ab[2, :-1] = np.asarray(lower)[1:]
    return ab


def cn_evolve(psi, n_steps, b_lower, b_diag, b_upper, a_lower, factor, probes, trace):
    ab = factor
    bl, bd, bu = np.asarray(b_lower), np.asarray(b_diag), np.asarray(b_upper)
    probes = np.asarray(probes)
    cur = np.asarray(psi)
    for s in range(n_steps):
        rhs = bd * cur
        rhs[1:] += bl[1:] * cur[:-1]
        rhs[:-1] += bu[:-1] * cur[1:]
        cur = solve_banded((1, 1), ab, rhs, overwrite_b=True, check_finite=False)
        trace[s, :] = cur[probes]
    psi[:] = cur
