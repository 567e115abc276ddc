# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: batched transfer sweeps and tridiagonal time stepping."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, exp, log, cos, sin, fabs

cnp.import_array()

ctypedef double complex cplx


cdef inline cplx csqrt_branch(double kin):
    # principal sqrt of a real number: i*sqrt(-kin) when negative
    if kin >= 0:
        return sqrt(kin)
    return 1j * sqrt(-kin)


def transfer_batch(double[::1] widths, double[::1] heights, double[::1] energies,
                   double hbar, double mass):
    """Right-to-left coefficient sweep for many energies.

    Returns (incident mantissa, reflection amplitude, log scale) per energy,
    with the right-lead coefficient fixed to 1 at the right edge.
    """
    cdef Py_ssize_t n = widths.shape[0], ne = energies.shape[0], i, j
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] inc = np.empty(ne, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] refl = np.empty(ne, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] logs = np.empty(ne, dtype=np.float64)
    cdef cplx f, b, nf, nb, ql, qr, rho, k0
    cdef double E, scale, l1, top, ph, peak, w, c2m = 2.0 * mass
    for i in range(ne):
        E = energies[i]
        k0 = csqrt_branch(c2m * E) / hbar
        f = 1.0
        b = 0.0
        scale = 0.0
        qr = k0
        for j in range(n, -1, -1):
            if j > 0:
                ql = csqrt_branch(c2m * (E - heights[j - 1])) / hbar
            else:
                ql = k0
            rho = qr / ql
            nf = 0.5 * ((1.0 + rho) * f + (1.0 - rho) * b)
            nb = 0.5 * ((1.0 - rho) * f + (1.0 + rho) * b)
            f = nf
            b = nb
            if j > 0:
                w = widths[j - 1]
                l1 = ql.imag * w
                ph = ql.real * w
                top = fabs(l1)
                f = f * exp(l1 - top) * (cos(ph) - 1j * sin(ph))
                b = b * exp(-l1 - top) * (cos(ph) + 1j * sin(ph))
                scale += top
            peak = max(abs(f), abs(b))
            f = f / peak
            b = b / peak
            scale += log(peak)
            qr = ql
        inc[i] = f
        refl[i] = b / f
        logs[i] = scale
    return inc, refl, logs


def thomas_factor(cplx[::1] lower, cplx[::1] diag, cplx[::1] upper):
    """Precompute the LU sweep of a tridiagonal matrix (no pivoting).

    Returns an opaque factor for :func:`cn_evolve`.
    """
    cdef Py_ssize_t n = diag.shape[0], i
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] cprime = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] inv_m = np.empty(n, dtype=np.complex128)
    cdef cplx m
    m = diag[0]
    inv_m[0] = 1.0 / m
    cprime[0] = upper[0] * inv_m[0]
    for i in range(1, n):
        m = diag[i] - lower[i] * cprime[i - 1]
        inv_m[i] = 1.0 / m
        cprime[i] = upper[i] * inv_m[i] if i < n - 1 else 0.0
    return (cprime, inv_m)


def cn_evolve(psi, Py_ssize_t n_steps, b_lower, b_diag, b_upper, a_lower, factor, probes, trace):
    """Advance psi in place by n_steps of A psi' = B psi.

    ``lower[i]`` couples row i to i-1, ``upper[i]`` row i to i+1 (Dirichlet
    walls); ``factor`` comes from :func:`thomas_factor` applied to A.
    ``trace[s, p]`` receives psi[probes[p]] after step s.
    """
    cprime, inv_m = factor
    _cn_evolve(psi, n_steps, b_lower, b_diag, b_upper, a_lower, cprime, inv_m,
               np.ascontiguousarray(probes, dtype=np.intp), trace)


cdef void _cn_evolve(cplx[::1] psi, Py_ssize_t n_steps,
                     cplx[::1] b_lower, cplx[::1] b_diag, cplx[::1] b_upper,
                     cplx[::1] a_lower, cplx[::1] cprime, cplx[::1] inv_m,
                     Py_ssize_t[::1] probes, cplx[:, ::1] trace):
    cdef Py_ssize_t n = psi.shape[0], i, s, p, npr = probes.shape[0]
    cdef cplx[::1] d = np.empty(n, dtype=np.complex128)
    cdef cplx prev, cur, r
    with nogil:
        for s in range(n_steps):
            # rhs = B psi fused with forward elimination
            prev = 0.0
            for i in range(n):
                cur = psi[i]
                r = b_diag[i] * cur
                if i > 0:
                    r = r + b_lower[i] * prev
                if i < n - 1:
                    r = r + b_upper[i] * psi[i + 1]
                if i > 0:
                    d[i] = (r - a_lower[i] * d[i - 1]) * inv_m[i]
                else:
                    d[i] = r * inv_m[i]
                prev = cur
            psi[n - 1] = d[n - 1]
            for i in range(n - 2, -1, -1):
                psi[i] = d[i] - cprime[i] * psi[i + 1]
            for p in range(npr):
                trace[s, p] = psi[probes[p]]
