import numpy as np
import pytest

from tunneltime import backend
from tunneltime.profile import NATURAL, PotentialProfile
from tunneltime.scattering import solve_scattering


def test_active_backend_is_listed():
    assert backend.NAME in backend.available()
    assert backend.get() is backend.kernels
    with pytest.raises(ValueError):
        backend.get("fortran")


def test_transfer_batch_matches_solver(kernels):
    p = PotentialProfile.barrier_train(1.0, [3.0, 30.0, 1.0], [2.0, 0.5])
    energies = np.array([0.1, 0.37, 0.5, 0.93, 1.4])
    inc, refl, logs = kernels.transfer_batch(p.widths, p.heights, energies, 1.0, 1.0)
    for e, i, r, s in zip(energies, inc, refl, logs):
        sol = solve_scattering(p, NATURAL, e)
        assert 1 / (i * np.exp(s)) == pytest.approx(sol.transmission_edge, rel=1e-11)
        assert r == pytest.approx(sol.reflection_amp, rel=1e-11, abs=1e-15)


def test_tridiagonal_step_matches_dense(kernels, rng):
    n = 64
    lower = rng.normal(size=n) + 1j * rng.normal(size=n)
    upper = rng.normal(size=n) + 1j * rng.normal(size=n)
    diag = 6 + rng.normal(size=n) + 1j * rng.normal(size=n)
    lower[0] = upper[-1] = 0
    b_l, b_d, b_u = lower.conj(), diag.conj(), upper.conj()
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    a = np.diag(diag) + np.diag(lower[1:], -1) + np.diag(upper[:-1], 1)
    b = np.diag(b_d) + np.diag(b_l[1:], -1) + np.diag(b_u[:-1], 1)
    expected = psi.copy()
    for _ in range(3):
        expected = np.linalg.solve(a, b @ expected)
    factor = kernels.thomas_factor(lower, diag, upper)
    probes = np.array([0, 10, n - 1], dtype=np.intp)
    trace = np.empty((3, 3), complex)
    work = psi.copy()
    kernels.cn_evolve(work, 3, b_l, b_d, b_u, lower, factor, probes, trace)
    assert np.allclose(work, expected, rtol=1e-12, atol=1e-12)
    assert np.allclose(trace[-1], expected[probes])
