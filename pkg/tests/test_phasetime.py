import math

import numpy as np
import pytest

from tunneltime.errors import DegenerateKinematicsError, EnergyDomainError, StepTooLargeError
from tunneltime.phasetime import cavity_guard_values, edge_phase, near_resonance, phase_time, phase_time_curve
from tunneltime.profile import NATURAL, PhysicalConstants, PotentialProfile


def test_canonical_point():
    res = phase_time(PotentialProfile.double_barrier(1.0, 20.0, 3.0), NATURAL, 0.5)
    assert res.tau == pytest.approx(2.0, rel=1e-6)
    assert not res.resonance_flag
    assert res.error_estimate < 1e-9
    assert res.reference_length == 43.0


@pytest.mark.parametrize("chi_a", [10, 15, 20, 25, 30, 40, 60])
def test_width_plateau(chi_a):
    res = phase_time(PotentialProfile.double_barrier(1.0, float(chi_a), 3.0), NATURAL, 0.5)
    assert res.tau == pytest.approx(2.0, rel=1e-6)


def test_gap_independence():
    taus = []
    for g in np.linspace(0.5, 10.0, 60):
        if abs(math.cos(g)) < 0.1:
            continue
        taus.append(phase_time(PotentialProfile.double_barrier(1.0, 20.0, g), NATURAL, 0.5).tau)
    taus = np.array(taus)
    assert (taus.max() - taus.min()) / taus.mean() < 1e-4


@pytest.mark.parametrize("widths, gaps", [([20, 25, 22], [3.0, 2.2]), ([20, 24, 21, 26], [3.0, 2.2, 4.1]),
                                          ([30, 12, 18], [0.7, 5.0])])
def test_barrier_trains(widths, gaps):
    p = PotentialProfile.barrier_train(1.0, widths, gaps)
    res = phase_time(p, NATURAL, 0.5)
    assert not res.resonance_flag
    assert res.tau == pytest.approx(2.0, rel=1e-4)


@pytest.mark.parametrize("D, E", [(10.0, 0.5), (3.0, 2.0), (25.0, 0.05)])
def test_free_profile(D, E):
    v = math.sqrt(2 * E)
    assert phase_time(PotentialProfile.free(D), NATURAL, E).tau == pytest.approx(D / v, rel=1e-10)


def test_free_profile_absolute():
    assert phase_time(PotentialProfile.free(10.0), NATURAL, 0.5).tau == pytest.approx(10.0, abs=1e-10)


def test_units():
    c = PhysicalConstants(hbar=2.0, mass=3.0)
    D, E = 4.0, 0.7
    v = math.sqrt(2 * E / c.mass)
    assert phase_time(PotentialProfile.free(D), c, E).tau == pytest.approx(D / v, rel=1e-10)


def test_domain_errors():
    p = PotentialProfile.double_barrier(1.0, 5.0, 2.0)
    with pytest.raises(EnergyDomainError):
        phase_time(p, NATURAL, 0.0)
    with pytest.raises(EnergyDomainError):
        phase_time(p, NATURAL, -1.0)
    with pytest.raises(EnergyDomainError):
        phase_time(p, NATURAL, 0.5, rel_step=0.6)
    with pytest.raises(DegenerateKinematicsError):
        phase_time(p, NATURAL, 1.0)
    with pytest.raises(DegenerateKinematicsError):
        phase_time(p, NATURAL, 1.0 - 1e-5)


def test_step_too_large_near_sharp_resonance():
    # chi a = 20 exactly on resonance: the peak is far narrower than the stencil
    p = PotentialProfile.double_barrier(1.0, 20.0, math.pi / 2)
    with pytest.raises(StepTooLargeError):
        phase_time(p, NATURAL, 0.5)


def test_resonance_flag():
    p = PotentialProfile.double_barrier(1.0, 4.0, math.pi / 2 + 0.05)
    assert phase_time(p, NATURAL, 0.5, rel_step=1e-7).resonance_flag
    assert near_resonance(p, NATURAL, [0.5])
    vals = cavity_guard_values(p, NATURAL, 0.5)
    assert len(vals) == 1 and abs(vals[0]) < 0.1
    # a single barrier has no cavity
    assert cavity_guard_values(PotentialProfile.single_barrier(1.0, 2.0), NATURAL, 0.5) == []


def test_curve_matches_pointwise():
    p = PotentialProfile.double_barrier(1.0, 3.0, 2.0)
    energies = np.linspace(0.1, 0.9, 9)
    curve = phase_time_curve(p, NATURAL, energies)
    point = [phase_time(p, NATURAL, e).tau for e in energies]
    assert np.allclose(curve, point, rtol=1e-6)


def test_edge_phase_backends_agree(kernels, monkeypatch):
    from tunneltime import backend

    p = PotentialProfile.barrier_train(1.0, [2.0, 3.0], [1.0])
    e = np.linspace(0.1, 0.9, 11)
    ref = edge_phase(p, NATURAL, e)
    monkeypatch.setattr(backend, "kernels", kernels)
    assert np.allclose(edge_phase(p, NATURAL, e), ref, atol=1e-12)


def test_si_magnitudes_scale_to_natural():
    # electron, nm lengths, eV energies: tau_SI = tau_nat * hbar / E0 with E0 = hbar^2 / (m L0^2)
    si = PhysicalConstants.si()
    L0 = 1e-9
    E0 = si.hbar**2 / (si.mass * L0**2)
    ev = 1.602176634e-19
    p_si = PotentialProfile.double_barrier(0.3 * ev, 1.5 * L0, 2 * L0)
    p_nat = PotentialProfile.double_barrier(0.3 * ev / E0, 1.5, 2.0)
    tau_si = phase_time(p_si, si, 0.1 * ev).tau
    tau_nat = phase_time(p_nat, NATURAL, 0.1 * ev / E0).tau
    assert tau_si == pytest.approx(tau_nat * si.hbar / E0, rel=1e-8)
