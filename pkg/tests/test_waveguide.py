import math

import pytest

from tunneltime.errors import MappingError
from tunneltime.harness.waveguide import (
    SPEED_OF_LIGHT,
    WaveguideParams,
    dispersion_residuals,
    group_delay_from_phase_time,
    waveguide_map,
)
from tunneltime.phasetime import phase_time
from tunneltime.resonance import resonance_condition

WN, WU = 0.02286, 0.015


def params(freq=9.0e9, lengths=(0.04, 0.02, 0.04)):
    return WaveguideParams(WN, WU, freq, lengths)


def test_dispersion_round_trip():
    for f in (7.0e9, 8.5e9, 9.5e9):
        rk, rchi = dispersion_residuals(params(f))
        assert rk < 1e-12 and rchi < 1e-12


def test_two_undersized_sections_give_double_barrier():
    profile, constants, energy = waveguide_map(params())
    (a1, v1), (g, v0), (a2, v2) = profile.segments
    assert (a1, g, a2) == (0.04, 0.02, 0.04)
    assert v0 == 0.0 and v1 == v2 > energy
    w = 2 * math.pi * 9.0e9
    assert 2 * energy == pytest.approx((w**2 - (math.pi * SPEED_OF_LIGHT / WN) ** 2) / SPEED_OF_LIGHT**2, rel=1e-12)


def test_cutoff_errors():
    cutoff_u = SPEED_OF_LIGHT / (2 * WU)
    with pytest.raises(MappingError):
        waveguide_map(params(cutoff_u))  # chi = 0
    with pytest.raises(MappingError):
        waveguide_map(params(1.05 * cutoff_u))
    with pytest.raises(MappingError):
        waveguide_map(params(0.9 * SPEED_OF_LIGHT / (2 * WN)))  # below normal cutoff
    with pytest.raises(MappingError):
        WaveguideParams(WU, WN, 9e9, (0.01,))
    with pytest.raises(MappingError):
        WaveguideParams(WN, WU, 9e9, (0.01, 0.02))


def test_phase_time_independent_of_normal_length():
    # 0.15 m undersized sections: chi a ~ 14, deep in the opaque regime
    base, _, energy = waveguide_map(params(lengths=(0.15, 0.02, 0.15)))
    k = math.sqrt(2 * energy)
    chi = math.sqrt(2 * (base.max_height - energy))
    taus = []
    for gap in (0.005, 0.013, 0.021, 0.034, 0.047):
        if abs(resonance_condition(k, chi, gap)) < 0.1 * 2 * k * chi:
            continue
        profile, constants, e = waveguide_map(params(lengths=(0.15, gap, 0.15)))
        res = phase_time(profile, constants, e)
        assert not res.resonance_flag
        taus.append(res.tau)
    assert len(taus) >= 3
    assert max(taus) == pytest.approx(min(taus), rel=1e-6)
    assert taus[0] == pytest.approx(2 / (k * chi), rel=1e-6)


def test_group_delay_units():
    p = params()
    profile, constants, energy = waveguide_map(p)
    tau = phase_time(profile, constants, energy).tau
    delay = group_delay_from_phase_time(tau, p)
    # compare with d(phase)/d(omega) by finite differences in frequency
    h = 1e3
    from tunneltime.phasetime import edge_phase

    def phase(f):
        prof, c, e = waveguide_map(params(f))
        return float(edge_phase(prof, c, [e])[0])

    fd = (phase(9.0e9 + h) - phase(9.0e9 - h)) / (2 * 2 * math.pi * h)
    assert delay == pytest.approx(fd, rel=1e-5)
    assert 0 < delay < 1e-9


def test_from_dict():
    p = WaveguideParams.from_dict({"guide_width_normal": WN, "guide_width_undersized": WU,
                                   "frequency": 9e9, "segment_lengths": [0.01]})
    assert p.segment_lengths == (0.01,)
    assert p.wave_speed == SPEED_OF_LIGHT
