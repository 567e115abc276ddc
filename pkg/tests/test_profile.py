import math

import numpy as np
import pytest

from tunneltime.errors import DegenerateKinematicsError, EnergyDomainError, ProfileError
from tunneltime.profile import (
    NATURAL,
    Kinematics,
    PhysicalConstants,
    PotentialProfile,
    dump_profile,
    load_profile,
    profile_from_dict,
)


def test_constructors_and_geometry():
    p = PotentialProfile.double_barrier(1.0, 2.0, 3.0)
    assert p.extent == 7.0
    assert list(p.edges) == [0.0, 2.0, 5.0, 7.0]
    assert p.barrier_indices() == [0, 2]
    assert p.cavity_runs() == [(0, 3.0, 2)]
    assert p.is_symmetric()
    t = PotentialProfile.barrier_train(1.0, [1, 2, 3], [0.5, 0.7])
    assert t.widths.tolist() == [1, 0.5, 2, 0.7, 3]
    assert not t.is_symmetric()
    assert t.reversed().widths.tolist() == [3, 0.7, 2, 0.5, 1]


def test_cavity_runs_merge_free_segments():
    p = PotentialProfile.from_segments([(1, 1), (1, 0), (0.5, 0), (1, 1), (2, 0)])
    assert p.cavity_runs() == [(0, 1.5, 3)]


def test_potential_evaluation():
    p = PotentialProfile.double_barrier(2.0, 1.0, 1.0)
    x = np.array([-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.99, 3.0, 4.0])
    assert p.potential(x).tolist() == [0, 2, 2, 0, 0, 2, 2, 0, 0]


@pytest.mark.parametrize("seg", [(-1.0, 1.0), (1.0, -0.5), (math.inf, 1.0), (1.0, math.nan)])
def test_invalid_segments(seg):
    with pytest.raises(ProfileError):
        PotentialProfile((seg,))


def test_zero_width_allowed():
    p = PotentialProfile(((0.0, 5.0), (1.0, 1.0)))
    assert p.extent == 1.0
    assert p.barrier_indices() == [1]


def test_check_energy():
    p = PotentialProfile.single_barrier(1.0, 1.0)
    with pytest.raises(EnergyDomainError):
        p.check_energy(0.0)
    with pytest.raises(DegenerateKinematicsError):
        p.check_energy(1.0)
    p.check_energy(0.5)


def test_kinematics():
    kin = Kinematics(0.5)
    assert kin.k == pytest.approx(1.0)
    assert kin.chi(1.0) == pytest.approx(1.0)
    assert kin.q(1.0) == pytest.approx(1j)
    si = PhysicalConstants.si()
    assert si.energy(si.wavenumber(1e-20).real) == pytest.approx(1e-20)
    with pytest.raises(ValueError):
        PhysicalConstants(hbar=0.0)


@pytest.mark.parametrize("suffix", [".yaml", ".json"])
def test_round_trip(tmp_path, suffix):
    p = PotentialProfile.barrier_train(1.5, [1, 2], [0.25])
    path = tmp_path / f"p{suffix}"
    dump_profile(p, path, PhysicalConstants(hbar=2.0, mass=3.0))
    q, c = load_profile(path)
    assert q == p
    assert c == PhysicalConstants(hbar=2.0, mass=3.0)


def test_profile_document_forms():
    p, c = profile_from_dict({"segments": [[1, 2], {"width": 3, "height": 0}]})
    assert p.segments == ((1.0, 2.0), (3.0, 0.0))
    assert c is None
    with pytest.raises(ProfileError):
        profile_from_dict({"segments": [{"width": 1}]})
    with pytest.raises(ProfileError):
        profile_from_dict({"layers": []})


def test_with_segment():
    p = PotentialProfile.double_barrier(1.0, 2.0, 3.0).with_segment(1, width=4.0)
    assert p.widths.tolist() == [2, 4, 2]
    assert NATURAL.hbar == 1.0
