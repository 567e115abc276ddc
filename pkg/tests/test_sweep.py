import math

import numpy as np
import pytest
import yaml

from tunneltime.errors import ProfileError
from tunneltime.harness.emit import emit
from tunneltime.harness.sweep import SweepSpec, load_sweep, run_sweep
from tunneltime.phasetime import cavity_guard_values
from tunneltime.profile import NATURAL, PotentialProfile

BASE = PotentialProfile.double_barrier(1.0, 20.0, 3.0)


def test_barrier_width_plateau():
    spec = SweepSpec(BASE, "barrier_width", (10, 15, 20, 25), ("phase_time",))
    taus = np.array([r["tau"] for r in run_sweep(spec)])
    assert np.ptp(taus) / taus.mean() < 1e-6


def test_barrier_count():
    spec = SweepSpec(BASE, "barrier_count", (1, 2, 3, 4), ("phase_time",))
    rows = run_sweep(spec)
    assert [r["status"] for r in rows] == ["ok"] * 4
    assert [r["reference_length"] for r in rows] == [20, 43, 66, 89]
    taus = np.array([r["tau"] for r in rows])
    assert np.ptp(taus) / taus.mean() < 1e-4


def test_flags_exactly_at_guarded_points():
    grid = np.round(np.linspace(1.2, 2.0, 33), 6)
    spec = SweepSpec(BASE, "gap_width", tuple(grid), ("phase_time", "transmission"))
    rows = run_sweep(spec)
    for r in rows:
        guard = cavity_guard_values(PotentialProfile.double_barrier(1.0, 20.0, r["value"]), NATURAL, 0.5)[0]
        assert r["near_resonance"] == (abs(guard) < 0.1)
        assert (r["status"] != "ok") == r["near_resonance"]
    assert any(r["status"] == "failed" for r in rows) or any(r["status"] == "flagged" for r in rows)


def test_failure_rows_do_not_abort():
    # E equal to the barrier height: every point fails but the sweep completes
    spec = SweepSpec(BASE, "energy", (0.5, 1.0, 1.5), ("phase_time", "transmission"))
    rows = run_sweep(spec)
    assert len(rows) == 6
    bad = [r for r in rows if r["value"] == 1.0]
    assert all(r["status"] == "failed" and "Degenerate" in r["message"] for r in bad)


def test_one_row_per_point_per_output():
    spec = SweepSpec(PotentialProfile.double_barrier(1.0, 4.0, 2.0), "gap_width", (1.0, 2.0, 3.0),
                     ("transmission", "resonances", "phase_time"))
    rows = run_sweep(spec)
    assert [(r["index"], r["output"]) for r in rows] == [
        (i, o) for i in range(3) for o in ("phase_time", "transmission", "resonances")]
    assert all(r["n_resonances"] >= 1 for r in rows if r["output"] == "resonances")


def test_parallel_output_is_identical():
    spec = SweepSpec(BASE, "gap_width", tuple(np.linspace(0.5, 6.0, 12)), ("phase_time", "transmission"))
    serial = emit(run_sweep(spec, jobs=1), "csv", path=None)
    parallel = emit(run_sweep(spec, jobs=3), "csv", path=None)
    assert serial == parallel


def test_provenance():
    spec = SweepSpec(BASE, "barrier_width", (10, 20), ("phase_time",))
    rows = run_sweep(spec)
    assert {r["spec_hash"] for r in rows} == {spec.spec_hash}
    other = SweepSpec(BASE, "barrier_width", (10, 21), ("phase_time",))
    assert other.spec_hash != spec.spec_hash
    assert SweepSpec(BASE, "barrier_width", (10, 20), ("phase_time",)).spec_hash == spec.spec_hash


@pytest.mark.parametrize("kw, exc", [
    (dict(swept_parameter="height"), ValueError),
    (dict(grid=()), ValueError),
    (dict(grid=(1, 3, 2)), ValueError),
    (dict(outputs=("colour",)), ValueError),
    (dict(swept_parameter="barrier_count", grid=(1.5, 2)), ValueError),
    (dict(swept_parameter="energy", grid=(-1, 1)), ValueError),
])
def test_validation(kw, exc):
    args = dict(base_profile=BASE, swept_parameter="barrier_width", grid=(1, 2), outputs=("phase_time",))
    args.update(kw)
    with pytest.raises(exc):
        SweepSpec(**args)


def test_parameter_must_exist():
    with pytest.raises(ProfileError):
        SweepSpec(PotentialProfile.single_barrier(1.0, 2.0), "gap_width", (1, 2))
    with pytest.raises(ProfileError):
        SweepSpec(PotentialProfile.free(2.0), "barrier_width", (1, 2))


def test_gap_sweep_on_train_sets_every_gap():
    train = PotentialProfile.barrier_train(1.0, [2, 3, 4], [1.0, 5.0])
    spec = SweepSpec(train, "gap_width", (2.5,))
    assert spec.profile_at(2.5).widths.tolist() == [2, 2.5, 3, 2.5, 4]


def test_yaml_round_trip(tmp_path):
    spec = SweepSpec(BASE, "gap_width", (1.0, 2.0), ("phase_time",), E_range=(0.1, 0.9), name="x")
    path = tmp_path / "s.yaml"
    path.write_text(yaml.safe_dump(spec.to_dict()))
    loaded = load_sweep(path)
    assert loaded == spec
    assert loaded.spec_hash == spec.spec_hash
    assert load_sweep(path, guard=0.2).guard == 0.2
