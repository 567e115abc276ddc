import csv
import io
import json
import math
import subprocess
import sys

import pytest
import yaml

from tunneltime.harness.cli import main
from tunneltime.profile import PotentialProfile, dump_profile


@pytest.fixture
def double(tmp_path):
    path = tmp_path / "double.yaml"
    dump_profile(PotentialProfile.double_barrier(1.0, 20.0, 3.0), path)
    return str(path)


@pytest.fixture
def well(tmp_path):
    path = tmp_path / "well.yaml"
    dump_profile(PotentialProfile.double_barrier(1.0, 4.0, math.pi / 2), path)
    return str(path)


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_scatter(double, capsys):
    assert main(["scatter", "--profile", double, "--energy", "0.5"]) == 0
    (row,) = rows_of(capsys.readouterr().out)
    assert float(row["R"]) == pytest.approx(1.0)
    assert float(row["ln_abs_t"]) == pytest.approx(-39.2968, abs=1e-4)


def test_scatter_coefficients_jsonl(double, capsys):
    main(["scatter", "--profile", double, "--energy", "0.5", "--coefficients", "--format", "jsonl"])
    recs = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [r["region"] for r in recs] == [0, 1, 2, 3, 4]
    assert recs[0]["x_left"] is None  # -inf is not JSON


def test_phase_time_grid(double, capsys, tmp_path):
    out = tmp_path / "pt.csv"
    assert main(["phase-time", "--profile", double, "--energies", "0.3", "0.7", "5", "--out", str(out)]) == 0
    rows = rows_of(out.read_text())
    assert len(rows) == 5
    mid = rows[2]
    assert float(mid["tau"]) == pytest.approx(2.0, rel=1e-9)
    assert capsys.readouterr().out == ""


def test_phase_time_failure_row(double, capsys):
    main(["phase-time", "--profile", double, "--energy", "1.0"])
    (row,) = rows_of(capsys.readouterr().out)
    assert row["status"].startswith("failed: DegenerateKinematicsError")


def test_tolerance_overrides_guard(well, capsys):
    main(["phase-time", "--profile", well, "--energy", "0.45"])
    assert rows_of(capsys.readouterr().out)[0]["resonance_flag"] == "false"
    main(["phase-time", "--profile", well, "--energy", "0.45", "--tolerance", "0.5"])
    assert rows_of(capsys.readouterr().out)[0]["resonance_flag"] == "true"


def test_units_si(tmp_path, capsys):
    # a 1 nm, 0.3 eV barrier for an electron at 0.1 eV
    ev = 1.602176634e-19
    path = tmp_path / "si.yaml"
    dump_profile(PotentialProfile.single_barrier(0.3 * ev, 1e-9), path)
    main(["scatter", "--profile", str(path), "--energy", str(0.1 * ev), "--units", "si"])
    T = float(rows_of(capsys.readouterr().out)[0]["T"])
    assert 1e-3 < T < 1e-1


def test_sweep(tmp_path, capsys):
    doc = {"base_profile": {"segments": [[20, 1.0], [3, 0], [20, 1.0]]}, "swept_parameter": "gap_width",
           "grid": [1.0, 1.57, 2.0], "outputs": ["phase_time"], "energy": 0.5}
    path = tmp_path / "sweep.yaml"
    path.write_text(yaml.safe_dump(doc))
    assert main(["sweep", str(path), "--jobs", "2", "--format", "jsonl"]) == 0
    recs = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert [r["near_resonance"] for r in recs] == [False, True, False]


def test_resonances(well, capsys):
    main(["resonances", "--profile", well, "--range", "0.05", "0.95"])
    rows = rows_of(capsys.readouterr().out)
    assert any(abs(float(r["E_r"]) - 0.5) < 1e-3 for r in rows)


def test_waveguide(tmp_path, capsys):
    path = tmp_path / "wg.yaml"
    path.write_text(yaml.safe_dump({"guide_width_normal": 0.02286, "guide_width_undersized": 0.015,
                                    "frequency": 9e9, "segment_lengths": [0.04, 0.02, 0.04]}))
    dumped = tmp_path / "mapped.yaml"
    assert main(["waveguide", str(path), "--dump-profile", str(dumped)]) == 0
    (row,) = rows_of(capsys.readouterr().out)
    assert float(row["dispersion_residual_k"]) < 1e-12
    assert float(row["group_delay_s"]) > 0
    assert yaml.safe_load(dumped.read_text())["segments"][1]["height"] == 0.0


def test_waveguide_rejects_wavepacket(tmp_path, double):
    path = tmp_path / "wg.yaml"
    path.write_text("guide_width_normal: 0.02286\nguide_width_undersized: 0.015\n"
                    "frequency: 9.0e9\nsegment_lengths: [0.04]\n")
    with pytest.raises(SystemExit) as err:
        main(["waveguide", str(path), "--outputs", "wavepacket_arrival"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["wavepacket", "--profile", double, "--energy", "0.5", "--waveguide", str(path)])
    assert err.value.code == 2


def test_mapping_error_exit_status(tmp_path, capsys):
    path = tmp_path / "wg.yaml"
    path.write_text("guide_width_normal: 0.02286\nguide_width_undersized: 0.015\n"
                    "frequency: 1.2e10\nsegment_lengths: [0.04]\n")
    assert main(["waveguide", str(path)]) == 2
    assert "MappingError" in capsys.readouterr().err


def test_missing_profile():
    with pytest.raises(SystemExit):
        main(["scatter", "--energy", "0.5"])


def test_reproduce_subset(capsys):
    assert main(["reproduce", "--checks", "1,2", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "tau = 2.000000" in out
    assert "2/2 checks passed" in out


def test_reproduce_records(tmp_path, capsys):
    out = tmp_path / "checks.jsonl"
    main(["reproduce", "--checks", "5", "--format", "jsonl", "--out", str(out)])
    (rec,) = [json.loads(line) for line in out.read_text().splitlines()]
    assert rec["number"] == 5 and rec["passed"] is True


@pytest.mark.slow
def test_wavepacket_frames(tmp_path, capsys):
    path = tmp_path / "b.yaml"
    dump_profile(PotentialProfile.single_barrier(1.0, 1.0), path)
    frames = tmp_path / "frames"
    assert main(["wavepacket", "--profile", str(path), "--energy", "0.5", "--sigma-k", "12",
                 "--frames", str(frames), "--frame-every", "2000"]) == 0
    (row,) = rows_of(capsys.readouterr().out)
    assert 0.3 < float(row["transmitted_fraction"]) < 0.5
    assert len(list(frames.iterdir())) >= 2


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "tunneltime.harness.cli", "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    for cmd in ("scatter", "phase-time", "sweep", "resonances", "wavepacket", "waveguide", "reproduce"):
        assert cmd in res.stdout
