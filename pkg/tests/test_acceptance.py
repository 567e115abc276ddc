"""The ten acceptance checks, one PASS/FAIL line each on the terminal."""
import pytest

from tunneltime.harness.acceptance import CHECKS, plateau_table, run_check


@pytest.mark.parametrize("number", [c[0] for c in CHECKS], ids=[f"check{c[0]:02d}" for c in CHECKS])
def test_acceptance(number, capsys):
    result = run_check(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.line()


def test_report_tables():
    table = plateau_table()
    assert "opaque limit" in table
    assert len(table.splitlines()) == 12
