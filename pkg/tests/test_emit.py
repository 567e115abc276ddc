import csv
import io
import json
import math

from tunneltime.harness.emit import emit


def test_csv(capsys):
    rows = [{"a": 0.1, "b": True}, {"a": 1 / 3, "c": "x"}]
    text = emit(rows, "csv")
    assert capsys.readouterr().out == text
    parsed = list(csv.reader(io.StringIO(text)))
    assert parsed[0] == ["a", "b", "c"]
    assert parsed[1] == ["0.10000000000000001", "true", ""]
    assert float(parsed[2][0]) == 1 / 3


def test_jsonl_round_trip(tmp_path):
    rows = [{"x": 1 / 7, "n": 3, "flag": False, "s": 'q"uote', "bad": math.nan}]
    path = tmp_path / "out.jsonl"
    emit(rows, "jsonl", str(path))
    rec = json.loads(path.read_text().strip())
    assert rec == {"x": 1 / 7, "n": 3, "flag": False, "s": 'q"uote', "bad": None}
