"""Flat-record emitters: CSV with header, or JSON lines, floats at 17 digits."""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from typing import IO, Iterable, Sequence


def fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    if v is None:
        return ""
    return str(v)


def _json_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g") if math.isfinite(v) else "null"
    if isinstance(v, int):
        return str(v)
    if v is None:
        return "null"
    return json.dumps(str(v))


def columns(records: Sequence[dict]) -> list[str]:
    """Union of keys in first-seen order."""
    cols: list[str] = []
    for r in records:
        for key in r:
            if key not in cols:
                cols.append(key)
    return cols


def write_csv(records: Sequence[dict], out: IO[str]) -> None:
    cols = columns(records)
    w = csv.writer(out, lineterminator="\n")
    w.writerow(cols)
    for r in records:
        w.writerow([fmt_value(r.get(c)) for c in cols])


def write_jsonl(records: Iterable[dict], out: IO[str]) -> None:
    for r in records:
        out.write("{" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in r.items()) + "}\n")


def emit(records: Sequence[dict], fmt: str = "csv", path: str | None = None) -> str:
    """Write records to ``path`` (or stdout when None) and return the text."""
    buf = io.StringIO()
    if fmt == "csv":
        write_csv(records, buf)
    elif fmt == "jsonl":
        write_jsonl(records, buf)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    text = buf.getvalue()
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
