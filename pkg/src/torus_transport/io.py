"""Table serialization with a versioned schema header."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

from .errors import ValidationError

SCHEMA = 1


def _cell(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if hasattr(v, "item"):  # numpy scalar
        return _cell(v.item())
    return str(v)


def _json_value(v: Any) -> Any:
    if hasattr(v, "item"):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_value(x) for x in v]
    return v


def table_to_csv(
    rows: Sequence[dict], columns: Sequence[str], footer: Iterable[str] = ()
) -> str:
    """CSV text: ``# schema=1``, header row, data rows, then ``#`` footer lines."""
    buf = io.StringIO()
    buf.write(f"# schema={SCHEMA}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_cell(row.get(c, "")) for c in columns])
    for line in footer:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def to_json(payload: dict) -> str:
    body = {"schema": SCHEMA}
    body.update(_json_value(payload))
    return json.dumps(body, indent=2, allow_nan=False) + "\n"


def emit(text: str, out: str | Path | None, stream=None) -> None:
    if out is None or str(out) == "-":
        (stream or __import__("sys").stdout).write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="")


def read_table(path) -> tuple[list[str], list[dict]]:
    """Read a CSV written by :func:`table_to_csv` (comment lines skipped)."""
    lines = [
        ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln and not ln.startswith("#")
    ]
    if not lines:
        raise ValidationError(f"{path} holds no table")
    reader = csv.DictReader(lines)
    return list(reader.fieldnames or []), list(reader)
