"""JSON and CSV serialization of reports."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import TextIO

from .characterize import ClassificationReport, FEReport
from .characterize.fe import SCHEMA_VERSION, _json_float
from .errors import MeanlabError
from .wronskians import PROFILE_COLUMNS, WronskianProfile

FORMATS = ("json", "csv")


def to_json(obj) -> str:
    """Deterministic JSON text (fixed key order, trailing newline)."""
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(["" if v is None else (repr(float(v)) if isinstance(v, float) else v)
                    for v in row])
    return buf.getvalue()


def profile_to_dict(profile: WronskianProfile) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "columns": list(PROFILE_COLUMNS),
        "rows": [[_json_float(v) for v in row] for row in profile.rows()],
    }


def render(report, fmt: str) -> str:
    if fmt not in FORMATS:
        raise MeanlabError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
    if isinstance(report, WronskianProfile):
        return to_json(profile_to_dict(report)) if fmt == "json" else report.to_csv()
    if isinstance(report, FEReport):
        if fmt == "json":
            return to_json(report.to_dict())
        return _csv_text(("x", "y", "residual"), report.residual_rows())
    if isinstance(report, ClassificationReport):
        if fmt == "json":
            return to_json(report.to_dict())
        rows = [(name, r.ran, r.accepted, _json_float(r.residual), _json_float(r.tolerance))
                for name, r in report.residuals.items()]
        return _csv_text(("condition", "ran", "accepted", "residual", "tolerance"), rows)
    if isinstance(report, dict):
        if fmt == "json":
            return to_json(report)
        keys = [k for k in report if k != "schema_version"]
        return _csv_text(keys, [[report[k] for k in keys]])
    raise TypeError(f"cannot render {type(report).__name__}")


def emit_report(report, fmt: str = "json", out: "str | Path | TextIO | None" = None) -> str:
    """Render ``report`` and write it to ``out`` (a path or text stream) if given."""
    text = render(report, fmt)
    if out is None:
        return text
    if isinstance(out, (str, Path)):
        try:
            with open(out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise MeanlabError(f"cannot write report to {out}: {exc.strerror}") from None
    else:
        out.write(text)
    return text
