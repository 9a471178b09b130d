"""Deterministic CSV/JSON report rendering for verification runs.

The CSV schema is fixed and versioned (column ``schema_version``, value
``v1``); the JSON output mirrors the CSV rows as an array of objects with
identical field names.  Wall-clock timings are volatile, so the
``elapsed_ms`` column is left empty unless timings are explicitly
requested; everything else is exactly reproducible, which keeps repeated
sequential runs byte-identical for golden-file comparisons.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile

from .orthosets import FormVerificationRow

SCHEMA_VERSION = "v1"

COLUMNS = (
    "schema_version",
    "ring",
    "cardinality",
    "maximal_ideal_size",
    "form",
    "det",
    "det_class",
    "disc_class",
    "theoretical_S",
    "brute_force_S",
    "match",
    "witness_size",
    "witness_inclusion_maximal",
    "node_count",
    "elapsed_ms",
)


def report_rows(rows: list[FormVerificationRow], timings: bool = False) -> list[dict]:
    """Rows as plain dicts, ordered by (ring label, form label)."""
    out = []
    for row in sorted(rows, key=lambda r: (r.ring_label, r.form_label)):
        out.append(
            {
                "schema_version": SCHEMA_VERSION,
                "ring": row.ring_label,
                "cardinality": row.cardinality,
                "maximal_ideal_size": row.maximal_ideal_size,
                "form": row.form_label,
                "det": row.det,
                "det_class": row.det_class,
                "disc_class": row.disc_class,
                "theoretical_S": row.theoretical_s,
                "brute_force_S": row.brute_force_s,
                "match": row.match,
                "witness_size": row.witness_size,
                "witness_inclusion_maximal": row.witness_inclusion_maximal,
                "node_count": row.node_count,
                "elapsed_ms": int(row.elapsed * 1000) if timings else None,
            }
        )
    return out


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow([_csv_cell(row[col]) for col in COLUMNS])
    return buf.getvalue()


def render_json(rows: list[dict]) -> str:
    return json.dumps(rows, indent=2) + "\n"


def render_report(rows: list[dict], fmt: str) -> str:
    return render_csv(rows) if fmt == "csv" else render_json(rows)


def write_report(text: str, path: str):
    """Write atomically: full temp file, then rename over the destination."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".report-", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
