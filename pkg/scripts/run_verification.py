#!/usr/bin/env python3
"""Run the default catalog verification and write reports/verify.{csv,json}.

Equivalent to `uniortho verify --out reports/verify.csv` plus a JSON twin
and a human-readable summary table on stdout.  Pass --full to include the
large Galois-ring instance.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from uniortho.catalog import default_catalog_text
from uniortho.config import parse_config
from uniortho.orthosets import verify_closed_form
from uniortho.reporting import render_csv, render_json, report_rows, write_report

LARGE_VERTEX_THRESHOLD = 1000


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--full", action="store_true", help="include GR(9,2)")
    parser.add_argument("--out-dir", default="reports", help="report directory")
    parser.add_argument("--timeout", type=float, default=60.0)
    args = parser.parse_args()

    cfg = parse_config(default_catalog_text())
    entries = [
        e
        for e in cfg.rings
        if args.full
        or e.ring.cardinality ** 2 - e.ring.maximal_ideal_size ** 2 <= LARGE_VERTEX_THRESHOLD
    ]

    rows = []
    for entry in entries:
        verification = verify_closed_form(entry.ring, args.timeout, cfg.max_card, label=entry.label)
        rows.extend(verification.rows)
        for row in verification.rows:
            flag = "" if row.det_class == row.disc_class else "  [det-class differs]"
            print(
                f"{row.ring_label:>12} {row.form_label:<11} "
                f"S={row.brute_force_s:<3} predicted={row.theoretical_s:<3} "
                f"{'ok' if row.match else 'MISMATCH'}{flag}"
            )

    dicts = report_rows(rows)
    out_dir = Path(args.out_dir)
    write_report(render_csv(dicts), str(out_dir / "verify.csv"))
    write_report(render_json(dicts), str(out_dir / "verify.json"))
    passed = all(row["match"] for row in dicts)
    print(f"\n{len(dicts)} rows -> {out_dir}/verify.csv, {out_dir}/verify.json: "
          f"{'PASS' if passed else 'FAIL'}")
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
