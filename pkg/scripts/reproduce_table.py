#!/usr/bin/env python3
"""Reproduce the classification table and diff it against the stored golden file.

    python scripts/reproduce_table.py [--n-max 6] [--samples 3] [--seed 42] [--out table.json]
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from prs.table import RunConfig, cmd_table, diff_golden, diff_rows, table_json, table_markdown

GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "golden" / "classification_table.json"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=6)
    ap.add_argument("--samples", type=int, default=3)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--out", type=Path, default=None, help="write the JSON table here")
    args = ap.parse_args(argv)

    cfg = RunConfig(args.n_max, args.samples, args.seed)
    start = time.perf_counter()
    rows = cmd_table(cfg)
    elapsed = time.perf_counter() - start
    print(table_markdown(rows))
    for r in rows:
        extra = r.witness if r.witness else ("family verified" if r.family_verified else "")
        print(f"  {r.family:8} n={r.n!s:4} {r.cls:12} {extra}")

    data = table_json(rows, cfg)
    if args.out:
        args.out.write_text(json.dumps(data, indent=2) + "\n")
    problems = diff_rows(rows)
    if (args.n_max, args.samples, args.seed) == (6, 3, 42) and GOLDEN.exists():
        problems += diff_golden(rows, json.loads(GOLDEN.read_text()))
    for p in problems:
        print(p, file=sys.stderr)
    print(f"{len(rows)} rows, {len(problems)} problems, {elapsed:.1f}s")
    return 1 if problems else 0


if __name__ == "__main__":
    sys.exit(main())
