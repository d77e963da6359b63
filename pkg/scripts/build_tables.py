#!/usr/bin/env python3
"""Dump the growth-exponent tables and sign tables as CSV files.

    python scripts/build_tables.py --out-dir tables/
"""

import argparse
import sys
from pathlib import Path

from qsign.certify import KNOWN_PATTERNS, cached_expansion
from qsign.modular import delta_table_rows, lpos_set, omega_of
from qsign.qseries import registered_spec, slice_indices


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="tables", type=Path)
    parser.add_argument("--trunc", type=int, default=800)
    parser.add_argument("--debug-variants", action="store_true")
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    for name in ("A", "B", "D"):
        spec = registered_spec(name)
        rows = list(delta_table_rows(name, spec, debug_variants=args.debug_variants))
        path = args.out_dir / f"delta_{name}.csv"
        with path.open("w") as fh:
            cols = list(rows[0].keys())
            fh.write(",".join(cols) + "\n")
            for row in rows:
                fh.write(",".join(str(row[c]) for c in cols) + "\n")
        print(f"{name}: Omega = {omega_of(spec)}, {len(rows)} classes, "
              f"{len(lpos_set(spec))} positive -> {path}")

    path = args.out_dir / "sign_patterns.csv"
    with path.open("w") as fh:
        fh.write("spec,residue,start,expected_sign,violations\n")
        for name, patterns in KNOWN_PATTERNS.items():
            series = cached_expansion(name, args.trunc)
            for residue, start, sign in patterns:
                bad = [i for i in slice_indices(residue, 5, start, args.trunc)
                       if ((series.coeffs[i] > 0) - (series.coeffs[i] < 0)) != sign]
                fh.write(f"{name},{residue},{start},{sign},{len(bad)}\n")
    print(f"sign patterns -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
