#!/usr/bin/env python3
"""Run the full certification suite: three targets, desk checks, pattern scans.

Writes one certificate JSON per target plus a summary, and exits nonzero if
anything fails to certify.

    python scripts/run_certification.py --out-dir out/
"""

import argparse
import json
import sys
import time
from pathlib import Path

from qsign.certify import certify, richmond_szekeres_scan, verify_known_theorems


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="out", type=Path)
    parser.add_argument("--precision", type=int, default=192)
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    failures = 0
    summary = {}
    for target in ("A5n", "B5n", "D5n1"):
        t0 = time.perf_counter()
        result = certify(target, precision_bits=args.precision)
        elapsed = time.perf_counter() - t0
        path = args.out_dir / f"certificate_{target}.json"
        path.write_text(json.dumps(result.certificate, indent=2) + "\n")
        status = "certified" if result.ok else f"FAILED (exit {result.exit_code})"
        print(f"{target}: {status} in {elapsed:.1f}s -> {path}")
        summary[target] = {"ok": result.ok, "seconds": round(elapsed, 2),
                           "hash": result.certificate["meta"]["hash"]}
        failures += 0 if result.ok else 1

    tables = verify_known_theorems(800)
    print(f"documented patterns: {'ok' if all(t.ok for t in tables.values()) else 'FAILED'}")
    scans = richmond_szekeres_scan(2000)
    for name, scan in scans.items():
        print(f"eventual pattern {name}: holds from index {scan.cutoff}, "
              f"exceptions {list(scan.exceptions)}")
    summary["eventual_patterns"] = {n: {"cutoff": s.cutoff, "exceptions": list(s.exceptions)}
                                    for n, s in scans.items()}
    (args.out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
