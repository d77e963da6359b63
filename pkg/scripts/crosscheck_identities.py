#!/usr/bin/env python3
"""Residual sweep over all transformation identities at a chosen precision.

    python scripts/crosscheck_identities.py --samples 100 --workers 2
"""

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from qsign.cli import _XCHECK_KINDS, _xcheck_worker


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=100)
    parser.add_argument("--seed", type=int, default=20250810)
    parser.add_argument("--precision", type=int, default=192)
    parser.add_argument("--workers", type=int, default=2)
    parser.add_argument("--threshold", type=float, default=1e-25)
    args = parser.parse_args()

    worst_overall = 0.0
    for kind in sorted(_XCHECK_KINDS):
        jobs = [(kind, args.seed * 100_000 + i, args.precision)
                for i in range(args.samples)]
        t0 = time.perf_counter()
        if args.workers > 1:
            with ProcessPoolExecutor(max_workers=args.workers) as pool:
                residuals = list(pool.map(_xcheck_worker, jobs, chunksize=8))
        else:
            residuals = [_xcheck_worker(job) for job in jobs]
        worst = max(residuals)
        worst_overall = max(worst_overall, worst)
        print(json.dumps({"identity": kind, "samples": args.samples,
                          "max_residual": worst,
                          "precision_bits": args.precision,
                          "seed": args.seed,
                          "elapsed_s": round(time.perf_counter() - t0, 2)}))
    return 0 if worst_overall < args.threshold else 1


if __name__ == "__main__":
    sys.exit(main())
