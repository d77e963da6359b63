"""Command line front end.

Subcommands:

* ``expand``     stream exact coefficients of a registered or inline product
* ``certify``    build a sign-pattern certificate (exit 0/2/3)
* ``delta``      growth-exponent table per residue class
* ``dominance``  certified main-term vs error-bound comparison at one index
* ``xcheck``     randomized residual checks of the transformation identities
* ``bench``      time the exact expansion engine

Data output goes to stdout (or --out); progress notes go to stderr so piped
output stays machine-clean.  All randomness is driven by --seed.  The
QSIGN_PRECISION environment variable overrides the default precision.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Sequence, TextIO

from . import __version__
from .enclosure import DEFAULT_PRECISION, precision
from .qseries import (ProductSpec, REGISTERED_SPECS, expand_product, iter_csv_rows,
                      registered_spec)


def _parse_spec(args) -> tuple[str, ProductSpec]:
    if args.spec_json:
        text = args.spec_json
        if text.startswith("@"):
            with open(text[1:], "r", encoding="utf-8") as fh:
                text = fh.read()
        return "inline", ProductSpec.from_json(text)
    name = args.spec
    if name is None:
        raise SystemExit("error: provide --spec NAME or --spec-json JSON")
    if name not in REGISTERED_SPECS:
        known = ", ".join(sorted(REGISTERED_SPECS))
        raise SystemExit(f"error: unknown spec {name!r}; registered specs: {known}")
    return name, REGISTERED_SPECS[name]


def _open_out(args) -> TextIO:
    if args.out and args.out != "-":
        return open(args.out, "w", encoding="utf-8")
    return sys.stdout


def _note(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_expand(args) -> int:
    name, spec = _parse_spec(args)
    t0 = time.time()
    series = expand_product(spec, args.trunc)
    _note(f"expanded {name} to order {args.trunc} in {time.time() - t0:.2f}s")
    out = _open_out(args)
    try:
        if args.format == "csv":
            for row in iter_csv_rows(series):
                out.write(row + "\n")
        elif args.format == "json":
            json.dump({"spec": name, "trunc": args.trunc,
                       "coeffs": [str(c) for c in series.coeffs]}, out)
            out.write("\n")
        else:
            for n, c in enumerate(series.coeffs):
                out.write(f"{n:>8}  {c}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_certify(args) -> int:
    from .certify import certify

    result = certify(args.target, precision_bits=args.precision,
                     precision_cap=args.precision_cap, seed=args.seed)
    out = _open_out(args)
    try:
        json.dump(result.certificate, out, indent=2)
        out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()
    if result.ok:
        _note(f"target {args.target}: certified")
    else:
        _note(f"target {args.target}: FAILED ({result.certificate['meta'].get('invalid')})")
    return result.exit_code


def cmd_delta(args) -> int:
    from .modular import delta_table_rows, lpos_set, omega_of

    name, spec = _parse_spec(args)
    rows = list(delta_table_rows(name, spec, debug_variants=args.debug_variants))
    out = _open_out(args)
    try:
        if args.format == "json":
            json.dump({"spec": name, "omega": str(omega_of(spec)),
                       "lpos": sorted(lpos_set(spec)), "rows": rows}, out, default=str)
            out.write("\n")
        else:
            cols = list(rows[0].keys())
            out.write(",".join(cols) + "\n")
            for row in rows:
                out.write(",".join(str(row[c]) for c in cols) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_dominance(args) -> int:
    from .analytic import dominance_with_escalation

    res = dominance_with_escalation(args.family, args.n, start_bits=args.precision,
                                    cap_bits=args.precision_cap)
    payload = {
        "family": res.family,
        "n": res.n,
        "main_lo": res.main.str_lo(25),
        "main_hi": res.main.str_hi(25),
        "bound_hi": res.bound.str_hi(25),
        "verdict": res.verdict if isinstance(res.verdict, str) else bool(res.verdict),
        "precision_bits": res.precision_bits,
    }
    out = _open_out(args)
    try:
        json.dump(payload, out, indent=2)
        out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0 if res.verdict is True else 1


# -- xcheck ------------------------------------------------------------------

def _sample_gamma(rng: random.Random, cmax: int = 20) -> tuple[int, int, int, int]:
    from math import gcd

    c = rng.randint(1, cmax)
    choices = [d for d in range(1, c + 1) if gcd(d, c) == 1]
    d = rng.choice(choices)
    if c == 1:
        return 1, d - 1, 1, d
    a = pow(d % c, -1, c)
    return a, (a * d - 1) // c, c, d


def _sample_tau(rng: random.Random):
    return (Fraction(rng.randint(-500, 500), 1000),
            Fraction(rng.randint(500, 2000), 1000))


def _residual_eta(seed: int) -> float:
    from .circle import ComplexHP, cexp, csqrt_upper, e_pi_i_half_turns, eta
    from .modular import GammaMatrix

    rng = random.Random(seed)
    a, b, c, d = _sample_gamma(rng)
    tre, tim = _sample_tau(rng)
    tau = ComplexHP.from_fractions(tre, tim)
    ctd = tau.scale(c) + ComplexHP.from_fractions(d, 0)
    gt = (tau.scale(a) + ComplexHP.from_fractions(b, 0)) / ctd
    chi = e_pi_i_half_turns(GammaMatrix(a, b, c, d).chi_exponent())
    lhs = eta(gt)
    rhs = chi * csqrt_upper(ctd) * eta(tau)
    return float((lhs - rhs).abs_enclosure().hi / lhs.abs_enclosure().lo)


def _residual_theta(seed: int) -> float:
    from .circle import ComplexHP, cexp, csqrt_upper, e_pi_i_half_turns, theta
    from .enclosure import Enclosure
    from .modular import GammaMatrix

    rng = random.Random(seed)
    a, b, c, d = _sample_gamma(rng)
    tre, tim = _sample_tau(rng)
    tau = ComplexHP.from_fractions(tre, tim)
    sig = ComplexHP.from_fractions(Fraction(rng.randint(-300, 300), 1000),
                                   Fraction(rng.randint(-200, 200), 1000))
    ctd = tau.scale(c) + ComplexHP.from_fractions(d, 0)
    gt = (tau.scale(a) + ComplexHP.from_fractions(b, 0)) / ctd
    chi3 = e_pi_i_half_turns(GammaMatrix(a, b, c, d).chi_exponent() * 3)
    lhs = theta(sig / ctd, gt)
    quad = cexp(ComplexHP(-(Enclosure.pi() * ((sig * sig).scale(c) / ctd).im),
                          Enclosure.pi() * ((sig * sig).scale(c) / ctd).re))
    rhs = chi3 * csqrt_upper(ctd) * quad * theta(sig, tau)
    return float((lhs - rhs).abs_enclosure().hi / lhs.abs_enclosure().lo)


def _residual_quasi(seed: int) -> float:
    from .circle import ComplexHP, cexp, theta
    from .enclosure import Enclosure

    rng = random.Random(seed)
    tre, tim = _sample_tau(rng)
    tau = ComplexHP.from_fractions(tre, tim)
    sig = ComplexHP.from_fractions(Fraction(rng.randint(-300, 300), 1000),
                                   Fraction(rng.randint(-200, 200), 1000))
    aa, bb = rng.randint(-2, 2), rng.randint(-2, 2)
    lhs = theta(sig + tau.scale(aa) + ComplexHP.from_fractions(bb, 0), tau)
    # (-1)^{A+B} e^{-pi i A^2 tau} e^{-2 pi i A sigma}
    head = cexp(ComplexHP(Enclosure.pi() * (tau.im * (aa * aa) + sig.im * (2 * aa)),
                          -(Enclosure.pi() * (tau.re * (aa * aa) + sig.re * (2 * aa)))))
    sgn = -1 if (aa + bb) % 2 else 1
    rhs = (head * theta(sig, tau)).scale(sgn)
    return float((lhs - rhs).abs_enclosure().hi / lhs.abs_enclosure().lo)


def _residual_psi(seed: int) -> float:
    from .circle import ComplexHP, psi, psi_by_theta

    rng = random.Random(seed)
    tre, tim = _sample_tau(rng)
    tau = ComplexHP.from_fractions(tre, tim)
    sig = ComplexHP.from_fractions(Fraction(rng.randint(-300, 300), 1000),
                                   Fraction(rng.randint(-200, 200), 1000))
    direct = psi(sig, tau)
    via = psi_by_theta(sig, tau)
    mirrored = psi(tau - sig, tau)
    r1 = (direct - via).abs_enclosure().hi / direct.abs_enclosure().lo
    r2 = (direct - mirrored).abs_enclosure().hi / direct.abs_enclosure().lo
    return float(max(r1, r2))


def _residual_product(seed: int) -> float:
    from .circle import ComplexHP, check_product_transform
    from math import gcd

    rng = random.Random(seed)
    name = rng.choice(["A", "B", "D", "c", "d"])
    spec = registered_spec(name)
    k = rng.randint(1, 15)
    hs = [h for h in range(k) if gcd(h, k) == 1] or [0]
    h = rng.choice(hs)
    z = ComplexHP.from_fractions(Fraction(rng.randint(300, 1500), 1000),
                                 Fraction(rng.randint(-800, 800), 1000))
    res, _, _ = check_product_transform(spec, h, k, z)
    return float(res)


_XCHECK_KINDS: dict[str, Callable[[int], float]] = {
    "eta": _residual_eta,
    "theta": _residual_theta,
    "quasiperiodicity": _residual_quasi,
    "psi": _residual_psi,
    "product": _residual_product,
}


def _xcheck_worker(kind_seed_bits: tuple[str, int, int]) -> float:
    kind, seed, bits = kind_seed_bits
    with precision(bits):
        return _XCHECK_KINDS[kind](seed)


def cmd_xcheck(args) -> int:
    if args.identity not in _XCHECK_KINDS:
        known = ", ".join(sorted(_XCHECK_KINDS))
        raise SystemExit(f"error: unknown identity {args.identity!r}; known: {known}")
    jobs = [(args.identity, args.seed * 100_000 + i, args.precision)
            for i in range(args.samples)]
    t0 = time.time()
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            residuals = list(pool.map(_xcheck_worker, jobs))
    else:
        residuals = [_xcheck_worker(job) for job in jobs]
    payload = {
        "identity": args.identity,
        "samples": args.samples,
        "max_residual": max(residuals) if residuals else 0.0,
        "precision_bits": args.precision,
        "seed": args.seed,
        "elapsed_s": round(time.time() - t0, 3),
    }
    out = _open_out(args)
    try:
        json.dump(payload, out, indent=2)
        out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0 if payload["max_residual"] < 1e-25 else 1


def cmd_bench(args) -> int:
    name, spec = _parse_spec(args)
    t0 = time.time()
    series = expand_product(spec, args.trunc)
    dt = time.time() - t0
    digits = len(str(abs(series.coeffs[-1])))
    print(json.dumps({"spec": name, "trunc": args.trunc, "seconds": round(dt, 3),
                      "last_coefficient_digits": digits}))
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsign",
        description="exact q-series expansion and certified sign-pattern verification",
    )
    parser.add_argument("--version", action="version", version=f"qsign {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec_opts=True):
        p.add_argument("--precision", type=int,
                       default=int(os.environ.get("QSIGN_PRECISION", DEFAULT_PRECISION)),
                       help="working precision in bits")
        p.add_argument("--precision-cap", type=int, default=1024)
        p.add_argument("--seed", type=int, default=20250810, help="RNG seed")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        if spec_opts:
            p.add_argument("--spec", default=None, help="registered spec name")
            p.add_argument("--spec-json", default=None,
                           help='inline JSON [{"r":..,"m":..,"delta":..}, ...] or @file')

    p = sub.add_parser("expand", help="stream exact coefficients")
    common(p)
    p.add_argument("--trunc", type=int, required=True)
    p.set_defaults(func=cmd_expand, format="csv")

    p = sub.add_parser("certify", help="build a sign-pattern certificate")
    common(p, spec_opts=False)
    p.add_argument("--target", required=True, help="A5n, B5n or D5n1")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("delta", help="growth exponent table per residue class")
    common(p)
    p.add_argument("--debug-variants", action="store_true",
                   help="also emit the degenerate display-form value per class")
    p.set_defaults(func=cmd_delta, format="csv")

    p = sub.add_parser("dominance", help="main term vs error bound at one index")
    common(p, spec_opts=False)
    p.add_argument("--family", required=True, choices=("A", "B", "D"))
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_dominance)

    p = sub.add_parser("xcheck", help="randomized identity residual checks")
    common(p, spec_opts=False)
    p.add_argument("--identity", required=True)
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=cmd_xcheck)

    p = sub.add_parser("bench", help="time the exact expansion engine")
    common(p)
    p.add_argument("--trunc", type=int, default=19501)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    with precision(args.precision):
        return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
