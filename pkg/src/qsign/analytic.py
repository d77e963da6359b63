"""Certified Bessel main terms, explicit error bounds and dominance checks.

The three coefficient families in scope share one shape of asymptotics: at a
fixed residue class mod 5 the coefficient equals a main term

    M(n) = -amp * cos(pi * phase(n)) * x^{-1/2} * I_1((4 pi/5) sqrt(x)),

with x = n + shift, plus an error of magnitude at most

    E(n) = C + (2 pi^{5/4} / 5) * e^{(2 pi/5) sqrt(x)} * sqrt(x)      (n >= 20),

where C is an explicit constant (a short sum of powers of e).  Certified
sign verdicts compare the enclosure of |M| against the enclosure of E:
"true" only when the intervals separate strictly, "unknown" when they
overlap at the working precision (callers escalate precision and retry).

The modified Bessel function I_{-1} = I_1 is evaluated from its power
series with a certified geometric tail bound; the two-sided exponential
bounds (1/10) e^x/sqrt(x) < I_{-1}(x) < sqrt(pi/8) e^x/sqrt(x) for x >= 3
drive the eventual-dominance certificates: the lower bound turns |M(n)| into
an elementary function K x^{-3/4} e^{(4 pi/5) sqrt(x)} whose ratio against
E(n) is provably nondecreasing once sqrt(x) > 25/(4 pi), so a single
certified comparison at the threshold extends to every larger index in the
residue class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Literal, Union

from .enclosure import Enclosure, cos_half_turns, one, precision, zero

Verdict = Union[bool, Literal["unknown"]]


class UsageError(ValueError):
    pass


class CertificateRefused(RuntimeError):
    """Eventual-dominance preconditions not met."""


class MajorizationRefused(RuntimeError):
    """Parameters too close to 1 for the certified tail bound."""


# ---------------------------------------------------------------------------
# Bessel I_{-1} = I_1
# ---------------------------------------------------------------------------

def bessel_im1(x: Enclosure, max_terms: int = 200_000) -> Enclosure:
    """Enclosure of I_{-1}(x) = I_1(x) = sum_{j>=0} (x/2)^{2j+1} / (j! (j+1)!).

    The m = 0 term of the order -1 series vanishes (1/Gamma(0) = 0), which is
    why the order -1 and order +1 series coincide; the series here is indexed
    so that every term is present.  After summing through term M the
    remainder is bounded by the geometric series u_M * r/(1 - r) with
    r = (x/2)^2 / ((M+1)(M+2)), accepted once r < 1/2.  The tail is always
    added, so the result is a valid enclosure even when the term cap stops
    refinement early (the interval just stays wide).
    """
    if x.lo < 0:
        raise UsageError("bessel_im1 needs x >= 0")
    half = x / 2
    half_sq = half * half
    term = half  # u_0
    total = term
    j = 0
    target = Enclosure.from_fraction(Fraction(1, 2 ** (x.bits + 16)))
    while j < max_terms:
        ratio_hi = half_sq / ((j + 1) * (j + 2))
        if ratio_hi.hi < 0.5 and (term.hi == 0 or term.hi <= target.hi * max(1.0, abs(total.hi))):
            break
        j += 1
        term = term * half_sq / (j * (j + 1))
        total = total + term
    r = half_sq / ((j + 1) * (j + 2))
    if r.hi >= 1:
        raise UsageError("term cap too small for this argument")
    tail_hi = (term * r / (1 - r)).hi
    return total + Enclosure.from_endpoints(0, max(0, tail_hi))


def wang_lower(x: Enclosure) -> Enclosure:
    """(1/10) e^x / sqrt(x); a strict lower bound for I_{-1}(x) when x >= 3."""
    return x.exp() / (10 * x.sqrt())


def wang_upper(x: Enclosure) -> Enclosure:
    """sqrt(pi/8) e^x / sqrt(x); a strict upper bound for I_{-1}(x) when x >= 3."""
    return (Enclosure.pi() / 8).sqrt() * x.exp() / x.sqrt()


def wang_bounds_hold(x: Enclosure) -> Verdict:
    """Certified check that I_{-1}(x) lies strictly inside the two-sided bounds."""
    if x.lo < 3:
        raise UsageError("the two-sided bounds require x >= 3")
    val = bessel_im1(x)
    lo, hi = wang_lower(x), wang_upper(x)
    if lo.strictly_less(val) and val.strictly_less(hi):
        return True
    if val.strictly_less(lo) or hi.strictly_less(val):
        return False
    return "unknown"


# ---------------------------------------------------------------------------
# family models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyModel:
    """Closed-form main term and error bound of one coefficient family."""

    name: str
    shift: int                      # x = n + shift inside the Bessel argument
    residue: int                    # residue class mod 5 carrying the claim
    claimed_sign: int               # certified sign of the coefficient there
    phase_half_turns: Callable[[int], Fraction]  # cos(pi * phase(n))
    min_n: int
    # amplitude = amp_rational * pi, times cos(pi/5)/(1 + cos(2 pi/5)) when flagged
    amp_rational: Fraction
    use_d_constant: bool
    error_const: Callable[[], Enclosure]  # the n-free part of E(n), built per call

    def x_of(self, n: int) -> int:
        return n + self.shift

    def amplitude(self) -> Enclosure:
        """Positive constant amp with M(n) = -amp cos(pi phase(n)) x^{-1/2} I_1(...)."""
        amp = Enclosure.pi() * Enclosure.from_fraction(self.amp_rational)
        if self.use_d_constant:
            c1 = cos_half_turns(Fraction(1, 5))
            c2 = cos_half_turns(Fraction(2, 5))
            amp = amp * c1 / (1 + c2)
        return amp

    def class_cos(self) -> Enclosure:
        """cos(pi phase(n)) for n in the claimed residue class: an n-free constant."""
        return cos_half_turns(self.phase_half_turns(self._class_witness()))

    def _class_witness(self) -> int:
        n = self.residue
        while n < self.min_n:
            n += 5
        return n


def _phase_a(n: int) -> Fraction:
    return Fraction(2 * n + 1, 5)


def _phase_b(n: int) -> Fraction:
    return Fraction(2 * (2 * n - 1), 5)


def _const_ab() -> Enclosure:
    # (2 e^54 + e^{8 pi} + 185) e^2
    c = 2 * Enclosure.exp_of(54) + (8 * Enclosure.pi()).exp() + 185
    return c * Enclosure.exp_of(2)


def _const_d() -> Enclosure:
    # e^332 + e^272 + e^{8 pi + 2}
    return Enclosure.exp_of(332) + Enclosure.exp_of(272) + (8 * Enclosure.pi() + 2).exp()


FAMILIES: dict[str, FamilyModel] = {
    "A": FamilyModel(
        name="A", shift=-1, residue=0, claimed_sign=-1, phase_half_turns=_phase_a,
        min_n=2, amp_rational=Fraction(4, 5), use_d_constant=False,
        error_const=_const_ab,
    ),
    "B": FamilyModel(
        name="B", shift=1, residue=0, claimed_sign=-1, phase_half_turns=_phase_b,
        min_n=1, amp_rational=Fraction(4, 5), use_d_constant=False,
        error_const=_const_ab,
    ),
    "D": FamilyModel(
        name="D", shift=0, residue=1, claimed_sign=1, phase_half_turns=_phase_a,
        min_n=1, amp_rational=Fraction(2, 5), use_d_constant=True,
        error_const=_const_d,
    ),
}


def family(name_or_model: str | FamilyModel) -> FamilyModel:
    if isinstance(name_or_model, FamilyModel):
        return name_or_model
    try:
        return FAMILIES[name_or_model]
    except KeyError:
        raise UsageError(f"unknown family {name_or_model!r}; known: A, B, D") from None


# ---------------------------------------------------------------------------
# main term and error bound
# ---------------------------------------------------------------------------

def main_term(fam: str | FamilyModel, n: int) -> Enclosure:
    """Enclosure of M(n) = -amp cos(pi phase(n)) x^{-1/2} I_{-1}((4 pi/5) sqrt(x))."""
    f = family(fam)
    if n < f.min_n:
        raise UsageError(f"family {f.name} needs n >= {f.min_n}")
    x = Enclosure.from_fraction(f.x_of(n))
    arg = 4 * Enclosure.pi() / 5 * x.sqrt()
    cosn = cos_half_turns(f.phase_half_turns(n))
    return -(f.amplitude() * cosn * bessel_im1(arg) / x.sqrt())


def error_bound(fam: str | FamilyModel, n: int) -> Enclosure:
    """Upper enclosure of the explicit error bound E(n); requires n >= 20.

    E(n) = [sum_k e^{c_k}] e^{scale} + e^{8 pi + extra}
           + (2 pi^{5/4}/5) e^{(2 pi/5) sqrt(x)} sqrt(x),   x = n + shift.

    For families A and B this is (2 e^54 + e^{8 pi} + 185) e^2 + growth; for
    family D it is e^332 + e^272 + e^{8 pi + 2} + growth.  The finite exact
    check always covers n < 20.
    """
    f = family(fam)
    if n < 20:
        raise UsageError("error bound stated only for n >= 20")
    x = Enclosure.from_fraction(f.x_of(n))
    return f.error_const() + _error_growth(x)


def _error_growth(x: Enclosure) -> Enclosure:
    coef = 2 * Enclosure.pi().pow_fraction(Fraction(5, 4)) / 5
    return coef * (2 * Enclosure.pi() / 5 * x.sqrt()).exp() * x.sqrt()


@dataclass(frozen=True)
class DominanceResult:
    family: str
    n: int
    verdict: Verdict
    main: Enclosure
    bound: Enclosure
    precision_bits: int


def dominance(fam: str | FamilyModel, n: int) -> DominanceResult:
    """Certified comparison |M(n)| > E(n) at index n in the family's residue class.

    True/False only when the enclosures separate strictly; "unknown" when
    they overlap at the current working precision.
    """
    f = family(fam)
    if n % 5 != f.residue:
        raise UsageError(
            f"family {f.name} certifies indices == {f.residue} (mod 5), got {n}"
        )
    m = main_term(f, n)
    e = error_bound(f, n)
    am = abs(m)
    if am.strictly_greater(e):
        verdict: Verdict = True
    elif am.strictly_less(e):
        verdict = False
    else:
        verdict = "unknown"
    from .enclosure import iv

    return DominanceResult(f.name, n, verdict, m, e, iv.prec)


def dominance_with_escalation(fam: str | FamilyModel, n: int,
                              start_bits: int = 192,
                              cap_bits: int = 1024) -> DominanceResult:
    """Double precision on "unknown" verdicts up to the cap, then report."""
    bits = start_bits
    while True:
        with precision(bits):
            res = dominance(fam, n)
        if res.verdict != "unknown" or bits >= cap_bits:
            return res
        bits = min(2 * bits, cap_bits)


# ---------------------------------------------------------------------------
# eventual dominance
# ---------------------------------------------------------------------------

def wang_main_lower(fam: str | FamilyModel, n: int) -> Enclosure:
    """Elementary lower bound for |M(n)| on the residue class via the e^x/sqrt(x) bound.

    |M(n)| >= amp |cos_const| x^{-1/2} * (1/10) e^y / sqrt(y),
    y = (4 pi/5) sqrt(x); valid when y >= 3.
    """
    f = family(fam)
    if n % 5 != f.residue:
        raise UsageError("index outside the family's residue class")
    x = Enclosure.from_fraction(f.x_of(n))
    y = 4 * Enclosure.pi() / 5 * x.sqrt()
    if y.lo < 3:
        raise UsageError("lower bound needs (4 pi/5) sqrt(x) >= 3")
    return f.amplitude() * abs(f.class_cos()) * wang_lower(y) / x.sqrt()


@dataclass(frozen=True)
class EventualDominanceCertificate:
    """Machine-checkable record: dominance at a threshold plus monotone extension.

    The claim is |M(n)| > E(n) for every n >= n0 in the family's residue
    class mod 5 (the cosine factor is constant there).  ``first_index`` is
    the smallest such n; the certified Wang-route comparison runs at
    x0 = x(first_index).  ``monotone_ok`` certifies sqrt(x0) > 25/(4 pi)
    (which implies the weaker 15/(8 pi) condition), under which both
    x^{-3/4} e^{(4 pi/5) sqrt(x)} / const and x^{-5/4} e^{(2 pi/5) sqrt(x)}
    have positive log-derivative; the sum of their nonincreasing reciprocals
    is nonincreasing, so the ratio (Wang lower bound of |M|) / E is
    nondecreasing in x and the strict comparison at x0 extends to every
    later index in the class.
    """

    family: str
    n0: int
    first_index: int
    x0: int
    wang_main_lo: str
    bound_hi: str
    monotone_ok: bool
    precision_bits: int
    issued: bool


def eventual_dominance_certificate(fam: str | FamilyModel, n0: int) -> EventualDominanceCertificate:
    f = family(fam)
    if n0 < 20:
        raise CertificateRefused("threshold below the error bound's validity (n >= 20)")
    first = n0 + (f.residue - n0) % 5
    x0 = f.x_of(first)
    # monotonicity precondition sqrt(x0) > 25/(4 pi), certified strictly
    lhs = Enclosure.from_fraction(Fraction(625, 16)) / (Enclosure.pi() * Enclosure.pi())
    if not lhs.strictly_less(Enclosure.from_fraction(x0)):
        raise CertificateRefused("monotonicity precondition sqrt(x0) > 25/(4 pi) fails")
    monotone_ok = True
    wang_lo = wang_main_lower(f, first)
    bound = error_bound(f, first)
    issued = wang_lo.strictly_greater(bound)
    if not issued:
        raise CertificateRefused(
            f"Wang-route dominance at index {first} not certified "
            f"(lower {wang_lo!r} vs bound {bound!r})"
        )
    from .enclosure import iv

    return EventualDominanceCertificate(
        family=f.name, n0=n0, first_index=first, x0=x0,
        wang_main_lo=wang_lo.str_lo(30), bound_hi=bound.str_hi(30),
        monotone_ok=monotone_ok, precision_bits=iv.prec, issued=issued,
    )


# ---------------------------------------------------------------------------
# majorization of reciprocal double Pochhammer products
# ---------------------------------------------------------------------------

def majorization_check(alpha: Fraction, beta: Fraction, x: Fraction,
                       refusal_hi: float = 0.99) -> bool:
    """Certified check of 1/((a; x)_inf (b; x)_inf) <= exp(a/(1-a) + a x/(1-x)^2 + ...).

    The infinite product is enclosed with the tail bound
    0 <= -sum_{k>=K} log(1-y x^k) <= y x^K / ((1 - y x^K)(1 - x)); the
    comparison uses interval endpoints, so True is a certificate.
    """
    for v in (alpha, beta, x):
        if not 0 <= v < 1:
            raise UsageError("parameters must lie in [0, 1)")
        if float(v) > refusal_hi:
            raise MajorizationRefused(f"parameter {v} too close to 1")
    a, b, xx = map(Enclosure.from_fraction, (alpha, beta, x))
    prod = one()
    xk = one()
    for _ in range(400):
        prod = prod * (1 - a * xk) * (1 - b * xk)
        xk = xk * xx
        if xk.hi == 0:
            break
    # tail of -log of the remaining factors
    tail = zero()
    if xk.hi != 0:
        for y in (a, b):
            yxk = y * xk
            if not (1 - yxk).is_positive() or not (1 - xx).is_positive():
                raise MajorizationRefused("tail bound degenerates")
            tail = tail + yxk / ((1 - yxk) * (1 - xx))
    lhs = Enclosure.from_endpoints(1, 1) / prod * Enclosure.from_endpoints(0, tail.hi).exp()
    rhs = (a / (1 - a) + a * xx / ((1 - xx) * (1 - xx))
           + b / (1 - b) + b * xx / ((1 - xx) * (1 - xx))).exp()
    return bool(lhs.hi <= rhs.lo)


# ---------------------------------------------------------------------------
# colored partition counts
# ---------------------------------------------------------------------------

def colored_partition_majorant(eta: int, s: int, t: int, n: int,
                               max_n: int = 60) -> tuple[int, int]:
    """(p*, |d*|) for the doubly-colored partition counts at (s, t, n).

    p*_eta(s, t; n) counts pairs (R, B) where R is a multiset of s parts
    (value >= 0, one of eta shades) and B a multiset of t parts in eta blue
    shades, all values summing to n -- the coefficient of z^s w^t q^n in
    (1/((z; q)_inf (w; q)_inf))^eta.  d*_eta is the signed analogue from
    ((z; q)_inf (w; q)_inf)^eta, whose coefficient is (-1)^{s+t} times the
    count of pairs of *sets* of distinct (value, shade) parts, so
    |d*| <= p* holds term by term.  Both counts enumerate partitions by
    memoized recursion over the (value, shade) pair space.
    """
    if eta < 1:
        raise UsageError("eta must be a positive integer")
    if n > max_n or min(s, t, n) < 0:
        raise UsageError("parameter outside the enumeration guard")
    p = _colored_pairs(eta, s, t, n, distinct=False)
    d = _colored_pairs(eta, s, t, n, distinct=True)
    return p, d


def _colored_pairs(eta: int, s: int, t: int, n: int, distinct: bool) -> int:
    total = 0
    for j in range(n + 1):
        left = _colored_count(eta, s, j, distinct)
        if left:
            total += left * _colored_count(eta, t, n - j, distinct)
    return total


def _colored_count(eta: int, slots: int, total: int, distinct: bool,
                   _cache: dict = {}) -> int:
    """Multisets (or sets) of `slots` pairs (value >= 0, shade in [eta]) summing to total."""
    key_base = (eta, distinct)

    def rec(pmax: int, slots: int, rem: int) -> int:
        if slots == 0:
            return 1 if rem == 0 else 0
        if pmax < 0:
            return 0
        vmax = pmax // eta
        if rem > vmax * slots:
            return 0
        if distinct and slots > pmax + 1:
            return 0
        key = (key_base, pmax, slots, rem)
        hit = _cache.get(key)
        if hit is not None:
            return hit
        v = pmax // eta
        skip = rec(pmax - 1, slots, rem)
        take = rec(pmax - 1 if distinct else pmax, slots - 1, rem - v)
        _cache[key] = out = skip + take
        return out

    pmax = (total + 1) * eta - 1 if total > 0 else eta - 1
    return rec(pmax, slots, total)
