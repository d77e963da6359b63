"""Exact modular-transformation bookkeeping for psi-product expansions.

All quantities here are exact rationals (``fractions.Fraction``) or integers:
sawtooth values, Dedekind sums, the SL2(Z) matrices attached to a Farey
fraction h/k and a factor modulus m, the ceiling data (lambda, lambda*), the
growth exponents Omega and Delta, the root-of-unity phases omega, Upsilon and
the finite product Pi over factors with lambda* = 0.

Conventions.  For a factor psi(r, m) and a Farey fraction h/k write
d = gcd(m, k), m = d m', k = d k'.  The attached matrix is

    gamma = ( hbar  -b ; k'  -m'h ),   hbar m'h = -1 (mod k'),
    b = (hbar m'h + 1)/k',

with hbar chosen canonically as the smallest nonnegative solution (hbar = 0
when k' = 1); any other choice shifts hbar by a multiple of k' and leaves all
derived phases unchanged, which is covered by a property test.

With tau = (h + iz)/k the Moebius action gives the closed forms (as exact
linear expressions in w = i/z)

    gamma(m tau)          = hbar d / k + (d^2/(m k)) w,
    r tau gamma*(m tau) + lambda gamma(m tau)
                          = r d/(m k) + lambda hbar d / k + lambda* (d^2/(m k)) w.

Note the d^2: it comes from 1/(m'k') = d^2/(mk).  ``gamma_action_coeffs``
recomputes both lines by generic symbolic Moebius evaluation, and the two
routes are required to agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator

from .qseries import ProductSpec

try:  # vectorized definitional Dedekind sweep; pure-Python fallback below
    import numpy as _np
except ImportError:  # pragma: no cover
    _np = None


class NotCoprimeError(ValueError):
    pass


def sawtooth(x: Fraction | int) -> Fraction:
    """((x)) = x - floor(x) - 1/2 for non-integer x, 0 for integer x."""
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return x - (x.numerator // x.denominator) - Fraction(1, 2)


def dedekind_sum(d: int, c: int) -> Fraction:
    """Dedekind sum s(d, c) = sum_{n mod c} ((dn/c)) ((n/c)), gcd(d, c) = 1.

    Computed by the reciprocity-accelerated Euclidean recursion

        s(d, c) = -1/4 + (d^2 + c^2 + 1)/(12dc) - s(c mod d, d),

    which agrees with the direct definitional sum (see
    ``dedekind_sum_direct``).  The sum is odd and c-periodic in d.
    """
    if c < 1:
        raise ValueError("modulus c must be positive")
    d %= c
    if gcd(d, c) != 1 and c > 1:
        raise NotCoprimeError(f"gcd({d}, {c}) != 1")
    s = Fraction(0)
    sign = 1
    while c > 1:
        s += sign * (Fraction(d * d + c * c + 1, 12 * d * c) - Fraction(1, 4))
        d, c = c % d, d
        sign = -sign
    return s


def dedekind_sum_direct(d: int, c: int) -> Fraction:
    """Definitional O(c) evaluation of s(d, c) in integer arithmetic.

    For 0 < a < c the sawtooth ((a/c)) equals (2a - c)/(2c), so

        s(d, c) = [ sum_{n=1}^{c-1} (2 (dn mod c) - c)(2n - c) ] / (4 c^2),

    where the terms with c | dn vanish automatically since gcd(d, c) = 1.
    """
    if c < 1:
        raise ValueError("modulus c must be positive")
    if gcd(d % c if c > 1 else 1, c) != 1 and c > 1:
        raise NotCoprimeError(f"gcd({d}, {c}) != 1")
    total = 0
    for n in range(1, c):
        total += (2 * ((d * n) % c) - c) * (2 * n - c)
    return Fraction(total, 4 * c * c)


def dedekind_sums_direct_all(c: int) -> dict[int, Fraction]:
    """Definitional sums s(d, c) for every 1 <= d < c with gcd(d, c) = 1.

    Same formula as ``dedekind_sum_direct``, vectorized over n for the
    full-range verification sweeps.
    """
    if _np is None:  # pragma: no cover
        return {d: dedekind_sum_direct(d, c) for d in range(1, max(c, 2)) if gcd(d, c) == 1}
    if c == 1:
        return {0: Fraction(0)}
    n = _np.arange(1, c, dtype=_np.int64)
    w = 2 * n - c
    out: dict[int, Fraction] = {}
    for d in range(1, c):
        if gcd(d, c) == 1:
            total = int((((d * n) % c) * 2 - c).dot(w))
            out[d] = Fraction(total, 4 * c * c)
    return out


# ---------------------------------------------------------------------------
# matrices and per-factor transformation data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GammaMatrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant must be 1")
        if self.c <= 0:
            raise ValueError("lower-left entry must be positive")

    def chi_exponent(self) -> Fraction:
        """t with eta multiplier chi(gamma) = e^{pi i t}, reduced mod 2."""
        t = Fraction(self.a + self.d, 12 * self.c) - dedekind_sum(self.d, self.c) - Fraction(1, 4)
        return t % 2


def hbar_of(m: int, h: int, k: int) -> int:
    """Smallest nonnegative hbar with hbar * m'h = -1 (mod k'); 0 when k' = 1."""
    if not (0 <= h < k):
        raise ValueError("need 0 <= h < k")
    if gcd(h, k) != 1:
        raise NotCoprimeError(f"gcd({h}, {k}) != 1")
    d = gcd(m, k)
    mp, kp = m // d, k // d
    if kp == 1:
        return 0
    return (-pow(mp * h % kp, -1, kp)) % kp


def gamma_of(m: int, h: int, k: int) -> GammaMatrix:
    """Matrix (hbar, -b; k', -m'h) attached to modulus m and Farey fraction h/k."""
    d = gcd(m, k)
    mp, kp = m // d, k // d
    hb = hbar_of(m, h, k)
    b = (hb * mp * h + 1) // kp
    return GammaMatrix(hb, -b, kp, -mp * h)


def lambda_pair(m: int, r: int, h: int, k: int) -> tuple[int, Fraction]:
    """(lambda, lambda*) = (ceil(rh/d), lambda - rh/d) with d = gcd(m, k)."""
    if not 1 <= r < m:
        raise ValueError("need 1 <= r < m")
    if not (0 <= h < k) or gcd(h, k) != 1:
        raise ValueError("need 0 <= h < k coprime")
    d = gcd(m, k)
    lam = -((-r * h) // d)
    return lam, Fraction(lam) - Fraction(r * h, d)


@dataclass(frozen=True)
class FactorTransform:
    """Exact transformation data of one factor psi(r, m)^delta at h/k.

    sigma_const/sigma_wcoef and tau_const/tau_wcoef give the transformed
    arguments as const + wcoef * (i/z).
    """

    r: int
    m: int
    delta: int
    d: int
    m_prime: int
    k_prime: int
    hbar: int
    b: int
    lam: int
    lam_star: Fraction
    sigma_const: Fraction
    sigma_wcoef: Fraction
    tau_const: Fraction
    tau_wcoef: Fraction


def factor_transform(r: int, m: int, delta: int, h: int, k: int,
                     hbar_offset: int = 0) -> FactorTransform:
    d = gcd(m, k)
    mp, kp = m // d, k // d
    hb = hbar_of(m, h, k) + hbar_offset * kp
    b = (hb * mp * h + 1) // kp
    lam, lam_star = lambda_pair(m, r, h, k)
    return FactorTransform(
        r=r, m=m, delta=delta, d=d, m_prime=mp, k_prime=kp, hbar=hb, b=b,
        lam=lam, lam_star=lam_star,
        sigma_const=Fraction(r * d, m * k) + Fraction(lam * hb * d, k),
        sigma_wcoef=lam_star * Fraction(d * d, m * k),
        tau_const=Fraction(hb * d, k),
        tau_wcoef=Fraction(d * d, m * k),
    )


def gamma_action_coeffs(m: int, h: int, k: int, r: int,
                        hbar_offset: int = 0) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """(tau_const, tau_wcoef, sigma-part-const, sigma-part-wcoef) by raw Moebius algebra.

    Evaluates gamma(m tau) and r tau gamma*(m tau) at tau = (h + iz)/k
    symbolically: numerator and denominator are linear in iz, the denominator
    has zero constant term, and (A + B iz)/(D iz) = B/D + (A/D)(1/(iz)) with
    1/(iz) = -i/z.  Returns coefficients of 1 and of w = i/z.
    """
    d = gcd(m, k)
    mp, kp = m // d, k // d
    hb = hbar_of(m, h, k) + hbar_offset * kp
    b = (hb * mp * h + 1) // kp
    # gamma(m tau): numerator hbar*m*tau - b, denominator k'*m*tau - m'h
    num_const = Fraction(hb * m * h, k) - b
    num_iz = Fraction(hb * m, k)
    den_const = Fraction(kp * m * h, k) - mp * h
    den_iz = Fraction(kp * m, k)
    if den_const != 0:
        raise ArithmeticError("denominator constant term should vanish identically")
    tau_const = num_iz / den_iz
    tau_wcoef = -(num_const / den_iz)  # (A/D) / (iz) = -(A/D) (i/z)
    # r tau gamma*(m tau) = r (h + iz)/k / (k' m tau - m'h) = (rh/k + (r/k) iz)/(den_iz iz)
    sig_const = Fraction(r, k) / den_iz
    sig_wcoef = -(Fraction(r * h, k) / den_iz)
    return tau_const, tau_wcoef, sig_const, sig_wcoef


# ---------------------------------------------------------------------------
# growth exponents Omega and Delta, residue classes
# ---------------------------------------------------------------------------

def omega_exact(spec: ProductSpec) -> Fraction:
    """Omega = sum_j delta_j (2 m_j - 12 r_j + 12 r_j^2 / m_j), exact."""
    total = Fraction(0)
    for r, m, delta in spec.factors:
        total += delta * (2 * m - 12 * r + Fraction(12 * r * r, m))
    return total


def omega_of(spec: ProductSpec) -> int | Fraction:
    """Omega as an int; every registered spec has integral Omega.

    A non-integral value is reported as the exact Fraction together with a
    warning rather than silently rounded.
    """
    val = omega_exact(spec)
    if val.denominator != 1:
        import warnings

        warnings.warn(f"Omega is not an integer for this spec: {val}", stacklevel=2)
        return val
    return val.numerator


def class_representative(spec: ProductSpec, aleph: int, l: int,
                         k_span: int = 40) -> tuple[int, int] | None:
    """Some (h, k) with h = aleph (mod l), k = l (mod L), gcd(h, k) = 1, 0 <= h < k.

    Returns None when no coprime representative exists within the search
    horizon (for the moduli in scope, nonexistence within the horizon is
    nonexistence outright, e.g. class (0, 5) at level 5).
    """
    big_l = spec.level
    if not 1 <= l <= big_l or not 0 <= aleph < l:
        raise ValueError("need 1 <= l <= level and 0 <= aleph < l")
    for t in range(k_span):
        k = l + t * big_l
        for h in range(aleph, k, l):
            if gcd(h, k) == 1:
                return h, k
    return None


def delta_of(spec: ProductSpec, aleph: int, l: int,
             display_variant: bool = False) -> Fraction:
    """Delta(aleph, l) = -sum_j delta_j (2 d_j^2/m_j + 12 d_j^2/m_j (lam*^2 - lam*)).

    d_j = gcd(m_j, k) and lam* depend only on the class of (h, k) modulo
    (l, L), so any coprime representative gives the same value (tested).
    With ``display_variant`` the quadratic term (lam*^2 - lam*) is replaced
    by the degenerate difference (lam* - lam*) = 0; that variant does not
    reproduce the documented class values and exists only for table audits.
    """
    rep = class_representative(spec, aleph, l)
    if rep is None:
        raise ValueError(f"class (aleph, l) = ({aleph}, {l}) has no coprime representative")
    h, k = rep
    return delta_at(spec, h, k, display_variant=display_variant)


def delta_at(spec: ProductSpec, h: int, k: int, display_variant: bool = False) -> Fraction:
    total = Fraction(0)
    for r, m, delta in spec.factors:
        d = gcd(m, k)
        _, lam_star = lambda_pair(m, r, h, k)
        quad = (lam_star * lam_star - lam_star) if not display_variant else Fraction(0)
        total -= delta * (Fraction(2 * d * d, m) + Fraction(12 * d * d, m) * quad)
    return total


def lpos_set(spec: ProductSpec) -> set[tuple[int, int]]:
    """Classes (aleph, l) with a coprime representative and Delta(aleph, l) > 0."""
    out = set()
    big_l = spec.level
    for l in range(1, big_l + 1):
        for aleph in range(l):
            if class_representative(spec, aleph, l) is None:
                continue
            if delta_of(spec, aleph, l) > 0:
                out.add((aleph, l))
    return out


def delta_table_rows(spec_name: str, spec: ProductSpec,
                     debug_variants: bool = False) -> Iterator[dict]:
    """Rows for the delta-table dump, sorted by (l, aleph)."""
    pos = lpos_set(spec)
    for l in range(1, spec.level + 1):
        for aleph in range(l):
            if class_representative(spec, aleph, l) is None:
                continue
            dv = delta_of(spec, aleph, l)
            row = {
                "spec": spec_name,
                "aleph": aleph,
                "l": l,
                "delta_num": dv.numerator,
                "delta_den": dv.denominator,
                "in_Lpos": (aleph, l) in pos,
            }
            if debug_variants:
                dd = delta_of(spec, aleph, l, display_variant=True)
                row["delta_display_num"] = dd.numerator
                row["delta_display_den"] = dd.denominator
            yield row


# ---------------------------------------------------------------------------
# phases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnitPhase:
    """Exact unit complex number e^{pi i t} with t a rational reduced mod 2."""

    t: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "t", self.t % 2)

    def __mul__(self, other: "UnitPhase") -> "UnitPhase":
        return UnitPhase(self.t + other.t)

    def __pow__(self, e: int) -> "UnitPhase":
        return UnitPhase(self.t * e)

    def conjugate(self) -> "UnitPhase":
        return UnitPhase(-self.t)


@dataclass(frozen=True)
class PhaseData:
    """omega, Upsilon and the exact finite product Pi at one Farey fraction.

    ``pi_factors`` lists (x, delta) for the factors with lam* = 0, denoting
    (1 - e^{2 pi i x})^delta; the x are non-integral rationals so no factor
    vanishes.
    """

    omega: UnitPhase
    upsilon: UnitPhase
    pi_factors: tuple[tuple[Fraction, int], ...]


@dataclass(frozen=True)
class TransformData:
    """Everything needed to evaluate the product transformation at h/k."""

    spec: ProductSpec
    h: int
    k: int
    factors: tuple[FactorTransform, ...]
    omega: UnitPhase
    upsilon: UnitPhase
    omega_exponent: Fraction
    delta_exponent: Fraction
    sum_delta: int
    sum_delta_lambda: int

    def prefactor_phase(self) -> UnitPhase:
        """i^{sum delta} (-1)^{sum delta lambda} omega^2 Upsilon as one phase."""
        t = Fraction(self.sum_delta, 2) + self.sum_delta_lambda
        return UnitPhase(t) * (self.omega ** 2) * self.upsilon


def transform_data(spec: ProductSpec, h: int, k: int, hbar_offset: int = 0) -> TransformData:
    """Assemble the exact data of the product transformation at h/k.

    The per-factor building blocks: matrix data, (lambda, lambda*), the
    transformed arguments, the Dedekind-sum phase omega and the correction
    phase Upsilon

        Upsilon = exp(pi i sum_j delta_j [ r_j h/k - r_j d_j/(m_j k)
                  + 2 r_j d_j lam*_j/(m_j k) + hbar_j d_j (lam_j^2 - lam_j)/k ]).
    """
    if not (0 <= h < k):
        raise ValueError("need 0 <= h < k")
    if gcd(h, k) != 1:
        raise NotCoprimeError(f"gcd({h}, {k}) != 1")
    facs = []
    omega_t = Fraction(0)
    ups_t = Fraction(0)
    sum_delta = 0
    sum_dl = 0
    for r, m, delta in spec.factors:
        ft = factor_transform(r, m, delta, h, k, hbar_offset=hbar_offset)
        facs.append(ft)
        omega_t -= delta * dedekind_sum(ft.m_prime * h, ft.k_prime)
        ups_t += delta * (
            Fraction(r * h, k)
            - Fraction(r * ft.d, m * k)
            + 2 * Fraction(r * ft.d, m * k) * ft.lam_star
            + Fraction(ft.hbar * ft.d, k) * (ft.lam * ft.lam - ft.lam)
        )
        sum_delta += delta
        sum_dl += delta * ft.lam
    return TransformData(
        spec=spec, h=h, k=k, factors=tuple(facs),
        omega=UnitPhase(omega_t), upsilon=UnitPhase(ups_t),
        omega_exponent=omega_exact(spec), delta_exponent=delta_at(spec, h, k),
        sum_delta=sum_delta, sum_delta_lambda=sum_dl,
    )


def phase_data(spec: ProductSpec, h: int, k: int, hbar_offset: int = 0) -> PhaseData:
    """omega, Upsilon and Pi at h/k.

    Pi collects (1 - e^{2 pi i x_j})^{delta_j} over the factors with
    lam*_j = 0, where x_j = (r_j d_j + r_j hbar_j m_j h)/(m_j k) equals the
    transformed first argument of the factor.  Each x_j is certified
    non-integral before it is returned.
    """
    td = transform_data(spec, h, k, hbar_offset=hbar_offset)
    pi_factors = []
    for ft in td.factors:
        if ft.lam_star == 0:
            x = Fraction(ft.r * ft.d + ft.r * ft.hbar * ft.m * h, ft.m * k) % 1
            if x == 0:
                raise ArithmeticError(
                    f"vanishing Pi factor at (h, k) = ({h}, {k}), (r, m) = ({ft.r}, {ft.m})"
                )
            pi_factors.append((x, ft.delta))
    return PhaseData(omega=td.omega, upsilon=td.upsilon, pi_factors=tuple(pi_factors))
