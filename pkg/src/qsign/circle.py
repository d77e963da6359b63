"""High-precision evaluation of eta, theta and psi, and circle-method checks.

Two numeric regimes live here.

*  Certified: ``ComplexHP`` pairs of interval enclosures, used to verify the
   modular transformation identities (eta and theta under SL2(Z), theta
   quasi-periodicity, and the full psi-product transformation) with relative
   residuals far below 1e-25 at 192-bit precision.

*  Diagnostic: plain multiprecision quadrature over a Farey dissection that
   recovers power-series coefficients from the contour integral

       alpha(n) = sum_{h/k} e^{-2 pi i n h/k}
                  int_{arc} f(e^{2 pi i tau}) e^{2 pi n rho} e^{-2 pi i n phi} dphi

   with tau = h/k + phi + i rho on the arc and rho = 1/N^2.  The quadrature
   (adaptive trapezoid with Richardson extrapolation) carries a stated, not
   certified, tolerance: it cross-checks the exact engine and never feeds a
   certificate.

The theta product form multiplies the three Pochhammer symbols
(xi; q)(xi^{-1} q; q)(q; q); dropping the (q; q) factor would break the
relation psi = i e^{-pi i tau/6} e^{pi i sigma} theta/eta, and the series
definition over half-integers is kept as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Sequence

import mpmath
from mpmath import iv, mp

from .enclosure import Enclosure, one, precision, zero
from .modular import TransformData, transform_data
from .qseries import ProductSpec


class ConvergenceRefused(RuntimeError):
    """The requested evaluation cannot reach the target accuracy."""


# ---------------------------------------------------------------------------
# complex enclosures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexHP:
    """Rectangle enclosure re + i*im with directed-rounded components."""

    re: Enclosure
    im: Enclosure

    @staticmethod
    def from_fractions(re: Fraction | int, im: Fraction | int = 0) -> "ComplexHP":
        return ComplexHP(Enclosure.from_fraction(re), Enclosure.from_fraction(im))

    @staticmethod
    def one() -> "ComplexHP":
        return ComplexHP(one(), zero())

    def __add__(self, other: "ComplexHP") -> "ComplexHP":
        return ComplexHP(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexHP") -> "ComplexHP":
        return ComplexHP(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "ComplexHP") -> "ComplexHP":
        return ComplexHP(self.re * other.re - self.im * other.im,
                         self.re * other.im + self.im * other.re)

    def __truediv__(self, other: "ComplexHP") -> "ComplexHP":
        den = other.re.square() + other.im.square()
        return ComplexHP((self.re * other.re + self.im * other.im) / den,
                         (self.im * other.re - self.re * other.im) / den)

    def __neg__(self) -> "ComplexHP":
        return ComplexHP(-self.re, -self.im)

    def scale(self, c: Enclosure | int | Fraction) -> "ComplexHP":
        if not isinstance(c, Enclosure):
            c = Enclosure.from_fraction(c)
        return ComplexHP(self.re * c, self.im * c)

    def conjugate(self) -> "ComplexHP":
        return ComplexHP(self.re, -self.im)

    def abs_enclosure(self) -> Enclosure:
        return (self.re.square() + self.im.square()).sqrt()

    def pow_int(self, e: int) -> "ComplexHP":
        if e < 0:
            return ComplexHP.one() / self.pow_int(-e)
        out = ComplexHP.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def mid_complex(self) -> mpmath.mpc:
        return mpmath.mpc(self.re.mid, self.im.mid)


def cexp(z: ComplexHP) -> ComplexHP:
    """exp(z) as a rectangle: e^re (cos im + i sin im), interval-sound."""
    r = z.re.exp()
    return ComplexHP(r * z.im.cos(), r * z.im.sin())


def e_two_pi_i(t: ComplexHP | Fraction) -> ComplexHP:
    """e^{2 pi i t}; for exact rational t the angle is formed exactly first."""
    if isinstance(t, Fraction):
        ang = Enclosure.pi() * Enclosure.from_fraction(2 * (t % 1))
        return ComplexHP(ang.cos(), ang.sin())
    two_pi = Enclosure.pi() * 2
    return cexp(ComplexHP(-(two_pi * t.im), two_pi * t.re))


def e_pi_i_half_turns(t: Fraction) -> ComplexHP:
    """Exact unit phase e^{pi i t} for rational t."""
    ang = Enclosure.pi() * Enclosure.from_fraction(t % 2)
    return ComplexHP(ang.cos(), ang.sin())


def csqrt_upper(z: ComplexHP) -> ComplexHP:
    """Principal square root for Im(z) > 0, via the algebraic half-angle form.

    sqrt(z) = sqrt((|z| + re)/2) + i sqrt((|z| - re)/2) with nonnegative
    imaginary part; both radicands are clamped at 0, which is sound because
    they are nonnegative exactly.
    """
    if not z.im.is_positive():
        raise ConvergenceRefused("principal sqrt implemented for Im(z) > 0 only")
    r = z.abs_enclosure()
    re2 = ((r + z.re) / 2).clamp_nonneg()
    im2 = ((r - z.re) / 2).clamp_nonneg()
    return ComplexHP(re2.sqrt(), im2.sqrt())


# ---------------------------------------------------------------------------
# complex balls: long products without the rectangle wrapping effect
# ---------------------------------------------------------------------------
#
# Rectangle multiplication loses a factor of up to sqrt(2) of radius per
# step when the value rotates, so a ten-thousand-factor Pochhammer product
# explodes.  Midpoint-radius ("ball") multiplication has no wrapping: the
# radius recurrence is |x| r_y + |y| r_x + r_x r_y plus rounding slop, which
# stays proportional to the magnitude.  Only the product loops use balls;
# results convert back to rectangles.

_RAD_PAD = mpmath.mpf(1) + mpmath.mpf(2) ** -24  # swallows nearest-rounding of radius math


# ---------------------------------------------------------------------------
# Pochhammer products with certified tails
# ---------------------------------------------------------------------------

def _tail_padding(prod: ComplexHP, t_hi) -> ComplexHP:
    """Multiply by a rectangle containing e^{w} for all |Re w|,|Im w| <= t_hi."""
    t = Enclosure.from_endpoints(-t_hi, t_hi)
    return prod * cexp(ComplexHP(t, t))


def pochhammer_product(z0: ComplexHP, q: ComplexHP, max_factors: int) -> ComplexHP:
    """(z0; q)_inf = prod_{k>=0} (1 - z0 q^k) with a certified tail factor.

    The partial product stops once |z0 q^k| is far below one ulp at the
    working precision; the remaining factors contribute a multiplicative
    e^{[-t, t] + i[-t, t]} with t bounding the tail of sum |log(1 - z0 q^k)|.

    The loop runs in midpoint-radius (ball) form on raw components:
    rectangle multiplication wraps (radius grows ~sqrt(2) per rotating
    factor, fatal for 10^4-factor products) while the ball radius recurrence
    |x| r_y + |y| r_x + r_x r_y stays proportional to the magnitude.  All
    magnitudes in the radius bookkeeping are 1-norm upper bounds, every
    radius update is padded multiplicatively, and midpoint rounding is
    absorbed by magnitude * ulp terms, so containment is preserved.
    """
    aq = q.abs_enclosure()
    if not aq.hi < 1:
        raise ConvergenceRefused("the nome satisfies |q| >= 1 at this precision")
    prec = iv.prec
    thresh = mpmath.mpf(2) ** (-(prec + 24))
    with mp.workprec(prec + 16):
        ulp = mpmath.mpf(2) ** (5 - (prec + 16))
        pad = _RAD_PAD
        one = mpmath.mpf(1)
        sqrt = mpmath.sqrt
        # unpack balls: centre components and radius, radii from rect widths
        qr, qi = q.re.mid, q.im.mid
        qrad = (mpmath.mpf(q.re.width) + mpmath.mpf(q.im.width)
                + (abs(qr) + abs(qi)) * ulp) * pad
        zr, zi = z0.re.mid, z0.im.mid
        zrad = (mpmath.mpf(z0.re.width) + mpmath.mpf(z0.im.width)
                + (abs(zr) + abs(zi)) * ulp) * pad
        # radius multipliers must be true-modulus upper bounds: anything larger
        # (like a 1-norm) compounds over the loop and reintroduces wrapping
        aq2 = sqrt(qr * qr + qi * qi) * pad + qrad
        # prod = 1 - z0
        pr, pi_ = one - zr, -zi
        prad = (zrad + (one + abs(zr) + abs(zi)) * ulp) * pad
        # zk = z0 * q
        az1 = abs(zr) + abs(zi)
        zr, zi = zr * qr - zi * qi, zr * qi + zi * qr
        zrad = (az1 * qrad + aq2 * zrad + az1 * ulp) * pad
        k = 1
        while True:
            az1 = abs(zr) + abs(zi)
            if az1 * pad + zrad < thresh:
                break
            if k >= max_factors:
                raise ConvergenceRefused(
                    f"needs more than {max_factors} factors "
                    f"(|q| ~ {mpmath.nstr(aq.hi, 8)}); increase the factor budget "
                    f"or move the argument"
                )
            # u = 1 - zk, then prod *= u
            ur, ui = one - zr, -zi
            urad = (zrad + (one + az1) * ulp) * pad
            au2 = sqrt(ur * ur + ui * ui) * pad + urad
            ap1 = abs(pr) + abs(pi_)
            pr, pi_ = pr * ur - pi_ * ui, pr * ui + pi_ * ur
            prad = (ap1 * urad + au2 * prad + ap1 * (au2 + one) * ulp) * pad
            # zk *= q
            zr, zi = zr * qr - zi * qi, zr * qi + zi * qr
            zrad = (az1 * qrad + aq2 * zrad + az1 * ulp) * pad
            k += 1
        zk_hi = az1 * pad + zrad
        r = (prad + (abs(pr) + abs(pi_)) * ulp) * pad
        rect = ComplexHP(Enclosure.from_endpoints(pr - r, pr + r),
                         Enclosure.from_endpoints(pi_ - r, pi_ + r))
    # tail: sum_{j >= k} |log(1 - z0 q^j)| <= |zk| / ((1 - |q|)(1 - |zk|))
    az_e = Enclosure.from_endpoints(0, zk_hi)
    t = (az_e / ((1 - aq) * (1 - az_e))).hi
    return _tail_padding(rect, t)


_FACTOR_BUDGET = 400_000


def eta(tau: ComplexHP, max_factors: int = _FACTOR_BUDGET) -> ComplexHP:
    """Dedekind eta: q^{1/24} prod (1 - q^k), q = e^{2 pi i tau}, Im(tau) > 0."""
    if not tau.im.is_positive():
        raise ConvergenceRefused("eta needs Im(tau) > 0")
    q = e_two_pi_i(tau)
    head = cexp(ComplexHP(-(Enclosure.pi() * tau.im / 12), Enclosure.pi() * tau.re / 12))
    return head * pochhammer_product(q, q, max_factors)


def theta(sigma: ComplexHP, tau: ComplexHP, max_factors: int = _FACTOR_BUDGET) -> ComplexHP:
    """Odd Jacobi theta via the triple product.

    theta(sigma; tau) = -i q^{1/8} xi^{-1/2} (xi; q)(xi^{-1} q; q)(q; q)
    with xi = e^{2 pi i sigma}; the xi^{-1/2} factor is e^{-pi i sigma},
    formed from sigma directly so no branch choice enters.
    """
    if not tau.im.is_positive():
        raise ConvergenceRefused("theta needs Im(tau) > 0")
    q = e_two_pi_i(tau)
    xi = e_two_pi_i(sigma)
    pi_e = Enclosure.pi()
    # -i q^{1/8} xi^{-1/2} = -i e^{pi i tau/4} e^{-pi i sigma}
    head = cexp(ComplexHP(-(pi_e * tau.im / 4) + pi_e * sigma.im,
                          pi_e * tau.re / 4 - pi_e * sigma.re))
    head = ComplexHP(head.im, -head.re)  # multiply by -i
    prod = pochhammer_product(xi, q, max_factors)
    prod = prod * pochhammer_product(ComplexHP.one() / xi * q, q, max_factors)
    prod = prod * pochhammer_product(q, q, max_factors)
    return head * prod


def theta_by_sum(sigma: ComplexHP, tau: ComplexHP, terms: int | None = None) -> ComplexHP:
    """Defining series over half-integers nu, with a certified tail bound.

    theta(sigma; tau) = sum_{nu in Z + 1/2} e^{2 pi i nu (sigma + 1/2) + pi i nu^2 tau}.
    Independent oracle for the product form.
    """
    if not tau.im.is_positive():
        raise ConvergenceRefused("theta needs Im(tau) > 0")
    if terms is None:
        # |term| ~ e^{-pi Im(tau) nu^2 + 2 pi |Im sigma| |nu|}; size the cutoff crudely
        im_t = float(tau.im.lo)
        im_s = max(abs(float(sigma.im.hi)), abs(float(sigma.im.lo)))
        need = (iv.prec + 32) * 0.6931 / 3.1416
        v = (2 * im_s + (4 * im_s * im_s + 4 * im_t * need) ** 0.5) / (2 * im_t)
        terms = max(8, int(v) + 3)
    total = ComplexHP(zero(), zero())
    pi_e = Enclosure.pi()
    for k in range(-terms, terms):
        nu = Enclosure.from_fraction(Fraction(2 * k + 1, 2))
        # exponent E = 2 pi i nu (sigma + 1/2) + pi i nu^2 tau
        re_e = -(pi_e * nu * (nu * tau.im + 2 * sigma.im))
        im_e = pi_e * nu * (nu * tau.re + 2 * sigma.re + 1)
        total = total + cexp(ComplexHP(re_e, im_e))
    # two-sided tail, geometric once the term ratio is certified < 1/2
    nu_edge = Enclosure.from_fraction(Fraction(2 * terms + 1, 2))
    im_s_abs = abs(sigma.im)
    edge = (-(Enclosure.pi() * nu_edge * (nu_edge * tau.im - 2 * im_s_abs))).exp()
    ratio = (-(Enclosure.pi() * (2 * nu_edge * tau.im - 2 * im_s_abs))).exp()
    if not ratio.hi < 0.5:
        raise ConvergenceRefused("theta series needs more terms for a tail bound")
    t_hi = (2 * edge / (1 - ratio)).hi
    box = Enclosure.from_endpoints(-t_hi, t_hi)
    return total + ComplexHP(box, box)


def psi(sigma: ComplexHP, tau: ComplexHP, max_factors: int = _FACTOR_BUDGET) -> ComplexHP:
    """psi(sigma; tau) = (xi; q)_inf (xi^{-1} q; q)_inf, the two-symbol product."""
    if not tau.im.is_positive():
        raise ConvergenceRefused("psi needs Im(tau) > 0")
    q = e_two_pi_i(tau)
    xi = e_two_pi_i(sigma)
    return (pochhammer_product(xi, q, max_factors)
            * pochhammer_product(ComplexHP.one() / xi * q, q, max_factors))


def psi_by_theta(sigma: ComplexHP, tau: ComplexHP) -> ComplexHP:
    """psi via i e^{-pi i tau/6} e^{pi i sigma} theta(sigma; tau)/eta(tau)."""
    pi_e = Enclosure.pi()
    head = cexp(ComplexHP(pi_e * tau.im / 6 - pi_e * sigma.im,
                          -(pi_e * tau.re / 6) + pi_e * sigma.re))
    head = ComplexHP(-head.im, head.re)  # multiply by i
    return head * theta(sigma, tau) / eta(tau)


# ---------------------------------------------------------------------------
# the product transformation
# ---------------------------------------------------------------------------

def transformed_arguments(td: TransformData, z: ComplexHP) -> list[tuple[ComplexHP, ComplexHP]]:
    """(sigma_j, tau_j) per factor: const + wcoef * (i/z) from the exact data."""
    w = ComplexHP(zero(), one()) / z  # i/z
    out = []
    for ft in td.factors:
        sig = ComplexHP.from_fractions(ft.sigma_const) + w.scale(ft.sigma_wcoef)
        ta = ComplexHP.from_fractions(ft.tau_const) + w.scale(ft.tau_wcoef)
        out.append((sig, ta))
    return out


def product_side(spec: ProductSpec, tau: ComplexHP) -> ComplexHP:
    """prod_j psi(r_j tau; m_j tau)^{delta_j} by direct evaluation."""
    out = ComplexHP.one()
    for r, m, delta in spec.factors:
        out = out * psi(tau.scale(r), tau.scale(m)).pow_int(delta)
    return out


def transformed_side(td: TransformData, z: ComplexHP) -> ComplexHP:
    """Right-hand side of the product transformation at tau = (h + iz)/k.

    i^{sum delta} (-1)^{sum delta lambda} omega^2 Upsilon
    exp(pi/(12k) (Omega z + Delta / z)) prod_j psi(sigma_j; tau_j)^{delta_j}.
    """
    pref = e_pi_i_half_turns(td.prefactor_phase().t)
    invz = ComplexHP.one() / z
    scale = Enclosure.pi() / (12 * td.k)
    om = Enclosure.from_fraction(td.omega_exponent)
    de = Enclosure.from_fraction(td.delta_exponent)
    grow = cexp(ComplexHP(scale * (om * z.re + de * invz.re),
                          scale * (om * z.im + de * invz.im)))
    prod = ComplexHP.one()
    for ft, (sig, ta) in zip(td.factors, transformed_arguments(td, z)):
        prod = prod * psi(sig, ta).pow_int(ft.delta)
    return pref * grow * prod


def check_product_transform(spec: ProductSpec, h: int, k: int,
                            z: ComplexHP) -> tuple[mpmath.mpf, ComplexHP, ComplexHP]:
    """Relative residual of the product transformation at tau = (h + iz)/k.

    Returns (residual upper bound, lhs, rhs); Re(z) > 0 required so tau is
    in the upper half plane.
    """
    if not z.re.is_positive():
        raise ConvergenceRefused("need Re(z) > 0")
    td = transform_data(spec, h, k)
    tau = ComplexHP((Enclosure.from_fraction(h) - z.im) / k, z.re / k)
    lhs = product_side(spec, tau)
    rhs = transformed_side(td, z)
    num = (lhs - rhs).abs_enclosure().hi
    den = lhs.abs_enclosure().lo
    if den <= 0:
        raise ConvergenceRefused("left side enclosure touches zero")
    return num / den, lhs, rhs


def pi_factor_value(pi_factors: Sequence[tuple[Fraction, int]]) -> ComplexHP:
    """Exact-to-precision value of prod (1 - e^{2 pi i x})^{delta}."""
    out = ComplexHP.one()
    for x, delta in pi_factors:
        out = out * (ComplexHP.one() - e_two_pi_i(x)).pow_int(delta)
    return out


# ---------------------------------------------------------------------------
# Farey dissection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FareyArc:
    """Arc around h/k in the order-N dissection: [h/k - theta_left, h/k + theta_right]."""

    h: int
    k: int
    theta_left: Fraction
    theta_right: Fraction
    order: int

    def __post_init__(self) -> None:
        n, k = self.order, self.k
        for t in (self.theta_left, self.theta_right):
            if not Fraction(1, 2 * k * n) <= t <= Fraction(1, k * n):
                raise ValueError(f"mediant distance {t} violates the arc bounds at h/k={self.h}/{self.k}")

    @property
    def width(self) -> Fraction:
        return self.theta_left + self.theta_right


def farey_fractions(order: int) -> list[tuple[int, int]]:
    """Farey fractions h/k of the given order in [0, 1), ascending."""
    out = [(0, 1)]
    a, b, c, d = 0, 1, 1, order
    while c <= order and (c, d) != (1, 1):
        out.append((c, d))
        a, b, c, d = c, d, (order + b) // d * c - a, (order + b) // d * d - b
    return out


def farey_arcs(order: int) -> list[FareyArc]:
    """Complete dissection of the circle into arcs around order-N Farey fractions.

    Arc endpoints are the mediants with the neighbouring fractions; the arc
    at 0/1 wraps around and reaches 1/(order+1) to either side.  The arcs
    tile [0, 1) up to the wrap shift, with total measure exactly 1.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    fr = farey_fractions(order)
    fr_ext = [(fr[-1][0] - fr[-1][1], fr[-1][1])] + fr + [(1, 1)]
    arcs = []
    for i in range(1, len(fr_ext) - 1):
        (hp, kp), (h, k), (hn, kn) = fr_ext[i - 1], fr_ext[i], fr_ext[i + 1]
        left_mediant = Fraction(h + hp, k + kp)
        right_mediant = Fraction(h + hn, k + kn)
        arcs.append(FareyArc(
            h=h, k=k,
            theta_left=Fraction(h, k) - left_mediant,
            theta_right=right_mediant - Fraction(h, k),
            order=order,
        ))
    return arcs


# ---------------------------------------------------------------------------
# diagnostic quadrature (plain multiprecision, stated tolerance)
# ---------------------------------------------------------------------------

def _romberg(f: Callable, a: mpmath.mpf, b: mpmath.mpf, tol, max_depth: int
             ) -> tuple[mpmath.mpc, float]:
    """Trapezoid with Richardson extrapolation on dyadic refinements.

    `f(x, pos)` receives the dyadic position pos = (i, n) of the node so the
    caller can memoize expensive sub-factors shared between integrals over
    the same interval.  Returns (value, estimated error).
    """
    h = b - a
    rows = [[(f(a, (0, 1)) + f(b, (1, 1))) * h / 2]]
    err = mpmath.inf
    for depth in range(1, max_depth + 1):
        n = 2 ** depth
        h = (b - a) / n
        total = mpmath.mpc(0)
        for i in range(1, n, 2):
            total += f(a + i * h, (i, n))
        row = [rows[-1][0] / 2 + total * h]
        for m, prev in enumerate(rows[-1], start=1):
            row.append(row[-1] + (row[-1] - prev) / (4 ** m - 1))
        rows.append(row)
        if depth >= 3:
            err = abs(row[-1] - rows[-2][-1])
            if err < tol:
                return row[-1], float(err)
    return rows[-1][-1], float(err)


def _psi_product_mpc(spec: ProductSpec, tau: mpmath.mpc, prec_dps: int) -> mpmath.mpc:
    out = mpmath.mpc(1)
    floor = mpmath.mpf(10) ** (-(prec_dps + 8))
    for r, m, delta in spec.factors:
        q = mpmath.exp(2j * mpmath.pi * (m * tau))
        xi = mpmath.exp(2j * mpmath.pi * (r * tau))
        val = mpmath.mpc(1)
        for z0 in (xi, q / xi):
            zk = z0
            while abs(zk) > floor:
                val *= (1 - zk)
                zk *= q
        out *= val ** delta
    return out


def numeric_coefficients(spec: ProductSpec, ns: Sequence[int], order: int = 6,
                         dps: int = 40, tol: float = 1e-8,
                         max_depth: int = 13) -> dict[int, mpmath.mpf]:
    """Coefficients alpha(n) for all n in `ns` by arc-by-arc quadrature.

    Diagnostic only: adaptive trapezoid with Richardson extrapolation at the
    stated (not certified) tolerance.  The psi product on an arc does not
    depend on n, so its values are cached per dyadic node and shared across
    all requested indices.  Arcs are processed in (k, h) order, making the
    summation order deterministic.
    """
    if order < 2:
        raise ValueError("need Farey order >= 2")
    rho = Fraction(1, order * order)
    out = {n: mpmath.mpf(0) for n in ns}
    with mp.workdps(dps):
        rho_mp = mpmath.mpf(rho.numerator) / rho.denominator
        for arc in sorted(farey_arcs(order), key=lambda a: (a.k, a.h)):
            a = -mpmath.mpf(arc.theta_left.numerator) / arc.theta_left.denominator
            b = mpmath.mpf(arc.theta_right.numerator) / arc.theta_right.denominator
            centre = mpmath.mpf(arc.h) / arc.k
            fcache: dict = {}

            def f_at(phi, pos, _centre=centre, _cache=fcache):
                v = _cache.get(pos)
                if v is None:
                    v = _psi_product_mpc(spec, _centre + phi + 1j * rho_mp, dps)
                    _cache[pos] = v
                return v

            for n in ns:
                damp = mpmath.exp(2 * mpmath.pi * n * rho_mp)
                phase = mpmath.exp(-2j * mpmath.pi * n * centre)

                def g(phi, pos, _n=n, _damp=damp):
                    return f_at(phi, pos) * _damp * mpmath.exp(-2j * mpmath.pi * _n * phi)

                val, _ = _romberg(g, a, b, mpmath.mpf(tol), max_depth)
                out[n] += mpmath.re(phase * val)
        result = {n: +out[n] for n in ns}
    return result


def numeric_coefficient(spec: ProductSpec, n: int, order: int = 6,
                        dps: int = 40, tol: float = 1e-9) -> Enclosure:
    """Single-coefficient diagnostic estimate, reported as value +- stated tolerance.

    The interval radius reflects the quadrature's stated tolerance, not a
    certified bound; use the exact engine for proofs.
    """
    val = numeric_coefficients(spec, [n], order=order, dps=dps, tol=tol)[n]
    pad = mpmath.mpf(tol) * max(1, abs(val))
    return Enclosure.from_endpoints(val - pad, val + pad)


def lemma_arc_integral(a_par: Fraction, b_par: Fraction, k: int, n: int, order: int,
                       h: int | None = None, dps: int = 40,
                       max_depth: int = 16) -> dict:
    """Spot check of the single-arc Bessel evaluation used for main terms.

    Numerically integrates
        I = int_arc e^{(pi/12k)(b z + a/z)} e^{-2 pi i n phi} e^{2 pi n rho} dphi,
    z = k(rho - i phi), rho = 1/order^2, over the arc at h/k of the given
    Farey order, and compares with

        main = (2 pi / k) ((24 n + b)/a)^{-1/2} I_{-1}((pi/6k) sqrt(a (24 n + b)))

    against the stated bound |I - main| <= e^{pi a/3} e^{2 pi rho (n + b/24)} / (pi (n + b/24)).
    Requires n > b/24.
    """
    if a_par <= 0:
        raise ValueError("a must be positive")
    if Fraction(n) <= b_par / 24:
        raise ValueError("need n > b/24")
    if h is None:
        h = 1 if k > 1 else 0
    arcs = [arc for arc in farey_arcs(order) if arc.k == k and arc.h == h]
    if not arcs:
        raise ValueError(f"{h}/{k} is not an order-{order} Farey fraction")
    arc = arcs[0]
    rho = Fraction(1, order * order)
    from .analytic import bessel_im1

    with mp.workdps(dps):
        rr = mpmath.mpf(rho.numerator) / rho.denominator
        aa = mpmath.mpf(a_par.numerator) / a_par.denominator
        bb = mpmath.mpf(b_par.numerator) / b_par.denominator

        def g(phi, _pos):
            zz = k * (rr - 1j * phi)
            return (mpmath.exp(mpmath.pi / (12 * k) * (bb * zz + aa / zz))
                    * mpmath.exp(-2j * mpmath.pi * n * phi)
                    * mpmath.exp(2 * mpmath.pi * n * rr))

        lo = -mpmath.mpf(arc.theta_left.numerator) / arc.theta_left.denominator
        hi = mpmath.mpf(arc.theta_right.numerator) / arc.theta_right.denominator
        val, err = _romberg(g, lo, hi, mpmath.mpf(10) ** (-(dps - 12)), max_depth)
        m = 24 * n + b_par
        bessel_arg = (Enclosure.pi() / (6 * k)) * Enclosure.from_fraction(a_par * m).sqrt()
        main = (2 * Enclosure.pi() / k) * bessel_im1(bessel_arg) \
            * Enclosure.from_fraction(a_par / m).sqrt()
        bound = ((Enclosure.pi() * Enclosure.from_fraction(a_par) / 3).exp()
                 * (2 * Enclosure.pi() * Enclosure.from_fraction(rho * (n + b_par / 24))).exp()
                 / (Enclosure.pi() * Enclosure.from_fraction(n + b_par / 24)))
        diff = abs(val - mpmath.mpf(main.mid))
        report = {
            "a": str(a_par), "b": str(b_par), "k": k, "n": n, "order": order, "h": h,
            "integral_re": float(mpmath.re(val)), "integral_im": float(mpmath.im(val)),
            "quadrature_err": float(err),
            "main": float(main.mid),
            "abs_error": float(diff),
            "bound": float(bound.lo),
            "ok": bool(diff < bound.lo),
        }
    return report
