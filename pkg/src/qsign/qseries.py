"""Exact truncated power series over arbitrary-precision integers.

Everything here is exact: a series is a list of Python ints giving the
coefficients of q^0 .. q^N.  The expansion targets are quotients of
q-Pochhammer symbols

    (q^a; q^m)_inf = prod_{k>=0} (1 - q^{a+km}),

in particular the two-variable building block

    psi(r, m) := (q^r; q^m)_inf (q^{m-r}; q^m)_inf,

whose integer powers assemble the fifth powers of the Rogers-Ramanujan
continued fraction and their level-25 companions.

The default product expander routes each psi factor through the Jacobi
triple product,

    (q^r, q^{m-r}; q^m)_inf (q^m; q^m)_inf = sum_j (-1)^j q^{rj + m j(j-1)/2},

so multiplying or dividing by a psi factor is a sparse pass with O(sqrt(N/m))
terms instead of a dense O(N^2/m) factor sweep.  Residual (q^m; q^m)_inf
powers are handled with the sparse pentagonal-number series.  A literal
factor-by-factor expander is kept as ``expand_product_reference`` and the
two are required to agree exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Iterator, Sequence, TextIO


class TruncationMismatchError(ValueError):
    """Arithmetic on series with different truncation orders is refused."""


class ConstantTermError(ValueError):
    """Series inversion requires constant term exactly 1."""


@dataclass(frozen=True)
class QSeries:
    """Truncated formal power series sum_{n<=N} coeffs[n] q^n with N = trunc_order."""

    trunc_order: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.trunc_order < 0:
            raise ValueError("truncation order must be nonnegative")
        if len(self.coeffs) != self.trunc_order + 1:
            raise ValueError(
                f"coefficient list has length {len(self.coeffs)}, "
                f"expected trunc_order + 1 = {self.trunc_order + 1}"
            )

    @staticmethod
    def one(trunc_order: int) -> "QSeries":
        return QSeries(trunc_order, (1,) + (0,) * trunc_order)

    @staticmethod
    def from_coeffs(coeffs: Sequence[int]) -> "QSeries":
        return QSeries(len(coeffs) - 1, tuple(coeffs))

    def coeff(self, n: int) -> int:
        if not 0 <= n <= self.trunc_order:
            raise IndexError(f"index {n} outside truncation order {self.trunc_order}")
        return self.coeffs[n]

    def __mul__(self, other: "QSeries") -> "QSeries":
        return ps_mul(self, other)

    def inverse(self) -> "QSeries":
        return ps_inv(self)


def ps_mul(a: QSeries, b: QSeries) -> QSeries:
    """Exact Cauchy product truncated at the common truncation order."""
    if a.trunc_order != b.trunc_order:
        raise TruncationMismatchError(
            f"truncation orders differ: {a.trunc_order} != {b.trunc_order}"
        )
    n = a.trunc_order
    ca, cb = a.coeffs, b.coeffs
    out = [0] * (n + 1)
    for i, ai in enumerate(ca):
        if ai:
            for j in range(n + 1 - i):
                bj = cb[j]
                if bj:
                    out[i + j] += ai * bj
    return QSeries(n, tuple(out))


def ps_inv(a: QSeries) -> QSeries:
    """Multiplicative inverse via b[n] = -sum_{k=1..n} a[k] b[n-k]; needs a[0] == 1."""
    if a.coeffs[0] != 1:
        raise ConstantTermError(f"constant term is {a.coeffs[0]}, must be 1")
    n = a.trunc_order
    ca = a.coeffs
    b = [0] * (n + 1)
    b[0] = 1
    for i in range(1, n + 1):
        s = 0
        for k in range(1, i + 1):
            ak = ca[k]
            if ak:
                s += ak * b[i - k]
        b[i] = -s
    return QSeries(n, tuple(b))


# ---------------------------------------------------------------------------
# dense in-place passes for single binomial factors (1 - q^c)
# ---------------------------------------------------------------------------

def _mul_one_minus_qc(coeffs: list[int], c: int) -> list[int]:
    n = len(coeffs) - 1
    out = coeffs[:]
    for i in range(n, c - 1, -1):
        out[i] -= coeffs[i - c]
    return out


def _div_one_minus_qc(coeffs: list[int], c: int) -> list[int]:
    out = coeffs[:]
    for i in range(c, len(out)):
        out[i] += out[i - c]
    return out


def expand_pochhammer(a: int, m: int, trunc_order: int) -> QSeries:
    """Expansion of (q^a; q^m)_inf = prod_{k>=0}(1 - q^{a+km}) to the given order.

    Factors with a + km beyond the truncation order cannot affect the result
    and are skipped.
    """
    if a < 1:
        raise ValueError("offset a must be >= 1")
    if m < 1:
        raise ValueError("modulus m must be >= 1")
    coeffs = [0] * (trunc_order + 1)
    coeffs[0] = 1
    for c in range(a, trunc_order + 1, m):
        coeffs = _mul_one_minus_qc(coeffs, c)
    return QSeries(trunc_order, tuple(coeffs))


# ---------------------------------------------------------------------------
# product specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PochhammerFactor:
    """Single symbol (q^a; q^m)_inf^e."""

    a: int
    m: int
    e: int

    def __post_init__(self) -> None:
        if self.a < 1 or self.m < 1 or self.a > self.m:
            raise ValueError("need 1 <= a <= m")
        if self.e == 0:
            raise ValueError("exponent must be nonzero")


@dataclass(frozen=True)
class ProductSpec:
    """Product prod_j psi(r_j, m_j)^{delta_j} with psi(r, m) = (q^r, q^{m-r}; q^m)_inf."""

    factors: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if not self.factors:
            raise ValueError("product spec needs at least one factor")
        for r, m, delta in self.factors:
            if not 1 <= r < m:
                raise ValueError(f"need 1 <= r < m, got (r, m) = ({r}, {m})")
            if delta == 0:
                raise ValueError("delta must be nonzero")

    @property
    def level(self) -> int:
        """lcm of the factor moduli."""
        out = 1
        for _, m, _ in self.factors:
            out = out * m // gcd(out, m)
        return out

    def reciprocal(self) -> "ProductSpec":
        return ProductSpec(tuple((r, m, -d) for r, m, d in self.factors))

    def to_json(self) -> str:
        return json.dumps([{"r": r, "m": m, "delta": d} for r, m, d in self.factors])

    @staticmethod
    def from_json(text: str) -> "ProductSpec":
        data = json.loads(text)
        if not isinstance(data, list):
            raise ValueError("spec literal must be a JSON array")
        return ProductSpec(tuple((int(f["r"]), int(f["m"]), int(f["delta"])) for f in data))


#: 1/R^5, R^5, R^5/R(q^5), R(q^5)/R^5, 1/R, R -- R the Rogers-Ramanujan
#: continued fraction with the q^{1/5} factor removed.
REGISTERED_SPECS: dict[str, ProductSpec] = {
    "A": ProductSpec(((2, 5, 5), (1, 5, -5))),
    "B": ProductSpec(((2, 5, -5), (1, 5, 5))),
    "C": ProductSpec(((2, 5, -5), (1, 5, 5), (5, 25, -1), (10, 25, 1))),
    "D": ProductSpec(((2, 5, 5), (1, 5, -5), (5, 25, 1), (10, 25, -1))),
    "c": ProductSpec(((2, 5, 1), (1, 5, -1))),
    "d": ProductSpec(((2, 5, -1), (1, 5, 1))),
}


def registered_spec(name: str) -> ProductSpec:
    try:
        return REGISTERED_SPECS[name]
    except KeyError:
        known = ", ".join(sorted(REGISTERED_SPECS))
        raise KeyError(f"unknown spec {name!r}; registered specs: {known}") from None


# ---------------------------------------------------------------------------
# sparse triple-product engine
# ---------------------------------------------------------------------------

def _triple_product_terms(r: int, m: int, trunc_order: int) -> list[tuple[int, int]]:
    """Sparse terms of sum_j (-1)^j q^{rj + m j(j-1)/2}, exponent <= trunc_order."""
    terms = []
    for step in (1, -1):
        j = 0 if step == 1 else -1
        while True:
            e = r * j + m * j * (j - 1) // 2
            if e > trunc_order:
                break
            terms.append((e, -1 if j & 1 else 1))
            j += step
    terms.sort()
    return terms


def _pentagonal_terms(m: int, trunc_order: int) -> list[tuple[int, int]]:
    """Sparse terms of (q^m; q^m)_inf = sum_j (-1)^j q^{m j(3j-1)/2}."""
    terms = []
    for step in (1, -1):
        j = 0 if step == 1 else -1
        while True:
            e = m * j * (3 * j - 1) // 2
            if e > trunc_order:
                break
            terms.append((e, -1 if j & 1 else 1))
            j += step
    # j=0 appears once only
    terms = sorted(set(terms))
    return terms


def _sparse_mul(coeffs: list[int], terms: list[tuple[int, int]]) -> list[int]:
    n = len(coeffs) - 1
    out = [0] * (n + 1)
    for e, s in terms:
        if s > 0:
            for i in range(n + 1 - e):
                v = coeffs[i]
                if v:
                    out[i + e] += v
        else:
            for i in range(n + 1 - e):
                v = coeffs[i]
                if v:
                    out[i + e] -= v
    return out


def _sparse_div(coeffs: list[int], terms: list[tuple[int, int]]) -> list[int]:
    if terms[0] != (0, 1):
        raise ConstantTermError("sparse divisor must have constant term 1")
    rest = terms[1:]
    n = len(coeffs) - 1
    out = [0] * (n + 1)
    for i in range(n + 1):
        s = coeffs[i]
        for e, c in rest:
            if e > i:
                break
            if c > 0:
                s -= out[i - e]
            else:
                s += out[i - e]
        out[i] = s
    return out


def expand_product(spec: ProductSpec, trunc_order: int) -> QSeries:
    """Exact expansion of prod_j (q^{r_j}, q^{m_j - r_j}; q^{m_j})_inf^{delta_j}.

    Each psi factor is the triple-product series divided by (q^m; q^m)_inf,
    so the expansion applies sparse triple-product passes and corrects with
    pentagonal-number passes for whatever eta-type powers do not cancel.
    The result is independent of factor order (all arithmetic is exact).
    """
    n = trunc_order
    coeffs = [0] * (n + 1)
    coeffs[0] = 1
    eta_exponents: dict[int, int] = {}
    mul_passes: list[list[tuple[int, int]]] = []
    div_passes: list[list[tuple[int, int]]] = []
    for r, m, delta in spec.factors:
        terms = _triple_product_terms(r, m, n)
        for _ in range(abs(delta)):
            (mul_passes if delta > 0 else div_passes).append(terms)
        eta_exponents[m] = eta_exponents.get(m, 0) - delta
    for m in sorted(eta_exponents):
        e = eta_exponents[m]
        terms = _pentagonal_terms(m, n)
        for _ in range(abs(e)):
            (mul_passes if e > 0 else div_passes).append(terms)
    # multiplications first: they keep intermediate coefficients small
    for terms in mul_passes:
        coeffs = _sparse_mul(coeffs, terms)
    for terms in div_passes:
        coeffs = _sparse_div(coeffs, terms)
    return QSeries(n, tuple(coeffs))


def expand_product_reference(spec: ProductSpec, trunc_order: int) -> QSeries:
    """Literal factor-by-factor expansion; negative exponents via ps_inv.

    O(N^2/m) per Pochhammer symbol plus one dense inversion/multiplication.
    Slow but independent of the sparse engine; the two must agree exactly.
    """
    n = trunc_order
    pos = [0] * (n + 1)
    pos[0] = 1
    neg = pos[:]
    for r, m, delta in spec.factors:
        target = pos if delta > 0 else neg
        for _ in range(abs(delta)):
            for a in (r, m - r):
                for c in range(a, n + 1, m):
                    target2 = _mul_one_minus_qc(target, c)
                    target[:] = target2
    positive = QSeries(n, tuple(pos))
    negative = QSeries(n, tuple(neg))
    return ps_mul(positive, ps_inv(negative))


# ---------------------------------------------------------------------------
# Rogers-Ramanujan sum sides
# ---------------------------------------------------------------------------

def rr_sum_side(variant: str, trunc_order: int) -> QSeries:
    """Truncation of sum_n q^{n^2}/(q; q)_n ("G") or sum_n q^{n^2+n}/(q; q)_n ("H").

    Terms with leading exponent beyond the truncation order vanish, so the
    sum is finite.  The classical identities say G equals the reciprocal of
    (q, q^4; q^5)_inf and H the reciprocal of (q^2, q^3; q^5)_inf.
    """
    if variant not in ("G", "H"):
        raise ValueError("variant must be 'G' or 'H'")
    n = trunc_order
    total = [0] * (n + 1)
    total[0] = 1
    term = [0] * (n + 1)
    term[0] = 1
    k = 1
    while True:
        lead = k * k if variant == "G" else k * k + k
        if lead > n:
            break
        # term_k = term_{k-1} * q^{lead_k - lead_{k-1}} / (1 - q^k)
        shift = lead - ((k - 1) ** 2 if variant == "G" else (k - 1) ** 2 + (k - 1))
        term = [0] * shift + term[: n + 1 - shift]
        term = _div_one_minus_qc(term, k)
        for i in range(lead, n + 1):
            total[i] += term[i]
        k += 1
    return QSeries(n, tuple(total))


# ---------------------------------------------------------------------------
# sign extraction and serialization
# ---------------------------------------------------------------------------

def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def slice_signs(s: QSeries, residue: int, modulus: int, lo: int, hi: int) -> list[int]:
    """Signs (-1/0/+1) of coefficients at indices == residue (mod modulus) in [lo, hi]."""
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if hi > s.trunc_order:
        raise TruncationMismatchError(
            f"range end {hi} exceeds truncation order {s.trunc_order}"
        )
    if lo < 0 or lo > hi:
        raise ValueError(f"bad index range [{lo}, {hi}]")
    start = lo + (residue - lo) % modulus
    return [_sign(s.coeffs[i]) for i in range(start, hi + 1, modulus)]


def slice_indices(residue: int, modulus: int, lo: int, hi: int) -> range:
    start = lo + (residue - lo) % modulus
    return range(start, hi + 1, modulus)


def series_to_csv(s: QSeries, out: TextIO) -> None:
    """Dump `index,coefficient` rows, one per n up to the truncation order."""
    out.write("index,coefficient\n")
    for n, c in enumerate(s.coeffs):
        out.write(f"{n},{c}\n")


def iter_csv_rows(s: QSeries) -> Iterator[str]:
    yield "index,coefficient"
    for n, c in enumerate(s.coeffs):
        yield f"{n},{c}"
