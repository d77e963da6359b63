import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from qsign.modular import (GammaMatrix, NotCoprimeError, class_representative,
                           dedekind_sum, dedekind_sum_direct, dedekind_sums_direct_all,
                           delta_at, delta_of, delta_table_rows, factor_transform,
                           gamma_action_coeffs, gamma_of, hbar_of, lambda_pair,
                           lpos_set, omega_exact, omega_of, phase_data, sawtooth,
                           transform_data)
from qsign.qseries import ProductSpec, registered_spec


def sawtooth_reference(x: Fraction) -> Fraction:
    if x.denominator == 1:
        return Fraction(0)
    return x - (x.numerator // x.denominator) - Fraction(1, 2)


def dedekind_by_sawtooth(d: int, c: int) -> Fraction:
    return sum((sawtooth(Fraction(d * n, c)) * sawtooth(Fraction(n, c))
                for n in range(1, c)), Fraction(0))


class TestSawtooth:
    def test_integer(self):
        assert sawtooth(3) == 0

    def test_half(self):
        assert sawtooth(Fraction(1, 2)) == 0

    def test_seven_thirds(self):
        assert sawtooth(Fraction(7, 3)) == Fraction(-1, 6)

    @given(num=st.integers(-40, 40), den=st.integers(1, 23))
    def test_periodic_and_odd(self, num, den):
        x = Fraction(num, den)
        assert sawtooth(x + 1) == sawtooth(x)
        assert sawtooth(-x) == -sawtooth(x)


class TestDedekindSums:
    def test_trivial_modulus(self):
        assert dedekind_sum(1, 1) == 0

    def test_one_third(self):
        assert dedekind_sum(1, 3) == Fraction(1, 18)
        assert dedekind_sum_direct(1, 3) == Fraction(1, 18)

    def test_oddness(self):
        assert dedekind_sum(-2, 5) == -dedekind_sum(2, 5)

    def test_rejects_common_factor(self):
        with pytest.raises(NotCoprimeError):
            dedekind_sum(2, 4)

    @given(c=st.integers(1, 60), d=st.integers(1, 200))
    @settings(max_examples=80, deadline=None)
    def test_accelerated_matches_definitional(self, c, d):
        if gcd(d, c) != 1:
            d = 1
        assert dedekind_sum(d, c) == dedekind_sum_direct(d, c)

    @given(c=st.integers(2, 40))
    @settings(max_examples=25, deadline=None)
    def test_direct_formula_matches_sawtooth_sum(self, c):
        for d in range(1, c):
            if gcd(d, c) == 1:
                assert dedekind_sum_direct(d, c) == dedekind_by_sawtooth(d, c)

    def test_vectorized_sweep_matches_scalar(self):
        for c in (1, 2, 12, 35):
            table = dedekind_sums_direct_all(c)
            for d, v in table.items():
                assert v == dedekind_sum_direct(d, c) or c == 1

    @given(c=st.integers(1, 120), d=st.integers(1, 120))
    @settings(max_examples=60, deadline=None)
    def test_reciprocity(self, c, d):
        if gcd(d, c) != 1:
            return
        lhs = dedekind_sum(d, c) + dedekind_sum(c, d)
        rhs = Fraction(-1, 4) + (Fraction(c, d) + Fraction(d, c) + Fraction(1, c * d)) / 12
        assert lhs == rhs


class TestGammaData:
    def test_level_five_at_one_fifth(self):
        g = gamma_of(5, 1, 5)
        assert (g.a, g.b, g.c, g.d) == (0, -1, 1, -1)

    def test_level_five_at_one_half(self):
        assert hbar_of(5, 1, 2) == 1
        g = gamma_of(5, 1, 2)
        assert (g.a, g.c, g.d) == (1, 2, -5)

    @given(m=st.integers(1, 30), k=st.integers(1, 40), h=st.integers(0, 39))
    @settings(max_examples=200, deadline=None)
    def test_determinant_one(self, m, k, h):
        h %= k
        if gcd(h, k) != 1:
            return
        g = gamma_of(m, h, k)
        assert g.a * g.d - g.b * g.c == 1

    def test_lambda_examples(self):
        assert lambda_pair(5, 2, 1, 5) == (1, Fraction(3, 5))
        assert lambda_pair(5, 1, 2, 5) == (1, Fraction(3, 5))
        assert lambda_pair(7, 3, 0, 1) == (0, Fraction(0))

    @given(m=st.integers(2, 20), r=st.integers(1, 19), k=st.integers(1, 30),
           h=st.integers(0, 29))
    @settings(max_examples=150, deadline=None)
    def test_lambda_star_in_unit_interval(self, m, r, k, h):
        r %= m
        if r == 0:
            r = 1
        h %= k
        if gcd(h, k) != 1:
            return
        lam, lam_star = lambda_pair(m, r, h, k)
        assert 0 <= lam_star < 1
        assert lam == lam_star + Fraction(r * h, gcd(m, k))


class TestMoebiusClosedForms:
    @given(m=st.integers(1, 26), k=st.integers(1, 30), h=st.integers(0, 29),
           r=st.integers(1, 25), off=st.integers(0, 2))
    @settings(max_examples=150, deadline=None)
    def test_closed_forms_agree_with_moebius_algebra(self, m, k, h, r, off):
        h %= k
        if gcd(h, k) != 1:
            return
        r = (r % max(m - 1, 1)) + 1 if m > 1 else 1
        if m == 1:
            return
        tau_c, tau_w, sig_c, sig_w = gamma_action_coeffs(m, h, k, r, hbar_offset=off)
        ft = factor_transform(r, m, 1, h, k, hbar_offset=off)
        assert (tau_c, tau_w) == (ft.tau_const, ft.tau_wcoef)
        assert sig_c + ft.lam * tau_c == ft.sigma_const
        assert sig_w + ft.lam * tau_w == ft.sigma_wcoef


class TestGrowthExponents:
    def test_omega_values(self):
        assert omega_of(registered_spec("A")) == -24
        assert omega_of(registered_spec("B")) == 24
        assert omega_of(registered_spec("D")) == 0

    def test_omega_non_integer_warns(self):
        spec = ProductSpec(((1, 7, 1),))
        assert omega_exact(spec).denominator != 1
        with pytest.warns(UserWarning):
            val = omega_of(spec)
        assert val == omega_exact(spec)

    def test_delta_class_values(self):
        a = registered_spec("A")
        assert delta_of(a, 1, 5) == 24
        assert delta_of(a, 4, 5) == 24
        assert delta_of(a, 2, 5) == -24
        assert delta_of(a, 3, 5) == -24

    def test_delta_display_variant_differs(self):
        a = registered_spec("A")
        assert delta_of(a, 1, 5, display_variant=True) != delta_of(a, 1, 5)

    def test_positive_classes(self):
        assert lpos_set(registered_spec("A")) == {(1, 5), (4, 5)}
        assert lpos_set(registered_spec("B")) == {(2, 5), (3, 5)}

    def test_level25_positive_classes(self):
        pos = lpos_set(registered_spec("D"))
        assert len(pos) == 20
        for aleph, l in pos:
            assert aleph % 5 in (1, 4)
            assert l % 25 in (5, 10, 15, 20)
            assert delta_of(registered_spec("D"), aleph, l) == 24

    def test_no_representative_class_excluded(self):
        assert class_representative(registered_spec("A"), 0, 5) is None
        with pytest.raises(ValueError, match="no coprime representative"):
            delta_of(registered_spec("A"), 0, 5)

    @given(t=st.integers(0, 49))
    @settings(max_examples=50, deadline=None)
    def test_delta_class_invariance(self, t):
        rng = random.Random(t)
        spec = registered_spec(rng.choice(["A", "B", "D"]))
        big_l = spec.level
        l = rng.randint(1, big_l)
        aleph = rng.randint(0, l - 1)
        base = class_representative(spec, aleph, l)
        if base is None:
            return
        ref = delta_at(spec, *base)
        # a different representative of the same class
        for _ in range(20):
            k = l + big_l * rng.randint(0, 12)
            h = aleph + l * rng.randint(0, max(1, k // l))
            if 0 <= h < k and gcd(h, k) == 1:
                assert delta_at(spec, h, k) == ref

    def test_table_rows_sorted_and_flagged(self):
        rows = list(delta_table_rows("A", registered_spec("A"), debug_variants=True))
        keys = [(r["l"], r["aleph"]) for r in rows]
        assert keys == sorted(keys)
        flagged = {(r["aleph"], r["l"]) for r in rows if r["in_Lpos"]}
        assert flagged == {(1, 5), (4, 5)}
        assert all("delta_display_num" in r for r in rows)


class TestPhases:
    def test_pi_empty_when_lambda_star_nonzero(self):
        assert phase_data(registered_spec("A"), 1, 5).pi_factors == ()

    def test_omega_trivial_at_unit_denominator(self):
        pd = phase_data(registered_spec("A"), 0, 1)
        assert pd.omega.t == 0

    def test_level25_pi_factors(self):
        pd = phase_data(registered_spec("D"), 1, 5)
        assert pd.pi_factors == ((Fraction(1, 5), 1), (Fraction(2, 5), -1))

    @given(t=st.integers(0, 29))
    @settings(max_examples=30, deadline=None)
    def test_hbar_choice_does_not_move_phases(self, t):
        rng = random.Random(t)
        spec = registered_spec(rng.choice(["A", "B", "D"]))
        k = rng.randint(1, 30)
        hs = [h for h in range(k) if gcd(h, k) == 1] or [0]
        h = rng.choice(hs)
        base = phase_data(spec, h, k)
        shifted = phase_data(spec, h, k, hbar_offset=rng.randint(1, 3))
        assert base.omega == shifted.omega
        assert base.upsilon == shifted.upsilon
        assert base.pi_factors == shifted.pi_factors

    @given(t=st.integers(0, 39))
    @settings(max_examples=40, deadline=None)
    def test_transformed_first_arguments_never_integral(self, t):
        rng = random.Random(t)
        spec = registered_spec(rng.choice(["A", "B", "C", "D", "c", "d"]))
        k = rng.randint(1, 40)
        hs = [h for h in range(k) if gcd(h, k) == 1] or [0]
        h = rng.choice(hs)
        td = transform_data(spec, h, k)
        for ft in td.factors:
            if ft.lam_star == 0:
                assert ft.sigma_const % 1 != 0

    def test_chi_exponent_of_inversion(self):
        # the order-2 element: chi = e^{-pi i/4}
        g = GammaMatrix(0, -1, 1, 0)
        assert g.chi_exponent() % 2 == Fraction(-1, 4) % 2
