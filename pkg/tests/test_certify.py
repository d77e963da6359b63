import hashlib
import json

import pytest

from qsign.certify import (KNOWN_PATTERNS, TARGETS, CertifyResult, SignViolation,
                           certificate_consistency, certify, richmond_szekeres_scan,
                           verify_known_theorems)
from qsign.qseries import slice_indices


class TestCertify:
    @pytest.mark.parametrize("target", ["A5n", "B5n"])
    def test_fifth_power_targets_certify(self, target, series_a_1000, series_b_1000):
        result = certify(target)
        assert result.ok and result.exit_code == 0
        cert = result.certificate
        assert cert["finite"]["all_ok"] and not cert["finite"]["exceptions"]
        assert cert["asymptotic"]["monotone_ok"] is True
        assert cert["asymptotic"]["n0"] == 801

    def test_level25_target_certifies(self, series_d_19501):
        result = certify("D5n1")
        assert result.ok and result.exit_code == 0
        assert result.certificate["asymptotic"]["n0"] == 19001
        assert result.certificate["finite"]["hi"] == 19501

    def test_no_gap_between_finite_and_asymptotic(self):
        for key, target in TARGETS.items():
            assert target.finite_last_index >= target.threshold_index

    def test_certificates_reproducible(self, series_a_1000):
        a = certify("A5n")
        b = certify("A5n")
        assert json.dumps(a.certificate) == json.dumps(b.certificate)

    def test_hash_is_content_hash(self, series_a_1000):
        cert = dict(certify("A5n").certificate)
        recorded = cert["meta"]["hash"]
        cert["meta"] = dict(cert["meta"])
        cert["meta"]["hash"] = ""
        recomputed = hashlib.sha256(
            json.dumps(cert, separators=(",", ":"), sort_keys=False).encode()
        ).hexdigest()
        assert recorded == recomputed

    def test_schema_field_order(self, series_a_1000):
        cert = certify("A5n").certificate
        assert list(cert) == ["schema_version", "target", "spec", "finite",
                              "asymptotic", "meta"]
        assert list(cert["finite"]) == ["lo", "hi", "trunc", "all_ok", "exceptions"]
        assert list(cert["asymptotic"]) == ["n0", "precision_bits", "main_lo",
                                            "bound_hi", "monotone_ok"]
        assert list(cert["meta"]) == ["version", "seed", "hash"]

    def test_unknown_target_lists_registered(self):
        with pytest.raises(KeyError, match="registered"):
            certify("Z9")

    def test_modular_table_consistency(self, series_a_1000):
        assert certificate_consistency(certify("A5n"))

    def test_violation_produces_invalid_partial_certificate(self, monkeypatch):
        # corrupt the expansion cache so one claimed-negative coefficient is positive
        from qsign import certify as certify_mod
        from qsign.qseries import QSeries

        real = certify_mod.cached_expansion("A", 1000)
        coeffs = list(real.coeffs)
        coeffs[505] = 1
        fake = QSeries(1000, tuple(coeffs))
        monkeypatch.setitem(certify_mod._EXPANSION_CACHE, ("A", 1000), fake)
        result = certify("A5n")
        assert not result.ok and result.exit_code == 2
        assert result.certificate["finite"]["exceptions"] == [505]
        assert "invalid" in result.certificate["meta"]
        monkeypatch.undo()


class TestKnownTheorems:
    def test_all_patterns_hold_to_800(self, series_800):
        tables = verify_known_theorems(800)
        assert set(tables) == {"A", "B", "C", "D"}
        assert all(t.ok for t in tables.values())

    def test_pattern_shapes(self):
        assert len(KNOWN_PATTERNS["C"]) == 5
        assert len(KNOWN_PATTERNS["D"]) == 4

    def test_specific_residue_signs(self, series_800):
        a = series_800["A"]
        for idx in slice_indices(1, 5, 1, 800):
            assert a.coeffs[idx] > 0
        d = series_800["D"]
        for idx in slice_indices(0, 5, 5, 800):
            assert d.coeffs[idx] < 0

    def test_violation_raises_with_index(self, monkeypatch):
        from qsign import certify as certify_mod
        from qsign.qseries import QSeries

        real = certify_mod.cached_expansion("C", 800)
        coeffs = list(real.coeffs)
        coeffs[11] = -coeffs[11]
        monkeypatch.setitem(certify_mod._EXPANSION_CACHE, ("C", 800),
                            QSeries(800, tuple(coeffs)))
        with pytest.raises(SignViolation, match="index 11"):
            verify_known_theorems(800)
        monkeypatch.undo()


class TestEventualPatternScan:
    def test_cutoffs_and_exceptions(self):
        scans = richmond_szekeres_scan(2000)
        for name, scan in scans.items():
            assert scan.cutoff <= 100
            assert all(e < scan.cutoff for e in scan.exceptions)

    def test_no_exceptions_past_hundred(self):
        scans = richmond_szekeres_scan(2000)
        for scan in scans.values():
            assert not [e for e in scan.exceptions if e >= 100]

    def test_exception_indices_are_zero_coefficients_or_wrong_sign(self):
        from qsign.certify import RICHMOND_SZEKERES_PATTERNS, cached_expansion

        scans = richmond_szekeres_scan(400)
        for name, scan in scans.items():
            series = cached_expansion(name, 400)
            pattern = RICHMOND_SZEKERES_PATTERNS[name]
            for e in scan.exceptions:
                c = series.coeffs[e]
                assert (c > 0) - (c < 0) != pattern[e % 5]
