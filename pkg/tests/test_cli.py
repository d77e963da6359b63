import json
import subprocess
import sys

import pytest

from qsign.cli import build_parser, main


def run_cli(args, **kw):
    return subprocess.run([sys.executable, "-m", "qsign.cli", *args],
                          capture_output=True, text=True, **kw)


class TestExpand:
    def test_csv_row_count(self):
        res = run_cli(["expand", "--spec", "A", "--trunc", "20", "--format", "csv"])
        assert res.returncode == 0
        lines = res.stdout.strip().splitlines()
        assert lines[0] == "index,coefficient"
        assert len(lines) == 22

    def test_unknown_spec_lists_registered(self):
        res = run_cli(["expand", "--spec", "bogus", "--trunc", "5"])
        assert res.returncode != 0
        assert "registered specs" in res.stderr

    def test_inline_spec_json(self):
        spec = '[{"r": 1, "m": 2, "delta": -1}]'
        res = run_cli(["expand", "--spec-json", spec, "--trunc", "6"])
        assert res.returncode == 0
        rows = [line.split(",") for line in res.stdout.strip().splitlines()[1:]]
        # 1/(q, q; q^2): pairs of odd-part partitions; convolve 1,1,1,2,2,3,4
        p_odd = [1, 1, 1, 2, 2, 3, 4]
        expected = [sum(p_odd[k] * p_odd[n - k] for k in range(n + 1)) for n in range(7)]
        assert [int(c) for _, c in rows] == expected == [1, 2, 3, 6, 9, 14, 22]

    def test_json_format_stable(self):
        res = run_cli(["expand", "--spec", "c", "--trunc", "4", "--format", "json"])
        payload = json.loads(res.stdout)
        # hand-checked: (1 - q^2 - q^3)(1 + q + q^2 + q^3 + 2 q^4) + O(q^5)
        assert payload == {"spec": "c", "trunc": 4,
                           "coeffs": ["1", "1", "0", "-1", "0"]}

    def test_out_file(self, tmp_path):
        path = tmp_path / "coeffs.csv"
        res = run_cli(["expand", "--spec", "d", "--trunc", "8", "--out", str(path)])
        assert res.returncode == 0
        assert path.read_text().startswith("index,coefficient\n0,1\n")


class TestCertifyCommand:
    def test_exit_zero_and_schema(self, tmp_path):
        path = tmp_path / "cert.json"
        res = run_cli(["certify", "--target", "A5n", "--out", str(path)])
        assert res.returncode == 0
        cert = json.loads(path.read_text())
        assert cert["target"] == "A5n"
        assert cert["finite"]["all_ok"] is True
        assert cert["meta"]["hash"]

    def test_unknown_target(self):
        res = run_cli(["certify", "--target", "nope"])
        assert res.returncode != 0


class TestTables:
    def test_delta_table(self):
        res = run_cli(["delta", "--spec", "A"])
        assert res.returncode == 0
        lines = res.stdout.strip().splitlines()
        assert lines[0] == "spec,aleph,l,delta_num,delta_den,in_Lpos"
        rows = [line.split(",") for line in lines[1:]]
        by_class = {(int(r[1]), int(r[2])): (int(r[3]), int(r[4]), r[5]) for r in rows}
        assert by_class[(1, 5)] == (24, 1, "True")
        assert by_class[(2, 5)] == (-24, 1, "False")
        # the four level-5 classes carry delta = +/-24
        level5 = {k: v for k, v in by_class.items() if k[1] == 5}
        assert {v[0] for v in level5.values()} == {24, -24}

    def test_delta_debug_variants_column(self):
        res = run_cli(["delta", "--spec", "A", "--debug-variants"])
        assert "delta_display_num" in res.stdout.splitlines()[0]


class TestDominanceCommand:
    def test_verdict_true_at_805(self):
        res = run_cli(["dominance", "--family", "A", "--n", "805"])
        assert res.returncode == 0
        payload = json.loads(res.stdout)
        assert payload["verdict"] is True
        assert payload["precision_bits"] >= 192
        assert set(payload) == {"family", "n", "main_lo", "main_hi", "bound_hi",
                                "verdict", "precision_bits"}


class TestXcheck:
    def test_psi_identity_run(self):
        res = run_cli(["xcheck", "--identity", "psi", "--samples", "4",
                       "--seed", "7", "--workers", "1"])
        assert res.returncode == 0
        payload = json.loads(res.stdout)
        assert payload["max_residual"] < 1e-25
        assert payload["samples"] == 4 and payload["seed"] == 7

    def test_worker_count_does_not_change_result(self):
        one = run_cli(["xcheck", "--identity", "quasiperiodicity", "--samples", "6",
                       "--seed", "3", "--workers", "1"])
        two = run_cli(["xcheck", "--identity", "quasiperiodicity", "--samples", "6",
                       "--seed", "3", "--workers", "2"])
        a, b = json.loads(one.stdout), json.loads(two.stdout)
        del a["elapsed_s"], b["elapsed_s"]
        assert a == b

    def test_unknown_identity(self):
        res = run_cli(["xcheck", "--identity", "wat"])
        assert res.returncode != 0


class TestPrecisionControls:
    def test_env_override(self):
        import os

        env = dict(os.environ, QSIGN_PRECISION="96")
        res = run_cli(["dominance", "--family", "A", "--n", "805"], env=env)
        payload = json.loads(res.stdout)
        assert payload["precision_bits"] == 96

    def test_flag_beats_default(self):
        res = run_cli(["dominance", "--family", "A", "--n", "805",
                       "--precision", "256"])
        payload = json.loads(res.stdout)
        assert payload["precision_bits"] == 256


class TestBench:
    def test_bench_reports_timing(self):
        res = run_cli(["bench", "--spec", "c", "--trunc", "2000"])
        payload = json.loads(res.stdout)
        assert payload["spec"] == "c" and payload["trunc"] == 2000
        assert payload["seconds"] >= 0


def test_parser_covers_documented_flags():
    parser = build_parser()
    text = parser.format_help()
    for sub in ("expand", "certify", "delta", "dominance", "xcheck", "bench"):
        assert sub in text
