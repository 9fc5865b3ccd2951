"""Tests for the command-line envelope, formats, cache, and exit codes."""

from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest

import bplinks.cli as cli


def run_json(argv):
    code, text = cli.run(argv)
    return code, json.loads(text)


def payload_without_meta(envelope: dict) -> dict:
    trimmed = dict(envelope)
    trimmed.pop("meta")
    return trimmed


class TestEnvelope:
    def test_invariants_shape(self):
        code, envelope = run_json(["invariants", "--exponents", "6,3,2,2,2"])
        assert code == 0
        assert set(envelope) == {"schema", "request", "result", "provenance", "meta"}
        assert envelope["schema"] == 1
        result = envelope["result"]
        assert result["exponents"] == ["6", "3", "2", "2", "2"]
        assert result["milnor_number"] == "10"
        assert result["degree"] == "6"
        assert result["weights"] == ["1", "2", "3", "3", "3"]
        assert result["rank"] == "2"
        assert result["signature"] == "8"
        assert result["ricci_positive"] is True
        assert envelope["provenance"]["tool"] == "bplinks"
        assert isinstance(envelope["meta"]["elapsed_ms"], float)
        assert envelope["meta"]["cached"] is False

    def test_integers_are_decimal_strings_everywhere(self):
        _, envelope = run_json(["bp-order", "--m", "5"])
        result = envelope["result"]
        assert result["order"] == "261632"
        assert result["power_of_two"] == "256"
        assert all(isinstance(v, str) for v in result.values())

    def test_family_request_matches_adhoc_result(self):
        _, direct = run_json(["invariants", "--exponents", "6,3,2,2,2"])
        _, family = run_json(
            ["invariants", "--family", "sphere-product", "--n", "2", "--k", "1"]
        )
        assert direct["result"] == family["result"]
        assert family["request"]["source"] == "family"
        assert direct["request"]["source"] == "ad-hoc"

    def test_signature_without_fibre_is_null(self):
        _, envelope = run_json(["invariants", "--exponents", "2,2"])
        assert envelope["result"]["signature"] is None
        assert envelope["result"]["rank"] == "1"

    def test_determinism_outside_meta(self):
        first = run_json(["table", "--dim", "7", "--k", "1,6,7"])[1]
        second = run_json(["table", "--dim", "7", "--k", "1,6,7"])[1]
        assert payload_without_meta(first) == payload_without_meta(second)

    def test_signature_report_fields(self):
        _, envelope = run_json(
            ["signature", "--exponents", "6,3,2,2,2", "--method", "zagier", "--modulus", "12"]
        )
        result = envelope["result"]
        assert result["value"] == "8"
        assert result["method"] == "zagier"
        assert result["modulus"] == "12"
        assert result["precision_bits"] is not None

    def test_classify_record(self):
        _, envelope = run_json(
            ["classify", "--family", "sphere-product", "--n", "2", "--k", "1", "--i", "2"]
        )
        result = envelope["result"]
        assert result["label"] == "2#(S^3 x S^4) # 1*Sigma rel. base"
        assert result["offset"] == "1"
        assert result["homology"]["group"] == "Z^2"
        assert result["bp_order"]["order"] == "28"

    def test_cover_homology_result(self):
        _, envelope = run_json(["cover-homology", "--exponents", "3,2,2,2", "--fold", "3"])
        result = envelope["result"]
        assert result["group"] == "Z/2 + Z/2"
        assert result["torsion_divisors"] == ["2", "2"]
        assert result["rank"] == "0"


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [
            ["invariants"],
            ["invariants", "--exponents", "6,3,2", "--family", "free-odd"],
            ["invariants", "--exponents", "2,x"],
            ["invariants", "--family", "free-odd", "--n", "1"],
            ["signature", "--exponents", ""],
            ["table", "--dim", "9", "--k", "1"],
            ["cover-homology", "--exponents", "3,2,2,2", "--fold", "0"],
            ["no-such-subcommand"],
        ],
    )
    def test_usage_errors_exit_two(self, argv):
        code, text = cli.run(argv)
        assert code == 2
        assert text == ""

    def test_computation_error_envelope(self):
        code, text = cli.run(["signature", "--exponents", "2,2"])
        assert code == 1
        error = json.loads(text)
        assert error["schema"] == 1
        assert error["error"]["name"] == "OddDimension"
        assert error["error"]["message"]

    def test_invalid_exponent_error(self):
        code, text = cli.run(["invariants", "--exponents", "1,2"])
        assert code == 1
        assert json.loads(text)["error"]["name"] == "InvalidExponent"

    def test_modulus_mismatch_error(self):
        code, text = cli.run(
            ["signature", "--exponents", "6,3,2,2,2", "--modulus", "9"]
        )
        assert code == 1
        assert json.loads(text)["error"]["name"] == "NotCommonMultiple"


class TestFormats:
    def test_tau_csv(self):
        code, text = cli.run(["tau", "--k", "1,7", "--format", "csv"])
        assert code == 0
        assert text == "k,tau\n1,1\n7,28"

    def test_bp_order_csv_key_value(self):
        _, text = cli.run(["bp-order", "--m", "3", "--format", "csv"])
        rows = dict(line.split(",", 1) for line in text.splitlines()[1:])
        assert rows["order"] == "992"
        assert rows["mersenne_factor"] == "31"

    def test_table_markdown(self):
        code, text = cli.run(["table", "--dim", "7", "--k", "1,2,3", "--format", "markdown"])
        assert code == 0
        lines = text.splitlines()
        assert lines[0] == "| k | tau | count | ratio |"
        assert len(lines) == 5
        assert lines[2] == "| 1 | 1 | 28 | 1 |"
        assert lines[4] == "| 3 | 6 | 14 | 1/2 |"

    def test_formats_agree_on_table(self):
        _, envelope = run_json(["table", "--dim", "11", "--k", "31,48"])
        json_rows = [
            (row["k"], row["tau"], row["count"], row["ratio"])
            for row in envelope["result"]["rows"]
        ]

        _, csv_text = cli.run(["table", "--dim", "11", "--k", "31,48", "--format", "csv"])
        csv_rows = [tuple(line.split(",")) for line in csv_text.splitlines()[1:]]

        _, md_text = cli.run(["table", "--dim", "11", "--k", "31,48", "--format", "markdown"])
        md_rows = [
            tuple(cell.strip() for cell in line.strip("|").split("|"))
            for line in md_text.splitlines()[2:]
        ]

        assert json_rows == csv_rows == md_rows
        assert Fraction(json_rows[0][3]) == Fraction(1, 496)


class TestCache:
    def test_miss_then_hit_with_identical_payload(self, tmp_path):
        argv = ["bp-order", "--m", "4", "--cache-dir", str(tmp_path)]
        code_a, first = run_json(argv)
        code_b, second = run_json(argv)
        assert code_a == code_b == 0
        assert first["meta"]["cached"] is False
        assert second["meta"]["cached"] is True
        assert payload_without_meta(first) == payload_without_meta(second)
        assert len(list(tmp_path.glob("*.json"))) == 1
        assert not list(tmp_path.glob("*.tmp"))

    def test_version_bump_misses(self, tmp_path, monkeypatch):
        argv = ["bp-order", "--m", "4", "--cache-dir", str(tmp_path)]
        run_json(argv)
        monkeypatch.setattr(cli, "__version__", "0.0.0-test")
        _, envelope = run_json(argv)
        assert envelope["meta"]["cached"] is False
        assert len(list(tmp_path.glob("*.json"))) == 2

    def test_garbage_entry_recomputed_silently(self, tmp_path):
        argv = ["bp-order", "--m", "4", "--cache-dir", str(tmp_path)]
        run_json(argv)
        entry = next(tmp_path.glob("*.json"))
        entry.write_text("not json at all{{{")
        code, envelope = run_json(argv)
        assert code == 0
        assert envelope["meta"]["cached"] is False
        assert envelope["result"]["order"] == "8128"
        # the healthy payload is written back, so the next call hits
        assert run_json(argv)[1]["meta"]["cached"] is True

    def test_checksum_mismatch_recomputed(self, tmp_path):
        argv = ["bp-order", "--m", "4", "--cache-dir", str(tmp_path)]
        run_json(argv)
        entry = next(tmp_path.glob("*.json"))
        wrapper = json.loads(entry.read_text())
        wrapper["payload"]["result"]["order"] = "1"
        entry.write_text(json.dumps(wrapper))
        _, envelope = run_json(argv)
        assert envelope["meta"]["cached"] is False
        assert envelope["result"]["order"] == "8128"

    def test_environment_variable_enables_cache(self, tmp_path, monkeypatch):
        monkeypatch.setenv(cli.CACHE_ENV, str(tmp_path))
        argv = ["tau", "--k", "3"]
        assert run_json(argv)[1]["meta"]["cached"] is False
        assert run_json(argv)[1]["meta"]["cached"] is True

    def test_different_requests_do_not_collide(self, tmp_path):
        run_json(["bp-order", "--m", "2", "--cache-dir", str(tmp_path)])
        _, envelope = run_json(["bp-order", "--m", "3", "--cache-dir", str(tmp_path)])
        assert envelope["meta"]["cached"] is False
        assert envelope["result"]["order"] == "992"

    def test_verify_is_never_cached(self, tmp_path):
        argv = ["verify", "--criteria", "3", "--cache-dir", str(tmp_path)]
        cli.run(argv)
        assert not list(tmp_path.glob("*.json"))
        code, envelope = run_json(argv)
        assert code == 0
        assert envelope["meta"]["cached"] is False


class TestVerifySubcommand:
    def test_single_criterion_passes(self):
        code, envelope = run_json(["verify", "--criteria", "3"])
        assert code == 0
        rows = envelope["result"]["results"]
        assert len(rows) == 1
        assert rows[0]["cid"] == "3"
        assert rows[0]["status"] == "PASS"
        assert envelope["result"]["all_passed"] is True

    def test_fault_injection_fails_bp_order_check(self, monkeypatch):
        import bplinks.classify as classify

        monkeypatch.setattr(classify, "bernoulli", lambda m: Fraction(3))
        code, envelope = run_json(["verify", "--criteria", "3"])
        assert code == 1
        rows = envelope["result"]["results"]
        assert rows[0]["status"] == "FAIL"
        assert envelope["result"]["all_passed"] is False

    def test_budget_one_skips_with_reason(self):
        code, envelope = run_json(["verify", "--criteria", "5", "--budget", "1"])
        assert code == 0
        rows = envelope["result"]["results"]
        assert rows[0]["status"] == "SKIP"
        assert rows[0]["detail"].startswith("budget")

    def test_markdown_rendering(self):
        code, text = cli.run(["verify", "--criteria", "4", "--format", "markdown"])
        assert code == 0
        assert "| PASS | 4 |" in text


class TestModuleEntryPoint:
    def test_python_dash_m(self):
        proc = subprocess.run(
            [sys.executable, "-m", "bplinks", "bp-order", "--m", "3"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["result"]["order"] == "992"
