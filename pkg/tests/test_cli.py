"""Exit codes, report schema, determinism, slope fitting."""

import json
import re

import pytest

from detsieve.cli import UsageError, fit_exponent, main, run
from detsieve.errors import ContractViolation

SPHERE5 = {
    "nvars": 3,
    "terms": [[[2, 0, 0], 1], [[0, 2, 0], 1], [[0, 0, 2], 1], [[0, 0, 0], -5]],
}
TRIVIAL_G = {"nvars": 3, "terms": [[[0, 1, 0], 1]]}
CONG_F = {
    "nvars": 3,
    "terms": [[[2, 0, 0], 5], [[0, 2, 0], 1], [[0, 0, 2], 1], [[0, 0, 0], -6]],
}
CONG_G = {
    "nvars": 3,
    "terms": [[[0, 2, 0], 1], [[0, 0, 2], 1], [[0, 0, 0], -6]],
}

TOP_KEYS = {"instance", "result", "certificates", "diagnostics", "timings", "provenance"}


def invoke(tmp_path, command, config, *extra):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return main([command, "--config", str(path), *extra])


def invoke_json(tmp_path, capsys, command, config, *extra):
    code = invoke(tmp_path, command, config, *extra)
    captured = capsys.readouterr()
    assert code == 0, captured.err
    return json.loads(captured.out)


class TestExitCodes:
    def test_success(self, tmp_path):
        cfg = {"f": SPHERE5, "g": TRIVIAL_G, "box": [10, 10, 10]}
        assert invoke(tmp_path, "enumerate", cfg) == 0

    def test_missing_field_is_usage_error(self, tmp_path, capsys):
        cfg = {"a": [1, 1, 1], "B": 10}  # no 'n'
        assert invoke(tmp_path, "quadric", cfg) == 1
        assert capsys.readouterr().err.startswith("usage error:")

    def test_unreadable_config(self, capsys):
        assert main(["enumerate", "--config", "/nonexistent/x.json"]) == 1
        assert "usage error" in capsys.readouterr().err

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["enumerate", "--config", str(path)]) == 1
        assert "not valid JSON" in capsys.readouterr().err

    def test_invalid_instance(self, tmp_path, capsys):
        cfg = {"a": [1, 1, 1], "n": -4, "B": 10}  # rational lines possible
        assert invoke(tmp_path, "quadric", cfg) == 1
        assert capsys.readouterr().err.startswith("invalid instance:")

    def test_hypothesis_violation(self, tmp_path, capsys):
        bad_g = {
            "nvars": 3,
            "terms": [[[0, 2, 0], 1], [[0, 0, 2], 1], [[0, 0, 0], -5]],
        }
        cfg = {
            "f": CONG_F, "g": bad_g, "q": 5,
            "box": [2, 2, 3], "epsilon": 0.5,
        }
        assert invoke(tmp_path, "aux", cfg) == 2
        assert capsys.readouterr().err.startswith("hypothesis violation:")

    def test_unknown_command(self, capsys):
        assert main(["transmute", "--config", "x.json"]) == 1


class TestReportSchema:
    def test_enumerate_report(self, tmp_path, capsys):
        cfg = {"f": SPHERE5, "g": TRIVIAL_G, "box": [10, 10, 10]}
        report = invoke_json(tmp_path, capsys, "enumerate", cfg)
        assert set(report) == TOP_KEYS
        assert report["result"]["count"] == {"value": "24", "provenance": "exact"}
        assert report["provenance"]["command"] == "enumerate"
        assert report["provenance"]["seed"] == 0

    def test_counts_are_decimal_strings(self, tmp_path, capsys):
        cfg = {"f": CONG_F, "g": CONG_G, "q": 5, "box": [2, 2, 2]}
        report = invoke_json(tmp_path, capsys, "enumerate", cfg)
        count = report["result"]["count"]["value"]
        assert isinstance(count, str)
        assert re.fullmatch(r"-?[0-9]+", count)

    def test_certify_report(self, tmp_path, capsys):
        cfg = {
            "f": CONG_F, "g": CONG_G, "q": 5,
            "box": [2, 2, 2], "cutoff_base": 2, "cutoff_power": 3,
        }
        report = invoke_json(tmp_path, capsys, "certify", cfg)
        assert set(report) == TOP_KEYS
        assert report["result"]["points"]["value"] == "8"
        assert report["result"]["set_size"]["value"] == 16
        assert report["result"]["rank"]["value"] == 8
        (cert,) = report["certificates"]
        assert cert["lambda"]["value"] == 4
        assert cert["certified_divisor"]["value"] == str(5**4)
        assert cert["shift"] == [0, 0, 0]
        dev = report["diagnostics"]["main_term_deviation_count"]
        assert dev["provenance"] == "main-term-diagnostic"

    def test_aux_report_flags_branch(self, tmp_path, capsys):
        cfg = {
            "f": CONG_F, "g": CONG_G, "q": 5,
            "box": [2, 2, 2], "epsilon": 0.5, "floor_const": 10,
        }
        report = invoke_json(tmp_path, capsys, "aux", cfg)
        assert report["result"]["branch"] == "standard"
        assert report["result"]["coverage_complete"] is True
        assert report["diagnostics"]["floor_constant"]["value"] == 10
        rv = report["diagnostics"]["residue_valuation_main_term"]
        assert rv["provenance"] == "main-term-diagnostic"

    def test_quadric_report_carries_predictions(self, tmp_path, capsys):
        cfg = {"a": [1, 1, 1], "n": 5, "B": 10}
        report = invoke_json(tmp_path, capsys, "quadric", cfg)
        assert report["result"]["count"]["value"] == "24"
        powers = report["diagnostics"]["predicted_box_powers"]
        assert [p["value"] for p in powers] == ["4/3", "7/6", "1/2"]

    def test_unlike_report(self, tmp_path, capsys):
        cfg = {"k": 5, "l": 3, "m": 2, "N": 4, "B": 1}
        report = invoke_json(tmp_path, capsys, "unlike", cfg)
        assert report["result"]["count"]["value"] == "2"

    def test_timings_are_counters(self, tmp_path, capsys):
        cfg = {"f": SPHERE5, "g": TRIVIAL_G, "box": [10, 10, 10]}
        report = invoke_json(tmp_path, capsys, "enumerate", cfg)
        assert "note" in report["timings"]
        assert "deterministic" in report["timings"]["note"]

    def test_out_file(self, tmp_path):
        cfg = {"f": SPHERE5, "g": TRIVIAL_G, "box": [10, 10, 10]}
        out = tmp_path / "report.json"
        code = invoke(tmp_path, "enumerate", cfg, "--out", str(out))
        assert code == 0
        assert json.loads(out.read_text())["result"]["count"]["value"] == "24"


class TestDeterminism:
    def test_byte_identical_across_threads(self, tmp_path):
        config = [
            {"a": [1, 1, 1], "n": 5, "B": b} for b in (4, 6, 8)
        ] + [
            {"a": [5, 1, 1], "n": 6, "B": 2, "mode": "pipeline", "floor_const": 10},
        ]
        path = tmp_path / "batch.json"
        path.write_text(json.dumps(config))
        one = tmp_path / "t1.json"
        four = tmp_path / "t4.json"
        assert main(["quadric", "--config", str(path), "--threads", "1",
                     "--out", str(one)]) == 0
        assert main(["quadric", "--config", str(path), "--threads", "4",
                     "--out", str(four)]) == 0
        assert one.read_bytes() == four.read_bytes()

    def test_list_config_preserves_order(self, tmp_path, capsys):
        config = [
            {"k": 5, "l": 3, "m": 2, "N": 4, "B": 1},
            {"k": 5, "l": 3, "m": 2, "N": 9999, "B": 2},
        ]
        path = tmp_path / "batch.json"
        path.write_text(json.dumps(config))
        assert main(["unlike", "--config", str(path), "--threads", "2"]) == 0
        reports = json.loads(capsys.readouterr().out)
        assert [r["result"]["count"]["value"] for r in reports] == ["2", "0"]

    def test_seed_recorded(self, tmp_path, capsys):
        cfg = {"f": SPHERE5, "g": TRIVIAL_G, "box": [10, 10, 10]}
        report = invoke_json(tmp_path, capsys, "enumerate", cfg, "--seed", "17")
        assert report["provenance"]["seed"] == 17


class TestPolynomialConfigs:
    def test_terms_must_be_lists(self, tmp_path, capsys):
        cfg = {"f": {"nvars": 3, "terms": "x^2"}, "g": TRIVIAL_G, "box": [2, 2, 2]}
        assert invoke(tmp_path, "enumerate", cfg) == 1
        assert "usage error" in capsys.readouterr().err

    def test_exponent_arity_checked(self, tmp_path, capsys):
        cfg = {
            "f": {"nvars": 3, "terms": [[[2, 0], 1]]},
            "g": TRIVIAL_G, "box": [2, 2, 2],
        }
        assert invoke(tmp_path, "enumerate", cfg) == 1

    def test_boolean_int_fields_rejected(self, tmp_path, capsys):
        cfg = {"a": [1, 1, 1], "n": True, "B": 10}
        assert invoke(tmp_path, "quadric", cfg) == 1


class TestFitExponent:
    def test_exact_quadratic_counts(self):
        fit = fit_exponent([[10, 100], [20, 400], [40, 1600]])
        assert abs(fit.slope - 2.0) <= 1e-9

    def test_constant_counts(self):
        fit = fit_exponent([[10, 7], [20, 7], [40, 7]])
        assert fit.slope == pytest.approx(0.0, abs=1e-12)

    def test_zero_counts_enter_as_log_one(self):
        fit = fit_exponent([[10, 0], [20, 0], [40, 0]])
        assert fit.slope == pytest.approx(0.0, abs=1e-12)

    def test_too_few_sizes(self):
        with pytest.raises(ContractViolation, match="3 distinct"):
            fit_exponent([[10, 100], [20, 400]])
        with pytest.raises(ContractViolation, match="3 distinct"):
            fit_exponent([[10, 1], [10, 2], [10, 3]])

    def test_cli_fit_with_prediction(self, tmp_path, capsys):
        cfg = {
            "counts": [[10, 100], [20, 400], [40, 1600]],
            "quadric": {"a": [1, 1, 1], "n": 5},
        }
        report = invoke_json(tmp_path, capsys, "fit", cfg)
        assert abs(report["result"]["slope"]["value"] - 2.0) <= 1e-9
        assert "predicted_box_powers" in report["diagnostics"]

    def test_run_rejects_non_object_configs(self):
        with pytest.raises(UsageError):
            run("fit", "not a config")
        with pytest.raises(UsageError):
            run("fit", [1, 2, 3])
