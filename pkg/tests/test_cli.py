"""End-to-end tests of the command-line interface."""

import json

import pytest

from ratio_vr import __version__
from ratio_vr.cli import EXIT_INVALID, EXIT_OK, _vr_config, main
from ratio_vr.gbdt.schemas import GBDTParams
from ratio_vr.reduction.schemas import CovariateSet, Outcome, VRConfig


def _simulate(out, *extra):
    args = ["simulate", "--output", str(out), "--users", "400", "--features", "3", "--seed", "1", *extra]
    assert main(args) == EXIT_OK


def _config(tmp_path, **fields):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"control_variant": "control", **fields}))
    return path


class TestVersion:
    def test_prints_versions(self, capsys):
        assert main(["version"]) == EXIT_OK
        out = capsys.readouterr().out
        assert __version__ in out
        assert "schema 1.0" in out


class TestSimulate:
    def test_writes_suite(self, tmp_path):
        _simulate(tmp_path / "s", "--experiments", "2")
        manifest = json.loads((tmp_path / "s" / "suite.json").read_text())
        assert manifest["schema_version"] == "1.0"
        assert [e["file"] for e in manifest["experiments"]] == ["exp_0000.csv", "exp_0001.csv"]

    def test_byte_identical(self, tmp_path):
        _simulate(tmp_path / "a")
        _simulate(tmp_path / "b")
        for name in ("suite.json", "exp_0000.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_jsonl(self, tmp_path):
        _simulate(tmp_path / "s", "--format", "jsonl")
        assert (tmp_path / "s" / "exp_0000.jsonl").exists()

    def test_invalid_effect(self, tmp_path, capsys):
        code = main(["simulate", "--output", str(tmp_path), "--effect", "0.9"])
        assert code == EXIT_INVALID
        assert "error" in capsys.readouterr().err

    def test_preset_with_overrides(self, tmp_path):
        out = tmp_path / "s"
        code = main([
            "simulate", "--output", str(out), "--preset", "sensitivity",
            "--users", "300", "--experiments", "2", "--seed", "4",
        ])
        assert code == EXIT_OK
        manifest = json.loads((out / "suite.json").read_text())
        assert len(manifest["experiments"]) == 2
        assert manifest["seed"] == 4
        assert manifest["template"]["n_users"] == 300
        assert manifest["template"]["pre_overlap_days"] == 6
        assert manifest["effects"]["kind"] == "constant"
        assert manifest["effects"]["value"] == pytest.approx(0.025)

    def test_unknown_preset(self, tmp_path, capsys):
        assert main(["simulate", "--output", str(tmp_path), "--preset", "huge"]) == EXIT_INVALID
        assert "invalid choice" in capsys.readouterr().err

    def test_overlap_longer_than_window(self, tmp_path):
        code = main(["simulate", "--output", str(tmp_path), "--days", "3", "--pre-overlap-days", "4"])
        assert code == EXIT_INVALID


class TestAnalyze:
    def test_large_effect_detected(self, tmp_path):
        _simulate(tmp_path / "s", "--effect", "0.2")
        out = tmp_path / "result.json"
        config = _config(tmp_path, input_paths=[str(tmp_path / "s" / "exp_0000.csv")])
        assert main(["analyze", "--config", str(config), "--method", "pre", "--output", str(out)]) == EXIT_OK
        result = json.loads(out.read_text())
        assert result["raw"]["p_value"] < 0.05
        assert result["method"] == "pre"
        assert result["reduced"]["method_label"] == "pre"
        assert result["ingest"][0]["rows_rejected"] == 0

    def test_input_flag_and_stdout(self, tmp_path, capsys):
        _simulate(tmp_path / "s", "--format", "jsonl")
        config = _config(tmp_path)
        code = main([
            "analyze",
            "--config", str(config),
            "--input", str(tmp_path / "s" / "exp_0000.jsonl"),
            "--method", "raw",
        ])
        assert code == EXIT_OK
        result = json.loads(capsys.readouterr().out)
        assert result["reduced"]["z"] == pytest.approx(result["raw"]["z"])

    def test_predictions_with_fold_override(self, tmp_path):
        _simulate(tmp_path / "s")
        out = tmp_path / "result.json"
        config = _config(
            tmp_path,
            input_paths=[str(tmp_path / "s" / "exp_0000.csv")],
            vr={"covariate_set": "pred", "gbdt_params": {"n_trees": 10, "min_samples_leaf": 20}},
        )
        assert main(["analyze", "--config", str(config), "--folds", "2", "--output", str(out)]) == EXIT_OK
        assert json.loads(out.read_text())["method"] == "pred"

    def test_method_keeps_config_settings(self):
        base = VRConfig(
            covariate_set="pre",
            outcome="delta_ratio",
            gbdt_params={"n_trees": 7, "min_samples_leaf": 5},
            center_covariates=False,
        )
        vr = _vr_config(base, "union", 3)
        assert vr.covariate_set is CovariateSet.UNION
        assert vr.cross_fit_folds == 3
        assert vr.outcome is Outcome.DELTA_RATIO
        assert vr.gbdt_params == GBDTParams(n_trees=7, min_samples_leaf=5)
        assert vr.center_covariates is False
        assert _vr_config(base, None, None) is base

    def test_missing_input(self, tmp_path, capsys):
        config = _config(tmp_path, input_paths=[str(tmp_path / "nope.csv")])
        assert main(["analyze", "--config", str(config)]) == EXIT_INVALID
        assert "nope.csv" in capsys.readouterr().err

    def test_no_input(self, tmp_path):
        assert main(["analyze", "--config", str(_config(tmp_path))]) == EXIT_INVALID

    def test_unknown_control(self, tmp_path):
        _simulate(tmp_path / "s")
        config = _config(tmp_path, input_paths=[str(tmp_path / "s" / "exp_0000.csv")])
        assert main(["analyze", "--config", str(config), "--control", "baseline", "--method", "pre"]) == EXIT_INVALID

    def test_invalid_config(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text('{"control_variant": "control", "alpha": 2}')
        assert main(["analyze", "--config", str(path)]) == EXIT_INVALID


class TestEvaluate:
    def test_report_table_and_details(self, tmp_path):
        _simulate(tmp_path / "ab", "--experiments", "3", "--effect", "0.05")
        _simulate(tmp_path / "aa", "--experiments", "4")
        report_path = tmp_path / "report.json"
        table_path = tmp_path / "report.txt"
        details_path = tmp_path / "details.csv"
        code = main([
            "evaluate",
            "--ab-suite", str(tmp_path / "ab"),
            "--aa-suite", str(tmp_path / "aa"),
            "--method", "raw",
            "--method", "pre",
            "--output", str(report_path),
            "--table", str(table_path),
            "--details", str(details_path),
        ])
        assert code == EXIT_OK
        report = json.loads(report_path.read_text())
        assert [m["method_label"] for m in report["methods"]] == ["raw", "pre"]
        assert report["n_ab"] == 3
        assert report["n_aa"] == 4
        assert "Var. Red." in table_path.read_text()
        assert len(details_path.read_text().splitlines()) == 1 + 2 * 7

    def test_missing_suite(self, tmp_path):
        assert main(["evaluate", "--ab-suite", str(tmp_path / "missing")]) == EXIT_INVALID


class TestUsage:
    def test_unknown_flag(self, capsys):
        assert main(["simulate", "--output", "x", "--bogus"]) == EXIT_INVALID
        assert "unrecognized arguments" in capsys.readouterr().err

    def test_no_command(self):
        assert main([]) == EXIT_INVALID

    def test_unknown_method(self, tmp_path):
        assert main(["evaluate", "--ab-suite", str(tmp_path), "--method", "magic"]) == EXIT_INVALID


@pytest.mark.slow
def test_evaluate_default_methods(tmp_path):
    _simulate(tmp_path / "ab", "--experiments", "2", "--effect", "0.05")
    out = tmp_path / "report.json"
    assert main(["evaluate", "--ab-suite", str(tmp_path / "ab"), "--output", str(out)]) == EXIT_OK
    report = json.loads(out.read_text())
    assert [m["display_label"] for m in report["methods"]] == ["{M_pre}", "{M_hat}", "{M_pre} u {M_hat}"]


def _simulate_and_evaluate(root):
    _simulate(root / "ab", "--experiments", "3", "--effect", "0.05")
    _simulate(root / "aa", "--experiments", "3", "--seed", "2")
    code = main([
        "evaluate",
        "--ab-suite", str(root / "ab"),
        "--aa-suite", str(root / "aa"),
        "--method", "raw",
        "--method", "pre",
        "--output", str(root / "report.json"),
        "--table", str(root / "report.txt"),
        "--workers", "1",
    ])
    assert code == EXIT_OK


def test_rerun_is_byte_identical(tmp_path):
    _simulate_and_evaluate(tmp_path / "first")
    _simulate_and_evaluate(tmp_path / "second")
    for name in ("report.json", "report.txt"):
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()
