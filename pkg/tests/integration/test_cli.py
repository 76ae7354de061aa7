"""
Integration tests for the command-line interface (snorm.cli).

Each test runs ``main([...])`` in-process and parses the JSON report it
prints, checking values, provenance and exit codes end to end.
"""

from __future__ import annotations

import json

import pytest

from snorm import cli
from snorm.cli import EXIT_INPUT_ERROR, EXIT_OK, main
from snorm.config import SEED_ENV_VAR

pytestmark = pytest.mark.integration

KYFAN2 = '{"family": "kyfan", "k": 2}'


def _run(capsys, *argv: str) -> tuple[int, dict]:
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


@pytest.fixture
def diag321_csv(tmp_path):
    path = tmp_path / "diag321.csv"
    path.write_text("3,0,0\n0,2,0\n0,0,1\n")
    return path


# ---------------------------------------------------------------------------
# eval / dual
# ---------------------------------------------------------------------------

class TestEval:
    def test_matrix(self, capsys, diag321_csv):
        code, report = _run(capsys, "eval", "--norm", KYFAN2, "--matrix", str(diag321_csv))
        assert code == EXIT_OK
        assert report["command"] == "eval"
        assert report["results"]["value"] == pytest.approx(5.0)
        assert report["results"]["s_numbers"] == pytest.approx([3.0, 2.0, 1.0])
        assert report["inputs"]["norm"]["family"] == "kyfan"

    def test_corpus_model_is_exact(self, capsys):
        code, report = _run(capsys, "eval", "--norm", '{"family": "kyfan", "k": 3}', "--model", "ones_then_below")
        assert code == EXIT_OK
        assert report["results"]["value"] == "3"
        assert report["results"]["s_numbers"] == ["1", "1", "1"]

    def test_model_file(self, capsys, tmp_path):
        path = tmp_path / "model.json"
        path.write_text('{"prefix": [5], "tail": {"kind": "constant", "alpha": "1/2"}}')
        code, report = _run(capsys, "eval", "--norm", '{"family": "min"}', "--model", str(path))
        assert code == EXIT_OK
        assert report["results"]["value"] == "5"

    def test_no_timing_by_default(self, capsys, diag321_csv):
        _, report = _run(capsys, "eval", "--norm", KYFAN2, "--matrix", str(diag321_csv))
        assert "timing" not in report
        _, report = _run(capsys, "eval", "--norm", KYFAN2, "--matrix", str(diag321_csv), "--timing")
        assert "total_seconds" in report["timing"]


class TestDual:
    def test_kyfan2(self, capsys):
        code, report = _run(capsys, "dual", "--norm", KYFAN2, "--eta", "3,1,1,1")
        assert code == EXIT_OK
        assert report["results"]["value"] == "3"
        assert report["results"]["method"] == "closed-form"
        assert report["results"]["argmax_prefix_m"] == 1
        assert report["provenance"] == {"adjoint": "closed-form"}

    def test_weighted_kyfan(self, capsys):
        norm = '{"family": "wkyfan", "k": 3, "pi": [1, "1/2", "1/4"]}'
        _, report = _run(capsys, "dual", "--norm", norm, "--eta", "1,1,1")
        assert report["results"]["value"] == "12/7"

    def test_invalid_weights_exit_2(self, capsys):
        norm = '{"family": "wkyfan", "k": 2, "pi": [1, 2]}'
        code, report = _run(capsys, "dual", "--norm", norm, "--eta", "1,1")
        assert code == EXIT_INPUT_ERROR
        assert report["results"]["error"] == "InvalidNormFamilyError"


# ---------------------------------------------------------------------------
# attain / classify
# ---------------------------------------------------------------------------

class TestAttain:
    def test_worked_model(self, capsys):
        code, report = _run(capsys, "attain", "--model", "ones_then_below", "--k", "2")
        assert code == EXIT_OK
        assert report["results"]["member"] is True
        assert report["results"]["witness"] == [1, 2]

        _, report = _run(capsys, "attain", "--model", "ones_then_below", "--k", "3")
        assert report["results"]["member"] is False
        assert report["results"]["reason"] == "MultiplicityDeficit"
        assert report["results"]["deficit_value"] == "1"

    def test_weighted_variant(self, capsys):
        _, report = _run(capsys, "attain", "--model", "ones_then_below", "--k", "2", "--pi", "1,1/2")
        assert report["results"]["member"] is True
        assert report["results"]["family"] == "N_[pi,2] via N_[2]"


class TestClassify:
    def test_refused_model_has_witness(self, capsys):
        code, report = _run(capsys, "classify", "--model", "ones_then_below")
        assert code == EXIT_OK
        assert report["results"]["an_member"] is False
        assert report["results"]["witness"]["selection"] == "drop {1,2}"
        assert report["results"]["witness"]["verdict"]["member"] is False

    def test_decomposable_model(self, capsys):
        _, report = _run(capsys, "classify", "--model", "dip_under_constant")
        assert report["results"]["an_member"] is True
        assert "witness" not in report["results"]

    def test_matrix(self, capsys, diag321_csv):
        _, report = _run(capsys, "classify", "--matrix", str(diag321_csv))
        assert report["results"]["an_member"] is True


# ---------------------------------------------------------------------------
# counterexample / phistar
# ---------------------------------------------------------------------------

class TestWeightedL1:
    def test_counterexample(self, capsys):
        code, report = _run(capsys, "counterexample", "--L", "1/2", "--iters", "5")
        assert code == EXIT_OK
        results = report["results"]
        assert results["passed"] is True
        assert results["traces"][:3] == ["1", "8/7", "20/17"]
        assert len(results["traces"]) == 6
        assert results["bound"] == "2"

    def test_phistar_inverse_squares(self, capsys):
        code, report = _run(capsys, "phistar", "--model", "inverse_squares")
        assert code == EXIT_OK
        assert report["results"]["value"] == "8/7"
        assert report["results"]["argmax"] == 2
        assert report["results"]["status"] == "attained"

    def test_phistar_identity_not_attained(self, capsys):
        _, report = _run(capsys, "phistar", "--model", "identity", "--horizon", "50")
        assert report["results"]["status"] == "not-attained"
        assert report["results"]["value"] == "2"


# ---------------------------------------------------------------------------
# Input errors
# ---------------------------------------------------------------------------

class TestInputErrors:
    def test_unknown_model(self, capsys):
        code, report = _run(capsys, "attain", "--model", "nope", "--k", "1")
        assert code == EXIT_INPUT_ERROR
        assert report["results"]["error"] == "ParseError"

    def test_missing_json_file(self, capsys, tmp_path):
        code, _ = _run(capsys, "classify", "--model", str(tmp_path / "absent.json"))
        assert code == EXIT_INPUT_ERROR

    def test_malformed_norm(self, capsys, diag321_csv):
        code, report = _run(capsys, "eval", "--norm", "{kyfan", "--matrix", str(diag321_csv))
        assert code == EXIT_INPUT_ERROR
        assert "Malformed" in report["results"]["message"]

    def test_missing_required_input(self, capsys):
        code, report = _run(capsys, "eval", "--norm", KYFAN2)
        assert code == EXIT_INPUT_ERROR
        assert report["results"]["error"] == "ParseError"

    def test_value_error_inside_command_exit_2(self, capsys, monkeypatch):
        def bad_scalar(config):
            raise ValueError("Cannot parse 'x' as a rational number")

        monkeypatch.setitem(cli._COMMANDS, "dual", bad_scalar)
        code, report = _run(capsys, "dual", "--norm", KYFAN2, "--eta", "3,1")
        assert code == EXIT_INPUT_ERROR
        assert report["results"]["error"] == "ValueError"
        assert "rational" in report["results"]["message"]


# ---------------------------------------------------------------------------
# Config files, output and seeds
# ---------------------------------------------------------------------------

class TestConfigAndOutput:
    def test_config_file_with_flag_override(self, capsys, tmp_path):
        path = tmp_path / "run.yaml"
        path.write_text("model: identity\nhorizon: 500\nL: 1/2\n")
        _, report = _run(capsys, "phistar", "--config", str(path), "--horizon", "50")
        assert report["inputs"]["horizon"] == 50
        assert report["inputs"]["model"] == "identity"

    def test_output_file(self, capsys, tmp_path):
        out = tmp_path / "reports" / "dual.json"
        code = main(["dual", "--norm", KYFAN2, "--eta", "2,2,2", "--output", str(out)])
        assert code == EXIT_OK
        assert capsys.readouterr().out == ""
        assert json.loads(out.read_text(encoding="utf-8"))["results"]["value"] == "3"

    def test_seed_env_and_flag(self, capsys, monkeypatch):
        monkeypatch.setenv(SEED_ENV_VAR, "7")
        _, report = _run(capsys, "verify", "--suite", "counterexample")
        assert report["inputs"]["seed"] == 7
        _, report = _run(capsys, "verify", "--suite", "counterexample", "--seed", "3")
        assert report["inputs"]["seed"] == 3

    def test_report_is_deterministic(self, capsys):
        main(["counterexample", "--iters", "3"])
        first = capsys.readouterr().out
        main(["counterexample", "--iters", "3"])
        assert capsys.readouterr().out == first


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

class TestVerify:
    def test_suite_subset_with_tables(self, capsys, tmp_path):
        code, report = _run(
            capsys, "verify", "--suite", "counterexample,norms", "--table-dir", str(tmp_path / "tables")
        )
        assert code == EXIT_OK
        assert report["results"]["passed"] is True
        assert set(report["results"]["suites"]) == {"norms", "counterexample"}
        assert (tmp_path / "tables" / "suites.csv").exists()
        assert (tmp_path / "tables" / "violations.csv").exists()
        assert (tmp_path / "tables" / "run.csv").exists()

    def test_unknown_suite(self, capsys):
        code, report = _run(capsys, "verify", "--suite", "astrology")
        assert code == EXIT_INPUT_ERROR
        assert report["results"]["error"] == "PreconditionError"
