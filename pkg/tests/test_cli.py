import json
from fractions import Fraction

import pytest
from click.testing import CliRunner

import main
from documents import bundle_document, flat_document, load_document
from documents.models import poly_to_strings
from main import cli
from polycore import PolyQ


@pytest.fixture
def runner():
    return CliRunner()


class TestFlat:
    def test_document(self, runner, tmp_path):
        out = tmp_path / "flat.json"
        result = runner.invoke(cli, ["flat", "--n", "2", "--a", "1", "--c", "-6", "--no-verify", "--json", str(out)])
        assert result.exit_code == 0, result.output
        assert "InfinitePoincare" in result.output
        document = load_document(out)
        assert document.polynomials["F"] == ["3", "-5", "1", "1"]
        assert document.verification is None

    def test_decimal_input_is_exact(self, runner, tmp_path):
        out = tmp_path / "flat.json"
        result = runner.invoke(cli, ["flat", "--n", "2", "--a", "1", "--c", "0.5", "--no-verify", "--json", str(out)])
        assert result.exit_code == 0, result.output
        document = load_document(out)
        assert document.problem["c"] == "1/2"
        assert document.constants["b"] == "10"
        assert document.snaps == []

    @pytest.mark.parametrize("a", ["0", "-1", "nan", "abc", "1/0"])
    def test_bad_puncture_value(self, runner, a):
        result = runner.invoke(cli, ["flat", "--n", "2", "--a", a, "--c", "0", "--no-verify"])
        assert result.exit_code == 2
        assert "Error" in result.output

    def test_csv(self, runner, tmp_path):
        csv_path = tmp_path / "phi.csv"
        result = runner.invoke(
            cli, ["flat", "--n", "2", "--a", "1", "--c", "0", "--no-verify", "--csv", str(csv_path)]
        )
        assert result.exit_code == 0, result.output
        assert csv_path.read_text().splitlines()[0] == "t,phi,u,det_g"

    @pytest.mark.slow
    def test_verification(self, runner, monkeypatch):
        monkeypatch.setenv("CSCK_CURVATURE_GRID", "30")
        result = runner.invoke(cli, ["flat", "--n", "2", "--a", "1", "--c", "1"])
        assert result.exit_code == 0, result.output
        assert "✓ verification passed" in result.output


class TestBundle:
    def test_at_c0(self, runner):
        result = runner.invoke(
            cli, ["bundle", "--m", "1", "--n", "2", "--lambda", "1", "--cM", "-4", "--a", "1", "--at-c0", "--no-verify"]
        )
        assert result.exit_code == 0, result.output
        assert "CaseIV_Estar_doubleroot" in result.output
        assert "NotInSet" in result.output

    def test_c_above_c0(self, runner):
        result = runner.invoke(
            cli, ["bundle", "--m", "1", "--n", "2", "--lambda", "1", "--cM", "-4", "--a", "1", "--c", "1", "--no-verify"]
        )
        assert result.exit_code == 2
        assert "exceeds c0" in result.output

    def test_lambda_zero_needs_c(self, runner):
        result = runner.invoke(
            cli, ["bundle", "--m", "1", "--n", "2", "--lambda", "0", "--cM", "2", "--a", "1", "--no-verify"]
        )
        assert result.exit_code == 2
        assert "--at-c0" in result.output

    def test_no_solution(self, runner, monkeypatch):
        monkeypatch.setattr(main, "lambda_negative_profiles", lambda *args, **kwargs: [])
        result = runner.invoke(
            cli, ["bundle", "--m", "1", "--n", "2", "--lambda", "-1", "--cM", "10", "--a", "1/10", "--no-verify"]
        )
        assert result.exit_code == 4

    def test_lambda_negative(self, runner, tmp_path):
        out = tmp_path / "bundle.json"
        result = runner.invoke(
            cli,
            ["bundle", "--m", "1", "--n", "2", "--lambda", "-1", "--cM", "10", "--a", "1/10", "--no-verify",
             "--json", str(out)],
        )
        assert result.exit_code == 0, result.output
        document = load_document(out)
        assert document.case_tag == "LambdaNeg_Estar"
        assert any("requested" in note for note in document.notes)


class TestProjective:
    def test_exact_end_point(self, runner, tmp_path):
        out = tmp_path / "projective.json"
        result = runner.invoke(
            cli, ["projective", "--m", "1", "--n", "2", "--lambda", "1", "--a", "1", "--b", "2", "--no-verify",
                  "--json", str(out)]
        )
        assert result.exit_code == 0, result.output
        document = load_document(out)
        assert document.problem["c_M"] == "610/13"
        assert document.problem["c"] == "276/13"

    def test_outside_range(self, runner):
        result = runner.invoke(
            cli, ["projective", "--m", "1", "--n", "2", "--lambda", "1", "--a", "1", "--cM", "3", "--no-verify"]
        )
        assert result.exit_code == 2
        assert "(4, inf)" in result.output

    @pytest.mark.parametrize("extra", [[], ["--cM", "50", "--b", "2"]])
    def test_exactly_one_of_cM_and_b(self, runner, extra):
        result = runner.invoke(
            cli, ["projective", "--m", "1", "--n", "2", "--lambda", "1", "--a", "1", "--no-verify", *extra]
        )
        assert result.exit_code == 2
        assert "exactly one" in result.output

    def test_lambda_zero(self, runner):
        result = runner.invoke(
            cli, ["projective", "--m", "1", "--n", "2", "--lambda", "0", "--a", "1", "--cM", "5", "--no-verify"]
        )
        assert result.exit_code == 2


class TestVerify:
    def test_corrupted_bundle(self, runner, tmp_path, monkeypatch, bundle_lambda_zero):
        monkeypatch.setenv("CSCK_CURVATURE_GRID", "30")
        document = bundle_document(bundle_lambda_zero)
        corrupted = bundle_lambda_zero.P + PolyQ.monomial(2, Fraction(1, 10))
        document.polynomials["P"] = poly_to_strings(corrupted)
        path = document.save(tmp_path / "corrupted.json")

        result = runner.invoke(cli, ["verify", str(path)])
        assert result.exit_code == 3
        assert "verification failed" in result.output
        assert "profile_assembly" in result.output

    @pytest.mark.parametrize("coefficients", [[], ["1"], ["-1", "0", "1"]])
    def test_degenerate_flat_polynomial(self, runner, tmp_path, flat_c0, coefficients):
        document = flat_document(flat_c0)
        document.polynomials["F"] = coefficients
        path = document.save(tmp_path / "degenerate.json")

        result = runner.invoke(cli, ["verify", str(path)])
        assert result.exit_code == 3, result.output
        assert "profile_assembly" in result.output

    def test_report_file(self, runner, tmp_path, monkeypatch, bundle_lambda_zero):
        monkeypatch.setenv("CSCK_CURVATURE_GRID", "30")
        document = bundle_document(bundle_lambda_zero)
        document.polynomials["P"] = poly_to_strings(bundle_lambda_zero.P + PolyQ.monomial(2, Fraction(1, 10)))
        path = document.save(tmp_path / "corrupted.json")
        report_path = tmp_path / "report.json"

        result = runner.invoke(cli, ["verify", str(path), "--json", str(report_path)])
        assert result.exit_code == 3
        report = json.loads(report_path.read_text())
        assert report["status"] == "FAIL"
        assert report["curvature_residual_max"] > 1e-5

    def test_zero_tolerance_rejected(self, runner, tmp_path, flat_c0):
        path = flat_document(flat_c0).save(tmp_path / "flat.json")
        result = runner.invoke(cli, ["verify", str(path), "--tol", "0"])
        assert result.exit_code == 2
        assert "solver_tol must be positive" in result.output

    def test_missing_file(self, runner, tmp_path):
        result = runner.invoke(cli, ["verify", str(tmp_path / "absent.json")])
        assert result.exit_code == 2

    def test_garbage_file(self, runner, tmp_path):
        path = tmp_path / "garbage.json"
        path.write_text("not a document")
        result = runner.invoke(cli, ["verify", str(path)])
        assert result.exit_code == 2
        assert "not valid JSON" in result.output


class TestSweepAndPlots:
    def test_sweep_stdout(self, runner, tmp_path):
        spec = tmp_path / "sweep.json"
        spec.write_text(
            json.dumps({"kind": "cM_of_b", "fixed": {"m": 1, "n": 2, "lambda": 1, "a": 1}, "grid": {"b": [2, 3]}})
        )
        result = runner.invoke(cli, ["sweep", str(spec), "--workers", "1"])
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines[0] == "m,n,lambda,a,b,c_M,c,error"
        assert len(lines) == 3

    def test_sweep_bad_spec(self, runner, tmp_path):
        spec = tmp_path / "sweep.json"
        spec.write_text(json.dumps({"kind": "nope"}))
        result = runner.invoke(cli, ["sweep", str(spec)])
        assert result.exit_code == 2

    def test_plot_data(self, runner, tmp_path):
        svg = tmp_path / "curve.svg"
        result = runner.invoke(cli, ["plot-data", "cM-of-b-lambda-neg", "--points", "5", "--svg", str(svg)])
        assert result.exit_code == 0, result.output
        assert result.output.splitlines()[0] == "b,c_M"
        assert svg.exists()

    def test_plot_data_unknown_figure(self, runner):
        result = runner.invoke(cli, ["plot-data", "phi-toric"])
        assert result.exit_code == 2
