import io
import json
from fractions import Fraction

import mpmath
import pytest

from documents import (
    POTENTIAL_COLUMNS,
    DocumentError,
    ProfileDocument,
    SweepSpec,
    build_figure,
    bundle_document,
    flat_document,
    format_value,
    load_bundle_profile,
    load_document,
    load_flat_profile,
    load_projective_profile,
    load_sweep_spec,
    projective_document,
    read_table,
    render_svg,
    run_sweep,
    write_potential_csv,
    write_rows,
    write_sweep,
)
from momentum import BundleProblemError


def round_trip(document: ProfileDocument, tmp_path) -> ProfileDocument:
    path = document.save(tmp_path / f"{document.kind}.json")
    return load_document(path)


class TestProfileDocuments:
    def test_flat_round_trip(self, flat_c0, tmp_path):
        document = flat_document(flat_c0)
        loaded = round_trip(document, tmp_path)
        assert loaded == document
        assert loaded.polynomials["F"] == ["1", "-2", "1"]
        assert loaded.endpoint_class == "InfiniteLogGrowth"
        profile = load_flat_profile(loaded)
        assert profile.F == flat_c0.F
        assert profile.endpoint_class is flat_c0.endpoint_class

    def test_flat_finite_end(self, flat_cpos, tmp_path):
        loaded = round_trip(flat_document(flat_cpos), tmp_path)
        assert loaded.constants["b"] == "4"
        assert load_flat_profile(loaded).b == 4

    def test_bundle_round_trip(self, bundle_lambda_zero, tmp_path):
        loaded = round_trip(bundle_document(bundle_lambda_zero), tmp_path)
        assert loaded.problem["lambda"] == "0"
        assert loaded.case_tag == bundle_lambda_zero.case_tag.value
        profile = load_bundle_profile(loaded)
        assert profile.P == bundle_lambda_zero.P
        assert profile.case_tag is bundle_lambda_zero.case_tag

    def test_corrupted_P(self, bundle_lambda_zero):
        document = bundle_document(bundle_lambda_zero)
        document.polynomials["P"][0] = "1/7"
        with pytest.raises(BundleProblemError):
            load_bundle_profile(document)

    def test_projective_round_trip(self, projective_exact, tmp_path):
        loaded = round_trip(projective_document(projective_exact), tmp_path)
        assert loaded.kind == "projective"
        assert loaded.problem["c_M"] == "610/13"
        assert loaded.problem["c"] == "276/13"
        profile = load_projective_profile(loaded)
        assert profile.b == 2
        assert profile.extension_ok

    def test_solutions_listed(self, projective_exact):
        document = projective_document(projective_exact, others=[projective_exact])
        assert len(document.solutions) == 2
        assert document.solutions[0]["b"] == "2"


class TestDocumentValidation:
    @pytest.fixture
    def data(self, flat_c0):
        return flat_document(flat_c0).to_dict()

    def test_schema_version(self, data):
        data["schema_version"] = "0"
        with pytest.raises(DocumentError, match="schema_version"):
            ProfileDocument.from_dict(data)

    @pytest.mark.parametrize("key", ["kind", "problem", "polynomials"])
    def test_missing_key(self, data, key):
        del data[key]
        with pytest.raises(DocumentError, match=key):
            ProfileDocument.from_dict(data)

    def test_unknown_kind(self, data):
        data["kind"] = "toric"
        with pytest.raises(DocumentError, match="kind"):
            ProfileDocument.from_dict(data)

    def test_unknown_key(self, data):
        data["colour"] = "blue"
        with pytest.raises(DocumentError, match="colour"):
            ProfileDocument.from_dict(data)

    @pytest.mark.parametrize("text", ["", "   ", "{not json", "[1, 2]"])
    def test_bad_text(self, text):
        with pytest.raises(DocumentError):
            ProfileDocument.from_json(text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(DocumentError, match="cannot read"):
            load_document(tmp_path / "absent.json")

    def test_fractional_dimension(self, data):
        data["problem"]["n"] = "5/2"
        with pytest.raises(DocumentError, match="integer"):
            load_flat_profile(ProfileDocument.from_dict(data))

    def test_bad_coefficient(self, data):
        data["polynomials"]["F"][1] = "five"
        with pytest.raises(DocumentError, match=r"F\[1\]"):
            load_flat_profile(ProfileDocument.from_dict(data))


class TestCsv:
    def test_write_rows(self):
        stream = io.StringIO()
        count = write_rows(stream, ["x", "y", "label"], [[Fraction(1, 4), 2, "a"], [0.1, None, "b"]])
        assert count == 2
        lines = stream.getvalue().splitlines()
        assert lines == ["x,y,label", "0.25,2,a", "0.10000000000000001,,b"]

    def test_format_value(self):
        assert format_value("text") == "text"
        assert format_value(None) == ""
        assert format_value(Fraction(1, 3)) == "0.33333333333333331"

    def test_potential_csv(self, flat_c0, tmp_path):
        path = tmp_path / "phi.csv"
        count = write_potential_csv(flat_c0, path, t_grid=[-1.0, 0.0, 1.0])
        header, rows = read_table(path)
        assert count == 3
        assert header == list(POTENTIAL_COLUMNS)
        assert float(rows[0][0]) == -1.0
        # t(2) = -1 for this profile
        assert float(rows[0][1]) == pytest.approx(2.0, rel=1e-8)


class TestSweeps:
    def test_cM_of_b(self):
        spec = SweepSpec.from_dict(
            {"kind": "cM_of_b", "fixed": {"m": 1, "n": 2, "lambda": 1, "a": 1}, "grid": {"b": [2, 3]}}
        )
        rows = run_sweep(spec, workers=2)
        assert spec.header == ["m", "n", "lambda", "a", "b", "c_M", "c", "error"]
        assert [row[4] for row in rows] == ["2", "3"]
        assert rows[0][5] == pytest.approx(610 / 13)
        assert rows[0][6] == pytest.approx(276 / 13)
        assert rows[1][5] == pytest.approx(200 / 11)
        assert all(row[-1] == "" for row in rows)

    def test_failed_rows_keep_going(self):
        spec = SweepSpec.from_dict({"kind": "flat_kappa", "fixed": {"n": 2, "a": 1}, "grid": {"c": [0, 1]}})
        rows = run_sweep(spec, workers=1)
        assert rows[0][3:5] == ["", ""]
        assert "kappa" in rows[0][-1]
        assert rows[1][3] == pytest.approx(4.0)
        assert rows[1][-1] == ""

    def test_mpmath_kind_runs_on_one_worker(self, monkeypatch):
        def no_pool(*args, **kwargs):
            raise AssertionError("thread pool used for an mpmath sweep")

        monkeypatch.setattr("documents.sweep.ThreadPoolExecutor", no_pool)
        spec = SweepSpec.from_dict(
            {"kind": "flat_kappa", "fixed": {"n": 2, "a": 1}, "grid": {"c": [1, "1/2"]}}
        )
        dps = mpmath.mp.dps
        rows = run_sweep(spec, workers=4)
        assert [row[3] for row in rows] == [pytest.approx(4.0), pytest.approx(10.0)]
        assert mpmath.mp.dps == dps

    def test_workers_below_one(self):
        spec = SweepSpec.from_dict(
            {"kind": "cM_of_b", "fixed": {"m": 1, "n": 2, "lambda": 1, "a": 1}, "grid": {"b": [2]}}
        )
        with pytest.raises(DocumentError, match="at least 1"):
            run_sweep(spec, workers=0)

    def test_sup_c(self):
        spec = SweepSpec.from_dict(
            {"kind": "sup_c", "fixed": {"m": 1, "n": 2, "lambda": 1, "a": 1}, "grid": {"c_M": [5, -8]}}
        )
        rows = run_sweep(spec, workers=2)
        assert rows[0][5:7] == [0.0, "InSet_Zero"]
        assert rows[1][5:7] == [pytest.approx(-2.0), "InSet_Negative"]

    def test_empty_grid(self):
        spec = SweepSpec.from_dict({"kind": "flat_kappa", "fixed": {"n": 2, "a": 1}, "grid": {"c": []}})
        assert run_sweep(spec) == []

    @pytest.mark.parametrize(
        "data, message",
        [
            ({"kind": "nope"}, "unknown sweep kind"),
            ({"kind": "flat_kappa", "fixed": {"n": 2}, "grid": {"c": [1]}}, "missing"),
            ({"kind": "flat_kappa", "fixed": {"n": 2, "a": 1}, "grid": {"c": 1}}, "list"),
            ({"kind": "flat_kappa", "fixed": {"n": 2, "a": 1, "c": 1}, "grid": {"c": [1]}}, "both"),
            ({"kind": "flat_kappa", "fixed": {"n": "5/2", "a": 1}, "grid": {"c": [1]}}, "integer"),
            ({"kind": "flat_kappa", "fixed": {"n": 2, "a": "x"}, "grid": {"c": [1]}}, "rational"),
        ],
    )
    def test_invalid_spec(self, data, message):
        with pytest.raises(DocumentError, match=message):
            SweepSpec.from_dict(data)

    def test_spec_file(self, tmp_path):
        spec_path = tmp_path / "sweep.json"
        spec_path.write_text(
            json.dumps({"kind": "H_diagonal", "fixed": {"m": 1, "n": 2, "lambda": -1}, "grid": {"zeta": ["1/10"]}})
        )
        out = tmp_path / "out.csv"
        assert write_sweep(load_sweep_spec(spec_path), out, workers=1) == 1
        header, rows = read_table(out)
        assert header == ["m", "n", "lambda", "zeta", "H", "error"]
        assert rows[0][3] == "1/10"
        assert float(rows[0][4]) > 0

    def test_spec_file_not_json(self, tmp_path):
        spec_path = tmp_path / "sweep.json"
        spec_path.write_text("kind: cM_of_b")
        with pytest.raises(DocumentError, match="not valid JSON"):
            load_sweep_spec(spec_path)


class TestFigures:
    def test_cM_curve(self):
        table = build_figure("cM-of-b-lambda-neg", points=10)
        assert table.columns == ("b", "c_M")
        assert table.rows.shape == (10, 2)
        assert list(table.column("b")) == sorted(table.column("b"))

    def test_unknown_figure(self):
        with pytest.raises(DocumentError, match="unknown figure"):
            build_figure("phi-toric")

    def test_too_few_points(self):
        with pytest.raises(DocumentError):
            build_figure("phi-c0", points=1)

    def test_render_svg(self, tmp_path):
        table = build_figure("cM-of-b-lambda-neg", points=10)
        path = render_svg(table, tmp_path / "curve.svg")
        assert path.read_text().lstrip().startswith("<?xml")

    def test_table_csv(self, tmp_path):
        table = build_figure("phi-c0", points=20)
        assert table.write_csv(tmp_path / "phi.csv") == 20
        header, _ = read_table(tmp_path / "phi.csv")
        assert header == list(table.columns)


def test_sweep_workers_from_environment(monkeypatch):
    spec = SweepSpec.from_dict({"kind": "flat_kappa", "fixed": {"n": 2, "a": 1}, "grid": {"c": [1]}})
    monkeypatch.setenv("CSCK_SWEEP_WORKERS", "many")
    with pytest.raises(DocumentError, match="CSCK_SWEEP_WORKERS"):
        run_sweep(spec)
    monkeypatch.setenv("CSCK_SWEEP_WORKERS", "2")
    assert len(run_sweep(spec)) == 1
