import math
from fractions import Fraction

import pytest

from flat import (
    FlatProblem,
    FlatProfile,
    ale_model,
    build_F,
    pmy_model,
    poincare_model,
    puncture_coefficient,
)
from momentum import End, build_P
from oracle import (
    OracleSettings,
    VerificationError,
    VerificationReport,
    bundle_log_rate,
    compare_ale_exponents,
    completeness_probe,
    curvature_check_bundle,
    curvature_check_flat,
    curvature_check_raw,
    fit_asymptotics,
    fit_samples,
    flat_log_rate,
    ode_vs_quadrature,
    synthetic_self_test,
    verify_bundle,
    verify_flat,
    verify_projective,
    verify_raw_bundle,
)
from polycore import PolyQ


def assert_richardson(check):
    assert check.ratio is None or 3.5 <= check.ratio <= 4.5


class TestSettings:
    def test_defaults(self):
        settings = OracleSettings()
        assert settings.curvature_threshold == 1e-5
        assert settings.ode_threshold == 1e-7
        assert settings.fit_threshold == 0.01
        assert settings.degenerate_fit_threshold == 0.02
        assert settings.curvature_grid == 400
        assert settings.precision_digits == 30

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("CSCK_CURVATURE_GRID", "50")
        monkeypatch.setenv("CSCK_FIT_THRESHOLD", "0.05")
        settings = OracleSettings()
        assert settings.curvature_grid == 50
        assert settings.fit_threshold == 0.05
        assert OracleSettings(curvature_grid=12).curvature_grid == 12

    def test_explicit_zero_is_not_a_default(self, monkeypatch):
        monkeypatch.setenv("CSCK_SOLVER_TOL", "1e-6")
        assert OracleSettings().solver_tol == 1e-6
        with pytest.raises(VerificationError, match="solver_tol must be positive"):
            OracleSettings(solver_tol=0.0)
        with pytest.raises(VerificationError, match="curvature_grid"):
            OracleSettings(curvature_grid=0)

    def test_env_not_a_number(self, monkeypatch):
        monkeypatch.setenv("CSCK_SOLVER_TOL", "tight")
        with pytest.raises(VerificationError, match="not a number"):
            OracleSettings()

    @pytest.mark.parametrize(
        "kwargs", [{"fit_threshold": -0.1}, {"curvature_grid": 3}, {"precision_digits": 10}]
    )
    def test_invalid(self, kwargs):
        with pytest.raises(VerificationError):
            OracleSettings(**kwargs)


class TestCurvature:
    @pytest.mark.parametrize("fixture", ["flat_c0", "flat_cneg", "flat_cpos"])
    def test_flat(self, fixture, request, small_settings):
        check = curvature_check_flat(request.getfixturevalue(fixture), settings=small_settings)
        assert check.residual < 1e-5
        assert check.curvature.shape == (30,)
        assert_richardson(check)

    @pytest.mark.parametrize(
        "fixture", ["bundle_case_iv", "bundle_lambda_zero", "bundle_lambda_negative"]
    )
    def test_bundle(self, fixture, request, small_settings):
        check = curvature_check_bundle(request.getfixturevalue(fixture), settings=small_settings)
        assert check.residual < 1e-5
        assert_richardson(check)

    def test_projective(self, projective_exact, small_settings):
        check = curvature_check_bundle(projective_exact.base, settings=small_settings)
        assert check.residual < 1e-5
        assert_richardson(check)

    def test_corrupted_P_detected(self, bundle_lambda_zero, small_settings):
        profile = bundle_lambda_zero
        corrupted = profile.P + PolyQ.monomial(2, Fraction(1, 100))
        check = curvature_check_raw(profile.problem, corrupted, profile.b, settings=small_settings)
        assert check.residual > 1e-3

    @pytest.mark.slow
    @pytest.mark.parametrize(
        "fixture",
        [
            "flat_c0",
            "flat_cneg",
            "flat_cpos",
            "flat_cubic",
            "bundle_case_iii",
            "bundle_case_iv",
        ],
    )
    def test_default_grid_second_order(self, fixture, request):
        settings = OracleSettings()
        profile = request.getfixturevalue(fixture)
        if isinstance(profile, FlatProfile):
            check = curvature_check_flat(profile, settings=settings)
        else:
            check = curvature_check_bundle(profile, settings=settings)
        assert check.curvature.shape == (400,)
        assert check.residual < settings.curvature_threshold
        assert check.ratio is not None
        assert 3.5 <= check.ratio <= 4.5

    def test_grid_too_close_to_end(self, bundle_lambda_zero, small_settings):
        a = float(bundle_lambda_zero.problem.a)
        with pytest.raises(VerificationError):
            curvature_check_bundle(bundle_lambda_zero, grid=[a, a + 1], settings=small_settings)


class TestCompleteness:
    @pytest.mark.parametrize("fixture", ["flat_c0", "flat_cneg", "flat_cpos"])
    def test_flat_near_puncture(self, fixture, request):
        profile = request.getfixturevalue(fixture)
        result = completeness_probe(profile, End.NEAR_A)
        assert result.divergent
        assert result.log_rate == pytest.approx(flat_log_rate(profile), rel=0.05)

    def test_flat_far_ends(self, flat_c0, flat_cneg, flat_cpos):
        assert completeness_probe(flat_c0, End.FAR_END).divergent
        assert completeness_probe(flat_cneg, End.FAR_END).divergent
        finite = completeness_probe(flat_cpos, End.FAR_END)
        assert not finite.divergent
        assert finite.limit is not None and math.isfinite(finite.limit)

    def test_bundle_near_zero_section(self, bundle_lambda_zero):
        result = completeness_probe(bundle_lambda_zero, End.NEAR_A)
        assert result.divergent
        assert result.log_rate == pytest.approx(bundle_log_rate(bundle_lambda_zero), rel=0.05)

    def test_projective_far_end_finite(self, projective_exact):
        result = completeness_probe(projective_exact, End.FAR_END)
        assert not result.divergent
        assert result.to_dict()["end"] == "FarEnd"

    def test_unknown_profile(self):
        with pytest.raises(VerificationError):
            completeness_probe(object(), End.NEAR_A)


class TestFitting:
    def test_self_test_recovers_coefficients(self):
        problem = FlatProblem(2, Fraction(1), Fraction(0))
        for model in (pmy_model(1.0, -1.0), poincare_model(-2.0), ale_model(problem)):
            assert synthetic_self_test(model, points=200) < 1e-4

    def test_too_few_samples(self):
        model = pmy_model(1.0, -1.0)
        with pytest.raises(VerificationError, match="samples"):
            fit_samples(model, [-10.0, -20.0], [1.0, 2.0])

    @pytest.mark.slow
    def test_ale_coefficients(self, flat_c0):
        fit = fit_asymptotics(flat_c0, ale_model(flat_c0.problem), points=200)
        assert fit.leading == pytest.approx([1.0, 2.0, 0.5], rel=0.01)

    @pytest.mark.slow
    @pytest.mark.parametrize(
        "n, a, c, expected",
        [(2, 1, 0, -1.0), (2, 1, -6, -0.25), (2, 1, 1, -2.0), (3, 1, -2, -0.25)],
    )
    def test_puncture_coefficient(self, n, a, c, expected):
        profile = build_F(FlatProblem(n, Fraction(a), Fraction(c)))
        assert puncture_coefficient(profile.problem) == pytest.approx(expected)
        fit = fit_asymptotics(profile, pmy_model(float(a), expected), points=200)
        assert fit.leading[1] == pytest.approx(expected, rel=0.01)

    @pytest.mark.slow
    def test_exponent_comparison(self):
        profile = build_F(FlatProblem(3, Fraction(1), Fraction(0)))
        comparison = compare_ale_exponents(profile, points=200)
        assert comparison.preferred in ("2-n", "1-2n")

    def test_exponent_comparison_needs_n3(self, flat_c0):
        with pytest.raises(VerificationError):
            compare_ale_exponents(flat_c0)


class TestOde:
    @pytest.mark.parametrize("fixture", ["flat_c0", "flat_cpos"])
    def test_matches_quadrature(self, fixture, request):
        profile = request.getfixturevalue(fixture)
        t0 = profile.t_normalization
        assert ode_vs_quadrature(profile, (t0, t0 + 5)) < 1e-7

    def test_empty_span(self, flat_c0):
        assert ode_vs_quadrature(flat_c0, (1.0, 1.0)) == 0.0

    def test_decreasing_span(self, flat_c0):
        with pytest.raises(VerificationError):
            ode_vs_quadrature(flat_c0, (2.0, 1.0))


class TestReport:
    def test_empty_report_does_not_pass(self):
        assert not VerificationReport(kind="flat").passed

    def test_attempt_records_failure(self):
        report = VerificationReport(kind="flat")
        report.add("first", True, 1.0)

        def broken():
            raise VerificationError("no data")

        assert report.attempt("second", broken) is None
        assert not report.passed
        assert [check.name for check in report.failures] == ["second"]
        assert report.to_dict()["status"] == "FAIL"

    def test_raw_bundle_fails(self, bundle_lambda_zero, small_settings):
        problem = bundle_lambda_zero.problem
        P = build_P(problem) + PolyQ.monomial(2, Fraction(1, 10))
        report = verify_raw_bundle(problem, P, None, "phi has the wrong second derivative", small_settings)
        assert not report.passed
        assert report.failures[0].name == "profile_assembly"
        assert report.curvature_residual_max is not None and report.curvature_residual_max > 1e-5

    @pytest.mark.slow
    @pytest.mark.parametrize("fixture", ["flat_c0", "flat_cneg", "flat_cpos"])
    def test_verify_flat(self, fixture, request, small_settings):
        report = verify_flat(request.getfixturevalue(fixture), small_settings, fit_points=200)
        assert report.passed, report.failures
        assert report.to_dict()["status"] == "PASS"

    @pytest.mark.slow
    def test_verify_bundle(self, bundle_lambda_zero, small_settings):
        report = verify_bundle(bundle_lambda_zero, small_settings)
        assert report.passed, report.failures

    @pytest.mark.slow
    def test_verify_projective(self, projective_exact, small_settings):
        report = verify_projective(projective_exact, small_settings)
        assert report.passed, report.failures
        names = {check.name for check in report.checks}
        assert {"phi_b_zero", "dphi_b_minus_one", "range_gap_negative"} <= names
