"""Verification suites and the report they produce."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from flat import EndpointClass, FlatProblemError, FlatProfile, ObstructionViolation, check_no_extension
from flat import expected_asymptotics as flat_models
from momentum import BundleProblem, BundleProblemError, BundleProfile, End, infinity_asymptotics, pmy_coefficients
from polycore import PolyQ

from .completeness import CompletenessResult, bundle_log_rate, completeness_probe, flat_log_rate
from .curvature import CurvatureCheck, curvature_check_bundle, curvature_check_flat, curvature_check_raw
from .fitting import FitResult, compare_ale_exponents, fit_asymptotics
from .ode import default_ode_span, ode_vs_quadrature
from .settings import OracleSettings, VerificationError

logger = logging.getLogger(__name__)

RICHARDSON_RANGE = (3.5, 4.5)
LOG_RATE_TOLERANCE = 0.05
BUNDLE_FIT_POINTS = 200

_ORACLE_ERRORS = (VerificationError, FlatProblemError, BundleProblemError, ArithmeticError, ValueError)


@dataclass
class Check:
    name: str
    passed: bool
    value: float | bool | None = None
    threshold: float | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": "PASS" if self.passed else "FAIL",
            "value": self.value,
            "threshold": self.threshold,
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    """Residuals and PASS/FAIL checks for one profile."""

    kind: str
    curvature_residual_max: float | None = None
    richardson_ratio: float | None = None
    ode_quadrature_gap: float | None = None
    completeness: dict[str, CompletenessResult] = field(default_factory=dict)
    asymptotic_fits: list[FitResult] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    settings: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [check for check in self.checks if not check.passed]

    def add(self, name: str, passed: bool, value=None, threshold=None, detail: str = "") -> Check:
        check = Check(name, bool(passed), value, threshold, detail)
        self.checks.append(check)
        if not check.passed:
            logger.warning("check %s failed: value %s, threshold %s %s", name, value, threshold, detail)
        return check

    def attempt(self, name: str, func: Callable[[], object]):
        """Run one oracle step; an oracle error becomes a failed check."""
        try:
            return func()
        except _ORACLE_ERRORS as e:
            self.add(name, False, detail=str(e))
            return None

    def to_dict(self) -> dict:
        near = self.completeness.get("near_zero")
        far = self.completeness.get("far_end")
        return {
            "kind": self.kind,
            "status": "PASS" if self.passed else "FAIL",
            "curvature_residual_max": self.curvature_residual_max,
            "richardson_ratio": self.richardson_ratio,
            "ode_quadrature_gap": self.ode_quadrature_gap,
            "completeness": {
                "near_zero": near.to_dict() if near else None,
                "far_end": far.to_dict() if far else None,
            },
            "asymptotic_fits": [fit.to_dict() for fit in self.asymptotic_fits],
            "checks": [check.to_dict() for check in self.checks],
            "notes": list(self.notes),
            "settings": dict(self.settings),
        }


def _record_curvature(report: VerificationReport, check: CurvatureCheck | None, settings: OracleSettings):
    if check is None:
        return
    report.curvature_residual_max = check.residual
    report.richardson_ratio = check.ratio
    report.add(
        "curvature_residual", check.residual < settings.curvature_threshold,
        check.residual, settings.curvature_threshold,
    )
    if check.ratio is None:
        report.notes.append("Richardson ratio skipped: h/2 residual is at the rounding floor")
    else:
        lo, hi = RICHARDSON_RANGE
        report.add("richardson_ratio", lo <= check.ratio <= hi, check.ratio, None, f"expected in [{lo}, {hi}]")


def _record_near(report: VerificationReport, result: CompletenessResult | None, expected_rate: float | None,
                 settings: OracleSettings):
    if result is None:
        return
    report.completeness["near_zero"] = result
    report.add("near_zero_divergent", result.divergent, result.divergent)
    if expected_rate is None:
        report.notes.append("near-zero length diverges faster than logarithmically; no log rate")
        return
    if result.log_rate is None:
        report.add("near_zero_log_rate", False, None, expected_rate, "increments are not constant")
        return
    rate_error = abs(result.log_rate - expected_rate) / expected_rate
    report.add("near_zero_log_rate", rate_error <= LOG_RATE_TOLERANCE, result.log_rate, expected_rate)
    report.add(
        "near_zero_log_fit", result.residual is not None and result.residual < settings.completeness_threshold,
        result.residual, settings.completeness_threshold,
    )


def _record_far(report: VerificationReport, result: CompletenessResult | None, expect_divergent: bool):
    if result is None:
        return
    report.completeness["far_end"] = result
    report.add(
        "far_end_divergent" if expect_divergent else "far_end_finite",
        result.divergent == expect_divergent, result.divergent, None,
        "" if result.limit is None else f"length limit {result.limit:.10g}",
    )


def _record_fit(report: VerificationReport, fit: FitResult | None, settings: OracleSettings):
    if fit is None:
        return
    report.asymptotic_fits.append(fit)
    threshold = settings.fit_threshold if fit.model.tolerance <= 0.01 else settings.degenerate_fit_threshold
    report.add(f"fit_{fit.model.location.value}", fit.passed(threshold), fit.max_relative_error, threshold)


def verify_flat(
    profile: FlatProfile,
    settings: OracleSettings | None = None,
    grid=None,
    fit_points: int = 400,
) -> VerificationReport:
    """Curvature, ODE, completeness and asymptotic checks for a flat profile."""
    settings = settings or OracleSettings()
    report = VerificationReport(kind="flat", settings=settings.as_dict())

    _record_curvature(report, report.attempt("curvature_residual", lambda: curvature_check_flat(profile, grid, settings)),
                      settings)

    gap = report.attempt("ode_quadrature_gap", lambda: ode_vs_quadrature(profile, default_ode_span(profile)))
    if gap is not None:
        report.ode_quadrature_gap = gap
        report.add("ode_quadrature_gap", gap < settings.ode_threshold, gap, settings.ode_threshold)

    near = report.attempt("near_zero_divergent", lambda: completeness_probe(profile, End.NEAR_A))
    _record_near(report, near, flat_log_rate(profile), settings)
    far = report.attempt("far_end", lambda: completeness_probe(profile, End.FAR_END))
    _record_far(report, far, profile.endpoint_class is not EndpointClass.FINITE_SIMPLE_ROOT)

    for model in flat_models(profile):
        _record_fit(report, report.attempt(f"fit_{model.location.value}",
                                           lambda m=model: fit_asymptotics(profile, m, points=fit_points)), settings)

    problem = profile.problem
    if problem.n >= 3 and profile.endpoint_class is EndpointClass.INFINITE_LOG_GROWTH:
        comparison = report.attempt("ale_exponent", lambda: compare_ale_exponents(profile, fit_points))
        if comparison is not None:
            report.notes.append(
                f"first far-field correction fits best with exponent {comparison.preferred} "
                f"(residuals {comparison.residual_standard:.3g} vs {comparison.residual_alternative:.3g})"
            )
    if profile.endpoint_class is EndpointClass.FINITE_SIMPLE_ROOT:
        try:
            kappa = check_no_extension(profile)
            report.add("kappa_not_one", True, float(kappa))
        except ObstructionViolation as e:
            report.add("kappa_not_one", False, float(profile.kappa), detail=str(e))
    return report


def _bundle_checks(report: VerificationReport, profile: BundleProfile, settings: OracleSettings, grid,
                   fit_points: int, far_divergent: bool):
    _record_curvature(report, report.attempt("curvature_residual",
                                             lambda: curvature_check_bundle(profile, grid, settings)), settings)
    near = report.attempt("near_zero_divergent", lambda: completeness_probe(profile, End.NEAR_A))
    _record_near(report, near, bundle_log_rate(profile), settings)
    far = report.attempt("far_end", lambda: completeness_probe(profile, End.FAR_END))
    _record_far(report, far, far_divergent)

    dps = settings.precision_digits
    for name, build in (("fit_PunctureZero", pmy_coefficients), ("fit_FarEnd", infinity_asymptotics)):
        model = report.attempt(name, lambda b=build: b(profile))
        if model is not None:
            _record_fit(report, report.attempt(name, lambda m=model: fit_asymptotics(profile, m, None, fit_points, dps)),
                        settings)
    report.notes.extend(profile.notes)


def verify_bundle(
    profile: BundleProfile,
    settings: OracleSettings | None = None,
    grid=None,
    fit_points: int = BUNDLE_FIT_POINTS,
) -> VerificationReport:
    """Curvature, completeness and asymptotic checks for a bundle profile."""
    settings = settings or OracleSettings()
    report = VerificationReport(kind="bundle", settings=settings.as_dict())
    _bundle_checks(report, profile, settings, grid, fit_points, far_divergent=True)
    return report


def range_gap_samples(profile, points: int = 20) -> np.ndarray:
    """K(b') on a geometric grid of b' in (a, 10 b] for the projective range check."""
    from projective import range_gap

    problem = profile.base.problem
    a, b = float(problem.a), float(profile.b)
    grid = np.geomspace(a + 1e-3 * (b - a), 10 * b, points)
    return np.array([float(range_gap(problem.m, problem.n, problem.lam, problem.a, x)) for x in grid])


def verify_projective(
    profile,
    settings: OracleSettings | None = None,
    grid=None,
    fit_points: int = BUNDLE_FIT_POINTS,
) -> VerificationReport:
    """Bundle checks plus the closing conditions at b and the c_M range spot check."""
    from projective import ProjectiveError, extension_residuals, pmy_check_projective

    settings = settings or OracleSettings()
    report = VerificationReport(kind="projective", settings=settings.as_dict())
    base = profile.base
    phi_b, dphi_b = extension_residuals(base.P, base.Q, profile.b)
    report.add("phi_b_zero", phi_b == 0, float(phi_b))
    report.add("dphi_b_minus_one", dphi_b == 0, float(dphi_b))
    try:
        pmy_check_projective(profile)
        report.add("kappa_a_positive", True, float(base.kappa_a))
    except ProjectiveError as e:
        report.add("kappa_a_positive", False, float(base.kappa_a), detail=str(e))

    _bundle_checks(report, base, settings, grid, fit_points, far_divergent=False)

    if base.problem.lam > 0:
        gaps = range_gap_samples(profile)
        report.add("range_gap_negative", bool(np.all(gaps < 0)), float(gaps.max()), 0.0)
        report.notes.append(f"K(b) sampled at {gaps.size} points, max {gaps.max():.6g}")
    return report


def verify_raw_bundle(
    problem: BundleProblem, P: PolyQ, b, reason: str, settings: OracleSettings | None = None
) -> VerificationReport:
    """Curvature check for bundle data that no longer assembles into a profile.

    The assembly failure itself is recorded as a failed check.
    """
    settings = settings or OracleSettings()
    report = VerificationReport(kind="bundle", settings=settings.as_dict())
    report.add("profile_assembly", False, detail=reason)
    _record_curvature(report, report.attempt("curvature_residual",
                                             lambda: curvature_check_raw(problem, P, b, None, settings)), settings)
    return report
