"""Oracle module - independent numerical verification of constructed profiles."""

from .completeness import CompletenessResult, bundle_log_rate, completeness_probe, flat_log_rate
from .curvature import (
    CurvatureCheck,
    bundle_curvature_values,
    curvature_check_bundle,
    curvature_check_flat,
    curvature_check_raw,
    curvature_residual_bundle,
    curvature_residual_flat,
    flat_curvature_from_samples,
)
from .fitting import (
    ExponentComparison,
    FitResult,
    compare_ale_exponents,
    fit_asymptotics,
    fit_samples,
    model_grid,
    synthetic_self_test,
)
from .ode import default_ode_span, ode_vs_quadrature
from .report import (
    Check,
    VerificationReport,
    range_gap_samples,
    verify_bundle,
    verify_flat,
    verify_projective,
    verify_raw_bundle,
)
from .settings import OracleSettings, VerificationError

__all__ = [
    "OracleSettings",
    "VerificationError",
    "CurvatureCheck",
    "flat_curvature_from_samples",
    "curvature_check_flat",
    "curvature_residual_flat",
    "bundle_curvature_values",
    "curvature_check_raw",
    "curvature_check_bundle",
    "curvature_residual_bundle",
    "ode_vs_quadrature",
    "default_ode_span",
    "CompletenessResult",
    "completeness_probe",
    "flat_log_rate",
    "bundle_log_rate",
    "FitResult",
    "ExponentComparison",
    "model_grid",
    "fit_samples",
    "fit_asymptotics",
    "synthetic_self_test",
    "compare_ale_exponents",
    "Check",
    "VerificationReport",
    "verify_flat",
    "verify_bundle",
    "verify_projective",
    "verify_raw_bundle",
    "range_gap_samples",
]
