"""Momentum module - bundle-adapted cscK profiles phi = P/Q over a cscK base."""

from .allowable import (
    AllowableCase,
    AllowableResult,
    is_allowable,
    psi,
    psi_at_zero_section,
    sup_allowable_c,
    wronskian,
)
from .asymptotics import (
    double_root_model,
    growth_rates,
    infinity_asymptotics,
    pmy_coefficients,
    poincare_coefficient,
    power_model,
    sqrt_model,
    theta1_formula,
    two_thirds_model,
)
from .lambda_negative import build_lambda_negative_profile, lambda_negative_profiles, solve_lambda_negative
from .problem import (
    BundleProblem,
    BundleProblemError,
    build_P,
    build_Q,
    check_curvature_identity,
    degree_gap,
    kappa,
    kappa_derivative,
    kappa_value,
    p_components,
    zero_section_factor,
)
from .profile import (
    BundleProfile,
    CaseTag,
    End,
    MomentumSampler,
    MomentumTable,
    TotalSpace,
    assemble_bundle_profile,
    build_profile,
    first_root,
)

__all__ = [
    "BundleProblem",
    "BundleProblemError",
    "BundleProfile",
    "CaseTag",
    "TotalSpace",
    "End",
    "build_Q",
    "build_P",
    "p_components",
    "kappa",
    "kappa_value",
    "kappa_derivative",
    "check_curvature_identity",
    "zero_section_factor",
    "degree_gap",
    "AllowableCase",
    "AllowableResult",
    "is_allowable",
    "psi",
    "psi_at_zero_section",
    "wronskian",
    "sup_allowable_c",
    "build_profile",
    "assemble_bundle_profile",
    "first_root",
    "MomentumSampler",
    "MomentumTable",
    "solve_lambda_negative",
    "build_lambda_negative_profile",
    "lambda_negative_profiles",
    "pmy_coefficients",
    "infinity_asymptotics",
    "growth_rates",
    "theta1_formula",
    "poincare_coefficient",
    "power_model",
    "double_root_model",
    "sqrt_model",
    "two_thirds_model",
]
