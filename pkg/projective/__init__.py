"""Projective module - profiles that extend across the divisor at infinity."""

from .integrals import (
    HLValues,
    Moments,
    ProjectiveError,
    c_of_b,
    cM_limit,
    cM_of_b,
    curvature_pair,
    h_ratio,
    hl_values,
    moments,
    range_gap,
)
from .profile import (
    ProjectiveProfile,
    build_projective_profile,
    extension_residuals,
    pmy_check_projective,
    solve_projective,
)
from .solve import DEFAULT_TOL, CMRange, ScanResult, cM_range, scan_b, snap_b, solve_b_given_cM

__all__ = [
    "DEFAULT_TOL",
    "ProjectiveError",
    "HLValues",
    "Moments",
    "moments",
    "hl_values",
    "cM_of_b",
    "c_of_b",
    "curvature_pair",
    "h_ratio",
    "cM_limit",
    "range_gap",
    "ScanResult",
    "CMRange",
    "scan_b",
    "solve_b_given_cM",
    "cM_range",
    "snap_b",
    "ProjectiveProfile",
    "build_projective_profile",
    "solve_projective",
    "extension_residuals",
    "pmy_check_projective",
]
