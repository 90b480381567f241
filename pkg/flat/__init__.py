"""Flat module - rotationally symmetric cscK profiles on punctured C^n and D^n."""

from .asymptotics import (
    AsymptoticModel,
    Basis,
    BasisKind,
    Location,
    Spacing,
    Term,
    ale_model,
    expected_asymptotics,
    incomplete_model,
    pmy_model,
    poincare_model,
    puncture_coefficient,
)
from .profile import (
    EndpointClass,
    FlatProblem,
    FlatProblemError,
    FlatProfile,
    ObstructionViolation,
    assemble_profile,
    build_F,
    check_no_extension,
    completeness_constants,
    f_polynomial,
    normalization_offset,
    rescaled_F,
    unit_puncture_problem,
)
from .solution import (
    GapIntegrand,
    PhiInverter,
    PotentialTable,
    PrecisePhiSampler,
    phi_of_t,
    sample_potential,
    t_of_phi,
)

__all__ = [
    "FlatProblem",
    "FlatProfile",
    "FlatProblemError",
    "ObstructionViolation",
    "EndpointClass",
    "build_F",
    "assemble_profile",
    "completeness_constants",
    "f_polynomial",
    "normalization_offset",
    "check_no_extension",
    "unit_puncture_problem",
    "rescaled_F",
    "GapIntegrand",
    "PhiInverter",
    "PotentialTable",
    "PrecisePhiSampler",
    "t_of_phi",
    "phi_of_t",
    "sample_potential",
    "AsymptoticModel",
    "Basis",
    "BasisKind",
    "Location",
    "Spacing",
    "Term",
    "expected_asymptotics",
    "pmy_model",
    "poincare_model",
    "ale_model",
    "incomplete_model",
    "puncture_coefficient",
]
