"""Shared profiles and settings for the test suite."""

from fractions import Fraction

import pytest

from flat import FlatProblem, build_F
from momentum import BundleProblem, build_profile, lambda_negative_profiles, sup_allowable_c
from oracle import OracleSettings
from projective import build_projective_profile

ENV_VARS = (
    "CSCK_CURVATURE_THRESHOLD",
    "CSCK_ODE_THRESHOLD",
    "CSCK_FIT_THRESHOLD",
    "CSCK_DEGENERATE_FIT_THRESHOLD",
    "CSCK_COMPLETENESS_THRESHOLD",
    "CSCK_CURVATURE_GRID",
    "CSCK_PRECISION_DIGITS",
    "CSCK_SOLVER_TOL",
    "CSCK_SWEEP_WORKERS",
)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Tests never see thresholds from the developer's shell or .env."""
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def small_settings():
    return OracleSettings(curvature_grid=30)


@pytest.fixture(scope="session")
def flat_c0():
    return build_F(FlatProblem(2, Fraction(1), Fraction(0)))


@pytest.fixture(scope="session")
def flat_cneg():
    return build_F(FlatProblem(2, Fraction(1), Fraction(-6)))


@pytest.fixture(scope="session")
def flat_cpos():
    return build_F(FlatProblem(2, Fraction(1), Fraction(1)))


@pytest.fixture(scope="session")
def flat_cubic():
    return build_F(FlatProblem(3, Fraction(1), Fraction(-2)))


@pytest.fixture(scope="session")
def bundle_case_iii():
    """m=1, n=2, lambda=1, c_M=-8, a=1 at c0 = -2."""
    problem = BundleProblem(1, 2, Fraction(1), Fraction(-8), Fraction(-2), Fraction(1))
    return build_profile(problem, at_c0=True)


@pytest.fixture(scope="session")
def bundle_case_iv():
    """m=1, n=2, lambda=1, c_M=-4, a=1 at c0: double root at b ~ 4.4641."""
    allowable = sup_allowable_c(1, 2, 1, -4, 1)
    problem = BundleProblem(1, 2, Fraction(1), Fraction(-4), allowable.c0, Fraction(1))
    return build_profile(problem, allowable=allowable, at_c0=True)


@pytest.fixture(scope="session")
def bundle_lambda_zero():
    return build_profile(BundleProblem(1, 2, Fraction(0), Fraction(2), Fraction(1), Fraction(1)))


@pytest.fixture(scope="session")
def bundle_lambda_negative():
    profiles = lambda_negative_profiles(1, 2, -1, 10, Fraction(1, 10))
    assert profiles
    return profiles[0]


@pytest.fixture(scope="session")
def projective_exact():
    return build_projective_profile(1, 2, 1, 1, 2)
