"""Expected expansions of the fibre potential f(nu), nu = log r^2."""

from __future__ import annotations

import logging
import math
from fractions import Fraction

from flat.asymptotics import (
    PUNCTURE_WINDOW,
    AsymptoticModel,
    Basis,
    BasisKind,
    Location,
    Spacing,
    Term,
    incomplete_model,
    pmy_model,
    poincare_model,
)

from .problem import BundleProblemError, kappa_derivative
from .profile import BundleProfile, CaseTag

logger = logging.getLogger(__name__)

DEGENERATE_TOLERANCE = 0.02
DOUBLE_ROOT_WINDOW = (1.0e2, 1.0e5)


def sqrt_model(a: float, coefficient: float) -> AsymptoticModel:
    """a log r^2 + coefficient (-log r^2)^(1/2), for kappa(a) = 0 < kappa'(a)."""
    return AsymptoticModel(
        location=Location.PUNCTURE_ZERO,
        terms=(
            Term(a, Basis(BasisKind.LOG_R2)),
            Term(coefficient, Basis(BasisKind.NEG_LOG_R2_POWER, 0.5)),
        ),
        remainder=(
            Basis(BasisKind.LOG_NEG_LOG_R2),
            Basis(BasisKind.ONE),
            Basis(BasisKind.NEG_LOG_R2_POWER, -0.5),
        ),
        remainder_order="log(-log r^2)",
        window=PUNCTURE_WINDOW,
        spacing=Spacing.GEOMETRIC,
        tolerance=DEGENERATE_TOLERANCE,
    )


def two_thirds_model(a: float, coefficient: float) -> AsymptoticModel:
    """a log r^2 + coefficient (-log r^2)^(2/3), for kappa(a) = kappa'(a) = 0."""
    return AsymptoticModel(
        location=Location.PUNCTURE_ZERO,
        terms=(
            Term(a, Basis(BasisKind.LOG_R2)),
            Term(coefficient, Basis(BasisKind.NEG_LOG_R2_POWER, 2 / 3)),
        ),
        remainder=(
            Basis(BasisKind.NEG_LOG_R2_POWER, 1 / 3),
            Basis(BasisKind.LOG_NEG_LOG_R2),
            Basis(BasisKind.ONE),
            Basis(BasisKind.NEG_LOG_R2_POWER, -1 / 3),
        ),
        remainder_order="(-log r^2)^(1/3)",
        window=PUNCTURE_WINDOW,
        spacing=Spacing.GEOMETRIC,
        tolerance=DEGENERATE_TOLERANCE,
    )


def pmy_coefficients(profile: BundleProfile) -> AsymptoticModel:
    """Expansion of f at the zero section.

    kappa(a) > 0 gives a log r^2 - 2/kappa(a) log(-log r^2). When kappa(a) = 0
    the leading correction becomes a fractional power of -log r^2, decided by
    the first nonvanishing derivative of kappa at a.

    Raises:
        BundleProblemError: If kappa(a) < 0, or kappa and its first two
            derivatives vanish at a
    """
    problem = profile.problem
    a = float(problem.a)
    k0 = profile.kappa_a
    if k0 > 0:
        return pmy_model(a, float(-2 / k0))
    if k0 < 0:
        raise BundleProblemError(f"kappa(a) = {k0} < 0 contradicts positivity of phi near a")
    k1 = kappa_derivative(problem, problem.a, 1)
    if k1 > 0:
        return sqrt_model(a, -2 * math.sqrt(3 / float(k1)))
    k2 = kappa_derivative(problem, problem.a, 2)
    if k1 == 0 and k2 > 0:
        return two_thirds_model(a, -1.5 * (8 / float(k2)) ** (1 / 3))
    raise BundleProblemError(f"unsupported degeneracy at a: kappa' = {k1}, kappa'' = {k2}")


def growth_rates(profile: BundleProfile) -> tuple[Fraction, Fraction]:
    """theta1 and theta2 for a profile with deg P - deg Q = 1.

    With P = Q (K1 tau + K0) + R, f = (1/theta1)(r^2)^theta1 + theta2 log r^2 + O(1)
    where theta1 = K1 and theta2 = -K0/K1.
    """
    if profile.degree_gap != 1:
        raise BundleProblemError(f"growth rates need deg P - deg Q = 1, got {profile.degree_gap}")
    quotient, _ = profile.P.divmod(profile.Q)
    K0, K1 = quotient.coefficient(0), quotient.coefficient(1)
    return K1, -K0 / K1


def theta1_formula(m: int, n: int, lam, c_M) -> Fraction:
    """(c_M + n(n-1) lambda) / (lambda (m+n)(m+n-1)), the c = 0 growth rate for lambda > 0."""
    lam, c_M = Fraction(lam), Fraction(c_M)
    return (c_M + n * (n - 1) * lam) / (lam * (m + n) * (m + n - 1))


def power_model(theta1: float, theta2: float) -> AsymptoticModel:
    return AsymptoticModel(
        location=Location.INFINITY_POWER,
        terms=(
            Term(1 / theta1, Basis(BasisKind.R2_POWER, theta1)),
            Term(theta2, Basis(BasisKind.LOG_R2)),
        ),
        remainder=(
            Basis(BasisKind.ONE),
            Basis(BasisKind.R2_POWER, -theta1),
            Basis(BasisKind.R2_POWER, -2 * theta1),
        ),
        remainder_order="(r^2)^-theta1",
        window=(math.log(1.0e2) / theta1, math.log(1.0e4) / theta1),
    )


def double_root_model(b: float, kappa_b: float) -> AsymptoticModel:
    """b log r^2 - 2/kappa(b) log(log r^2) as phi -> 0 at a double root b."""
    return AsymptoticModel(
        location=Location.INFINITY_DOUBLE_ROOT,
        terms=(
            Term(b, Basis(BasisKind.LOG_R2)),
            Term(-2 / kappa_b, Basis(BasisKind.LOG_LOG_R2)),
        ),
        remainder=(
            Basis(BasisKind.ONE),
            Basis(BasisKind.LOG_R2_POWER, -1.0),
            Basis(BasisKind.LOG_LOG_R2_OVER_LOG_R2),
        ),
        remainder_order="log(log r^2)/log r^2",
        window=DOUBLE_ROOT_WINDOW,
        spacing=Spacing.GEOMETRIC,
        tolerance=DEGENERATE_TOLERANCE,
    )


def poincare_coefficient(profile: BundleProfile) -> Fraction:
    """-lead(Q)/lead(P): the log(-log r^2) coefficient when phi ~ tau^2.

    For lambda > 0 this is -(m+n)(m+n+1)/(-c).
    """
    return -profile.Q.leading / profile.P.leading


def infinity_asymptotics(profile: BundleProfile) -> AsymptoticModel:
    """Expansion of f at the far end of the profile domain."""
    if profile.b is None and profile.degree_gap == 2:
        return poincare_model(float(poincare_coefficient(profile)))
    if profile.b is None:
        theta1, theta2 = growth_rates(profile)
        return power_model(float(theta1), float(theta2))
    if profile.case_tag is CaseTag.PROJECTIVE_EXTENSION:
        # phi'(b) = -1, so the end behaves like kappa = 1 and r^-2 is a coordinate across D_inf
        return incomplete_model(float(profile.b), 1.0)
    if profile.kappa_b is None or profile.kappa_b <= 0:
        raise BundleProblemError(f"kappa(b) = {profile.kappa_b} must be positive at a double root")
    return double_root_model(float(profile.b), float(profile.kappa_b))
