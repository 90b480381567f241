"""Profiles that close at b with phi(b) = 0 and phi'(b) = -1.

Such a profile extends the metric across the divisor at infinity of the
projective completion. With rational (a, b) the constants c_M and c from the
H/L integrals are exact, so both closing conditions hold exactly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from flat.asymptotics import AsymptoticModel, pmy_model
from momentum import BundleProblem, BundleProblemError, BundleProfile, CaseTag, assemble_bundle_profile, build_P
from polycore import PolyQ, positive_on

from .integrals import ProjectiveError, curvature_pair
from .solve import DEFAULT_TOL, ScanResult, scan_b, snap_b

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProjectiveProfile:
    """A bundle profile on (a, b) that extends across the divisor at infinity.

    ``c_M_requested`` is the base curvature the solve was asked for when b
    was found numerically; ``base.problem.c_M`` is the exact value at b.
    """

    base: BundleProfile
    b: Fraction
    extension_ok: bool
    c_M_requested: Fraction | None = None

    @property
    def c_M(self) -> Fraction:
        return self.base.problem.c_M

    @property
    def c(self) -> Fraction:
        return self.base.problem.c


def extension_residuals(P: PolyQ, Q: PolyQ, b: Fraction) -> tuple[Fraction, Fraction]:
    """(phi(b), phi'(b) + 1), both zero for a profile that extends."""
    Qb = Q(b)
    phi_b = P(b) / Qb
    dphi_b = (P.derivative()(b) * Qb - P(b) * Q.derivative()(b)) / Qb**2
    return phi_b, dphi_b + 1


def positive_off_zero_section(P: PolyQ, a: Fraction, b: Fraction) -> bool:
    """P > 0 on (0, a) and on (a, b), from the cofactor of (tau - a)^2."""
    R = P.exact_div(PolyQ.linear(1, -a) ** 2)
    return positive_on(R, Fraction(0), a) and R(a) > 0 and positive_on(P, a, b)


def build_projective_profile(
    m: int, n: int, lam, a, b, c_M_requested=None
) -> ProjectiveProfile:
    """Construct the extending profile on (a, b).

    Args:
        m, n: Base dimension and fibre rank
        lam: Bundle curvature, nonzero
        a: Zero-section value of tau
        b: Right end, exact rational
        c_M_requested: Base curvature targeted by the solve that produced b

    Raises:
        ProjectiveError: If b <= a, the closing conditions fail or phi
            vanishes before b
    """
    a, b = Fraction(a), Fraction(b)
    if b <= a:
        raise ProjectiveError(f"b = {b} must exceed a = {a}")
    c_M, c = curvature_pair(m, n, lam, a, b, extension=True)
    try:
        problem = BundleProblem(m, n, lam, c_M, c, a)
        P = build_P(problem)
    except BundleProblemError as e:
        raise ProjectiveError(str(e)) from e

    Q = PolyQ.linear(Fraction(lam), 1) ** m * PolyQ.monomial(n - 1)
    phi_b, dphi_residual = extension_residuals(P, Q, b)
    if phi_b != 0 or dphi_residual != 0:
        raise ProjectiveError(
            f"extension fails at b = {b}: phi(b) = {float(phi_b):.3g}, phi'(b) + 1 = {float(dphi_residual):.3g}"
        )
    if not positive_off_zero_section(P, a, b):
        raise ProjectiveError(f"phi vanishes inside (0, {a}) or ({a}, {b})")

    notes = []
    if c_M_requested is not None and Fraction(c_M_requested) != c_M:
        notes.append(
            f"b snapped to {b}; c_M = {float(c_M):.12g} exactly (requested {float(Fraction(c_M_requested)):.12g})"
        )
    try:
        base = assemble_bundle_profile(
            problem, CaseTag.PROJECTIVE_EXTENSION, P=P, notes=tuple(notes), known_root=b
        )
    except BundleProblemError as e:
        raise ProjectiveError(str(e)) from e
    logger.info("projective profile on (%s, %s): c_M = %s, c = %s", a, b, c_M, c)
    return ProjectiveProfile(
        base=base,
        b=b,
        extension_ok=True,
        c_M_requested=Fraction(c_M_requested) if c_M_requested is not None else None,
    )


def solve_projective(
    m: int, n: int, lam, a, c_M, tol: float = DEFAULT_TOL
) -> tuple[list[ProjectiveProfile], ScanResult]:
    """Every extending profile with base curvature c_M, one per root b.

    Each b is snapped to a rational within tol before the exact construction.
    """
    scan = scan_b(m, n, lam, a, c_M, tol)
    profiles = [
        build_projective_profile(m, n, lam, a, snap_b(b, tol), c_M_requested=Fraction(c_M))
        for b in scan.roots
    ]
    return profiles, scan


def pmy_check_projective(profile: ProjectiveProfile) -> AsymptoticModel:
    """PMY model at the zero section of an extending profile.

    Raises:
        ProjectiveError: If kappa(a) <= 0
    """
    kappa_a = profile.base.kappa_a
    if kappa_a <= 0:
        raise ProjectiveError(f"kappa(a) = {kappa_a} is not positive for the projective profile")
    return pmy_model(float(profile.base.problem.a), float(-2 / kappa_a))
