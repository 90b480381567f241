"""Complete profiles on E* for lambda < 0.

For lambda < 0 the profile must close with a double root b < -1/lambda.
P(b) = P'(b) = 0 gives int kappa Q = int x kappa Q = 0 over [a, b], so

    c_M = n(n-1) H1/H2    and    c = n(n-1) H3/H2.

a is fixed by the caller and b is solved for the requested c_M.
"""

from __future__ import annotations

import logging
from fractions import Fraction

from .allowable import DEFAULT_TOL
from .problem import BundleProblem, BundleProblemError
from .profile import BundleProfile, CaseTag, assemble_bundle_profile

logger = logging.getLogger(__name__)


def _validate(lam: Fraction, c_M: Fraction, a: Fraction) -> None:
    if lam >= 0:
        raise BundleProblemError(f"lambda must be negative, got {lam}")
    if c_M <= 0:
        raise BundleProblemError(f"lambda < 0 needs c_M > 0, got {c_M}")
    if not 0 < a < -1 / lam:
        raise BundleProblemError(f"need 0 < a < -1/lambda = {-1 / lam}, got a = {a}")


def solve_lambda_negative(m: int, n: int, lam, c_M, a, tol: float = DEFAULT_TOL) -> list[tuple[float, float]]:
    """Every b in (a, -1/lambda) with n(n-1) H1/H2 = c_M, paired with c.

    Returns:
        (b, c) pairs sorted by b; empty when the scan finds no sign change
        (the scanned c_M range is logged)

    Raises:
        BundleProblemError: If lambda >= 0, c_M <= 0 or a is outside (0, -1/lambda)
    """
    from projective.integrals import c_of_b
    from projective.solve import scan_b

    lam, c_M, a = Fraction(lam), Fraction(c_M), Fraction(a)
    _validate(lam, c_M, a)
    scan = scan_b(m, n, lam, a, c_M, tol, extension=False)
    if not scan.roots:
        logger.warning("lambda < 0 solve for c_M = %s, a = %s: %s", c_M, a, scan.describe())
    return [(b, float(c_of_b(m, n, lam, a, Fraction(b), extension=False))) for b in scan.roots]


def build_lambda_negative_profile(
    m: int, n: int, lam, c_M, a, b: float, tol: float = DEFAULT_TOL
) -> BundleProfile:
    """Exact LambdaNeg_Estar profile for a solved b.

    b is snapped to a rational b~ and c_M, c are recomputed exactly at b~, so
    P has an exact double root there. The requested c_M goes into the notes.
    """
    from projective.integrals import curvature_pair
    from projective.solve import snap_b

    lam, c_M, a = Fraction(lam), Fraction(c_M), Fraction(a)
    _validate(lam, c_M, a)
    b_snapped = snap_b(b, tol)
    exact_cM, exact_c = curvature_pair(m, n, lam, a, b_snapped, extension=False)
    notes = (
        f"b snapped to {b_snapped}; c_M = {float(exact_cM):.12g} exactly (requested {float(c_M):.12g})",
    )
    problem = BundleProblem(m, n, lam, exact_cM, exact_c, a)
    logger.info("lambda < 0 profile: b = %.10g, c = %.10g", float(b_snapped), float(exact_c))
    return assemble_bundle_profile(problem, CaseTag.LAMBDA_NEG_ESTAR, notes=notes, known_root=b_snapped)


def lambda_negative_profiles(m: int, n: int, lam, c_M, a, tol: float = DEFAULT_TOL) -> list[BundleProfile]:
    """One profile per root of the lambda < 0 solve."""
    roots = solve_lambda_negative(m, n, lam, c_M, a, tol)
    return [build_lambda_negative_profile(m, n, lam, c_M, a, b, tol) for b, _ in roots]
