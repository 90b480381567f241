"""The allowable curvature set for lambda > 0 and its supremum c0.

With P = P0 - c D, the profile stays positive on (a, infinity) exactly when
c < psi(tau) = P0(tau)/D(tau) there and P has a positive leading coefficient,
so c0 = inf psi over (a, infinity). The infimum is either attained at an
interior point b (c0 not allowed, P gets a double root at b), or approached
as tau -> a (c0 allowed and negative) or as tau -> infinity (c0 = 0).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from polycore import PolyQ, isolate_real_roots, positive_on

from .problem import BundleProblemError, p_components

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
# Width to which the double root b of a c0 profile is isolated.
DOUBLE_ROOT_WIDTH = Fraction(1, 10**40)
MAX_WIDENINGS = 200


class AllowableCase(str, Enum):
    IN_SET_ZERO = "InSet_Zero"
    IN_SET_NEGATIVE = "InSet_Negative"
    NOT_IN_SET = "NotInSet"


@dataclass(frozen=True)
class AllowableResult:
    """Supremum of the allowable set.

    ``c0`` is exact in the two in-set cases. In the NotInSet case it is
    psi(b) at a rational b within ``b_width`` of the true double root.
    """

    c0: Fraction
    case: AllowableCase
    b: Fraction | None
    tol: float
    bisection: tuple[Fraction, Fraction]
    b_width: Fraction = Fraction(0)

    def __float__(self) -> float:
        return float(self.c0)


def is_allowable(P0: PolyQ, D: PolyQ, c, a) -> bool:
    """P0 - c D > 0 on (a, infinity), decided by exact root counting."""
    return positive_on(P0 - D * Fraction(c), Fraction(a), None)


def psi(P0: PolyQ, D: PolyQ, tau) -> Fraction:
    return P0(tau) / D(tau)


def psi_at_zero_section(m: int, n: int, lam, c_M, a) -> Fraction:
    """lim psi(tau) as tau -> a+, which equals c_M/(1 + lambda a) + n(n-1)/a."""
    a = Fraction(a)
    return Fraction(c_M) / (1 + Fraction(lam) * a) + n * (n - 1) / a


def wronskian(P0: PolyQ, D: PolyQ) -> PolyQ:
    """P0' D - P0 D', whose roots are the critical points of psi."""
    return P0.derivative() * D - P0 * D.derivative()


def sup_allowable_c(m: int, n: int, lam, c_M, a, tol: float = DEFAULT_TOL) -> AllowableResult:
    """Find c0 = sup of the allowable curvature set for lambda > 0.

    Bisection on c with exact membership tests brackets c0 to ``tol``; the
    case is then settled exactly: the zero-section limit of psi when it is
    allowed, otherwise the interior minimum of psi found from the Wronskian.

    Args:
        m, n: Base dimension and fibre rank
        lam: Bundle curvature, must be positive
        c_M: Base scalar curvature
        a: Zero-section value of tau
        tol: Bisection tolerance

    Returns:
        AllowableResult with c0, the case and the double root b for NotInSet

    Raises:
        BundleProblemError: If lambda <= 0, a <= 0, tol <= 0, or no allowable
            c is found while widening the bracket
    """
    lam, c_M, a = Fraction(lam), Fraction(c_M), Fraction(a)
    if lam <= 0:
        raise BundleProblemError(f"sup_allowable_c needs lambda > 0, got {lam}")
    if a <= 0 or tol <= 0:
        raise BundleProblemError(f"sup_allowable_c needs a > 0 and tol > 0, got a={a}, tol={tol}")

    P0, D = p_components(m, n, lam, c_M, a)
    if is_allowable(P0, D, 0, a):
        logger.info("c0 = 0 is allowable for m=%d n=%d lambda=%s c_M=%s a=%s", m, n, lam, c_M, a)
        return AllowableResult(Fraction(0), AllowableCase.IN_SET_ZERO, None, tol, (Fraction(0), Fraction(0)))

    lo, hi = Fraction(-1), Fraction(0)
    widenings = 0
    while not is_allowable(P0, D, lo, a):
        hi = lo
        lo *= 2
        widenings += 1
        if widenings > MAX_WIDENINGS:
            raise BundleProblemError(f"no allowable c found down to {float(lo):.3g}")
    step_tol = Fraction(tol)
    while hi - lo > step_tol:
        mid = (lo + hi) / 2
        if is_allowable(P0, D, mid, a):
            lo = mid
        else:
            hi = mid
    logger.debug("c0 bracketed in [%.12g, %.12g]", float(lo), float(hi))

    limit = psi_at_zero_section(m, n, lam, c_M, a)
    if lo - step_tol <= limit <= hi + step_tol and is_allowable(P0, D, limit, a):
        logger.info("c0 = %s is allowable (zero-section limit of psi)", limit)
        return AllowableResult(limit, AllowableCase.IN_SET_NEGATIVE, None, tol, (lo, hi))

    b, width = _interior_minimum(P0, D, a)
    c0 = psi(P0, D, b)
    if not lo - 2 * step_tol <= c0 <= hi + 2 * step_tol:
        logger.warning(
            "interior minimum psi(%.10g) = %.10g lies outside the bisection bracket [%.10g, %.10g]",
            float(b), float(c0), float(lo), float(hi),
        )
    logger.info("c0 = %.10g is not allowable; double root at b = %.10g", float(c0), float(b))
    return AllowableResult(c0, AllowableCase.NOT_IN_SET, b, tol, (lo, hi), width)


def _interior_minimum(P0: PolyQ, D: PolyQ, a: Fraction) -> tuple[Fraction, Fraction]:
    """Critical point of psi on (a, infinity) with the smallest psi value."""
    critical = isolate_real_roots(wronskian(P0, D), a, None, width=DOUBLE_ROOT_WIDTH)
    if not critical:
        raise BundleProblemError("psi has no interior critical point, yet c0 is not allowable")
    best = None
    for root in critical:
        b, width = _snap(root.lo, root.hi, wronskian(P0, D))
        value = psi(P0, D, b)
        if best is None or value < best[0]:
            best = (value, b, width)
    return best[1], best[2]


def _snap(lo: Fraction, hi: Fraction, W: PolyQ) -> tuple[Fraction, Fraction]:
    mid = (lo + hi) / 2
    candidate = mid.limit_denominator(10**6)
    if lo < candidate <= hi and W(candidate) == 0:
        return candidate, Fraction(0)
    return mid, hi - lo
