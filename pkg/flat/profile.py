"""Rotationally symmetric profiles on punctured C^n and D^n.

With t = log r^2 and phi = u'(t), constant scalar curvature c reduces to
dphi/dt = F(phi) / phi^(n-1) with

    F(phi) = -c/(n(n+1)) phi^(n+1) + phi^n - c1 phi - c2

and completeness at the puncture forces the double root F(a) = F'(a) = 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction

import mpmath

from polycore import PolyQ, isolate_real_roots, positive_on, to_mpf

logger = logging.getLogger(__name__)

# Width to which an irrational right endpoint b is isolated.
B_WIDTH = Fraction(1, 10**40)
# Margin used when flagging kappa = 1.
KAPPA_MARGIN = 1e-3


class FlatProblemError(Exception):
    """Raised when flat profile parameters are invalid or a profile check fails."""

    pass


class ObstructionViolation(FlatProblemError):
    """Raised when a c > 0 profile has kappa = 1."""

    pass


class EndpointClass(str, Enum):
    INFINITE_LOG_GROWTH = "InfiniteLogGrowth"
    INFINITE_POINCARE = "InfinitePoincare"
    FINITE_SIMPLE_ROOT = "FiniteSimpleRoot"


@dataclass(frozen=True)
class FlatProblem:
    """Dimension n, puncture value a = lim phi at t -> -inf, and target curvature c."""

    n: int
    a: Fraction
    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "c", Fraction(self.c))
        if self.n < 2:
            raise FlatProblemError(f"n must be at least 2, got {self.n}")
        if self.a <= 0:
            raise FlatProblemError(f"a must be positive, got {self.a}")
        if self.c > 0 and self.a * self.c >= self.n * (self.n - 1):
            raise FlatProblemError(
                f"c > 0 requires a*c < n(n-1) = {self.n * (self.n - 1)}, got a*c = {self.a * self.c}"
            )

    @property
    def curvature_constant(self) -> int:
        """n(n-1)"""
        return self.n * (self.n - 1)


@dataclass(frozen=True)
class FlatProfile:
    """Solved profile: F, its constants, the right end b of the phi-domain and kappa.

    ``b`` is None when the phi-domain is unbounded. ``t_normalization`` is
    t(phi0), where t is normalised at the far end of the domain.
    """

    problem: FlatProblem
    F: PolyQ
    c1: Fraction
    c2: Fraction
    b: Fraction | None
    endpoint_class: EndpointClass
    kappa: Fraction | None
    phi0: Fraction
    t_normalization: float
    b_width: Fraction = Fraction(0)

    @property
    def shifted_F(self) -> PolyQ:
        """F(a + s) as a polynomial in s."""
        return self.F.compose_linear(1, self.problem.a)

    def contains(self, phi: float) -> bool:
        a = float(self.problem.a)
        return phi > a and (self.b is None or phi < float(self.b))


def completeness_constants(problem: FlatProblem) -> tuple[Fraction, Fraction]:
    """c1 and c2 making a a double root of F."""
    n, a, c = problem.n, problem.a, problem.c
    c1 = n * a ** (n - 1) - (c / n) * a**n
    c2 = (1 - n) * a**n + c / (n + 1) * a ** (n + 1)
    return c1, c2


def f_polynomial(problem: FlatProblem) -> PolyQ:
    n, c = problem.n, problem.c
    c1, c2 = completeness_constants(problem)
    return (
        PolyQ.monomial(n + 1, -c / (n * (n + 1)))
        + PolyQ.monomial(n)
        + PolyQ.linear(-c1, -c2)
    )


def build_F(problem: FlatProblem) -> FlatProfile:
    """Build F and classify the profile by the sign of c.

    Raises:
        FlatProblemError: If the double root at a or positivity on (a, b) fails
    """
    F = f_polynomial(problem)
    a = problem.a
    c1, c2 = completeness_constants(problem)
    profile = assemble_profile(problem, F, c1=c1, c2=c2)
    if not positive_on(F, a, profile.b):
        raise FlatProblemError("F is not positive on (a, b)")
    logger.info(
        "flat profile n=%d a=%s c=%s: %s, b=%s",
        problem.n, a, problem.c, profile.endpoint_class.value, profile.b,
    )
    return profile


def assemble_profile(
    problem: FlatProblem,
    F: PolyQ,
    c1: Fraction | None = None,
    c2: Fraction | None = None,
    dps: int = 30,
) -> FlatProfile:
    """Derive b, kappa and the t normalisation from a given F.

    Used both for freshly built profiles and for F read back from a document,
    so nothing here assumes F came from ``f_polynomial``.

    Raises:
        FlatProblemError: If F is constant or lacks the double root at a
    """
    a = problem.a
    if F.degree < 2:
        raise FlatProblemError(f"F must have degree at least 2, got {F}")
    if F(a) != 0 or F.derivative()(a) != 0:
        raise FlatProblemError(f"F does not have a double root at a = {a}")
    roots = isolate_real_roots(F, a, None, width=B_WIDTH)
    b: Fraction | None = None
    b_width = Fraction(0)
    kappa = None
    if roots:
        first = roots[0]
        b, b_width = _snap_root(F, first.lo, first.hi)
        if first.multiplicity != 1:
            logger.warning("right endpoint %s has multiplicity %d", float(b), first.multiplicity)
        slope = F.derivative()(b)
        if slope != 0:
            kappa = -(b ** (problem.n - 1)) / slope
        endpoint = EndpointClass.FINITE_SIMPLE_ROOT
    elif F.degree > problem.n:
        endpoint = EndpointClass.INFINITE_POINCARE
    else:
        endpoint = EndpointClass.INFINITE_LOG_GROWTH

    if b is None or a + 1 < b:
        phi0 = a + 1
    else:
        phi0 = (a + b) / 2

    if c1 is None:
        c1 = -F.coefficient(1)
    if c2 is None:
        c2 = -F.coefficient(0)

    profile = FlatProfile(
        problem=problem,
        F=F,
        c1=c1,
        c2=c2,
        b=b,
        endpoint_class=endpoint,
        kappa=kappa,
        phi0=phi0,
        t_normalization=0.0,
        b_width=b_width,
    )
    offset = normalization_offset(profile, dps)
    return replace(profile, t_normalization=float(offset))


def _snap_root(F: PolyQ, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Return an exact root when a small-denominator rational hits it."""
    mid = (lo + hi) / 2
    candidate = mid.limit_denominator(10**6)
    if lo < candidate <= hi and F(candidate) == 0:
        return candidate, Fraction(0)
    return mid, hi - lo


def normalization_offset(profile: FlatProfile, dps: int = 30) -> mpmath.mpf:
    """t(phi0) under the far-end normalisation, at ``dps`` digits.

    - Poincare end (c < 0): t -> 0 as phi -> infinity.
    - Log growth (c = 0): t - log(phi) -> 0 as phi -> infinity.
    - Simple root (c > 0): t + kappa log(b - phi) -> 0 as phi -> b.
    """
    n = profile.problem.n
    with mpmath.workdps(dps):
        coeffs = profile.F.mp_coefficients()
        phi0 = to_mpf(profile.phi0)

        def weight(x):
            return x ** (n - 1) / profile.F.eval_mp(x, coeffs)

        if profile.endpoint_class is EndpointClass.INFINITE_POINCARE:
            value = -mpmath.quad(weight, [phi0, mpmath.inf])
        elif profile.endpoint_class is EndpointClass.INFINITE_LOG_GROWTH:
            value = mpmath.log(phi0) - mpmath.quad(lambda x: weight(x) - 1 / x, [phi0, mpmath.inf])
        else:
            if profile.kappa is None:
                raise FlatProblemError("simple-root profile without kappa")
            kappa = to_mpf(profile.kappa)
            # integrate to the lower end of the isolating interval: F > 0 there
            b = to_mpf(profile.b - profile.b_width / 2)
            value = -kappa * mpmath.log(b - phi0) - mpmath.quad(
                lambda x: weight(x) - kappa / (b - x), [phi0, b], method="gauss-legendre"
            )
        return +value


def check_no_extension(profile: FlatProfile) -> Fraction:
    """Return kappa for a c > 0 profile, flagging kappa = 1.

    The metric would extend across CP^(n-1) at infinity only when kappa = 1.

    Raises:
        FlatProblemError: If the profile does not have c > 0
        ObstructionViolation: If kappa is within KAPPA_MARGIN of 1
    """
    if profile.problem.c <= 0 or profile.kappa is None:
        raise FlatProblemError("check_no_extension needs a c > 0 profile")
    if abs(float(profile.kappa) - 1) <= KAPPA_MARGIN:
        raise ObstructionViolation(f"kappa = {float(profile.kappa)} is 1 for {profile.problem}")
    return profile.kappa


def unit_puncture_problem(problem: FlatProblem) -> FlatProblem:
    """Problem with a = 1 related by phi -> a*phi, c -> a*c."""
    return FlatProblem(problem.n, Fraction(1), problem.a * problem.c)


def rescaled_F(profile: FlatProfile) -> PolyQ:
    """F(a*phi), which equals a^n times F of the a = 1 problem."""
    return profile.F.rescale(profile.problem.a)
