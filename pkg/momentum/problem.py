"""Momentum construction over a cscK base.

The fibre potential is handled through its moment profile phi(tau) = P(tau)/Q(tau)
with Q(tau) = (1 + lambda tau)^m tau^(n-1). Constant scalar curvature c is the
linear ODE P'' = kappa Q with

    kappa(tau) = c_M / (1 + lambda tau) + n(n-1)/tau - c

and completeness at the zero section forces P(a) = P'(a) = 0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from polycore import PolyQ, RatFuncQ

logger = logging.getLogger(__name__)


class BundleProblemError(Exception):
    """Raised when bundle parameters are invalid or no positive profile exists."""

    pass


@dataclass(frozen=True)
class BundleProblem:
    """Base dimension m, fibre rank n, bundle curvature lambda, base curvature c_M,
    target curvature c and the zero-section value a of tau."""

    m: int
    n: int
    lam: Fraction
    c_M: Fraction
    c: Fraction
    a: Fraction

    def __post_init__(self):
        for name in ("lam", "c_M", "c", "a"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.m < 1:
            raise BundleProblemError(f"m must be at least 1, got {self.m}")
        if self.n < 2:
            raise BundleProblemError(f"n must be at least 2, got {self.n}")
        if self.a == 0:
            raise BundleProblemError(
                "a = 0 gives P = tau^n (1 + A(tau)), which extends across the zero section; "
                "the punctured construction needs a > 0"
            )
        if self.a < 0:
            raise BundleProblemError(f"a must be positive, got {self.a}")
        if self.lam < 0 and self.a >= -1 / self.lam:
            raise BundleProblemError(
                f"lambda < 0 requires a < -1/lambda = {-1 / self.lam}, got a = {self.a}"
            )

    @property
    def curvature_constant(self) -> int:
        """n(n-1)"""
        return self.n * (self.n - 1)

    @property
    def tau_limit(self) -> Fraction | None:
        """-1/lambda for lambda < 0, where 1 + lambda tau vanishes."""
        return -1 / self.lam if self.lam < 0 else None

    def with_c(self, c: Fraction) -> BundleProblem:
        return BundleProblem(self.m, self.n, self.lam, self.c_M, Fraction(c), self.a)

    def with_c_M(self, c_M: Fraction) -> BundleProblem:
        return BundleProblem(self.m, self.n, self.lam, Fraction(c_M), self.c, self.a)


def build_Q(m: int, n: int, lam) -> PolyQ:
    """Q(tau) = (1 + lambda tau)^m tau^(n-1), expanded."""
    if m < 1 or n < 2:
        raise BundleProblemError(f"build_Q needs m >= 1 and n >= 2, got m={m}, n={n}")
    return PolyQ.linear(Fraction(lam), 1) ** m * PolyQ.monomial(n - 1)


def kappa_parts(m: int, n: int, lam) -> tuple[PolyQ, PolyQ, PolyQ]:
    """Q/(1 + lambda tau), Q/tau and Q as polynomials.

    kappa * Q = c_M * first + n(n-1) * second - c * third.
    """
    lam = Fraction(lam)
    Q = build_Q(m, n, lam)
    over_line = PolyQ.linear(lam, 1) ** (m - 1) * PolyQ.monomial(n - 1)
    over_tau = PolyQ.linear(lam, 1) ** m * PolyQ.monomial(n - 2)
    return over_line, over_tau, Q


def double_integral(G: PolyQ, a) -> PolyQ:
    """The polynomial tau -> integral from a to tau of (tau - x) G(x) dx.

    It is the unique second antiderivative of G vanishing to second order at a.
    """
    a = Fraction(a)
    first = G.antiderivative()
    first = first - PolyQ.constant(first(a))
    second = first.antiderivative()
    return second - PolyQ.constant(second(a))


def p_components(m: int, n: int, lam, c_M, a) -> tuple[PolyQ, PolyQ]:
    """Split P = P0 - c * D by its dependence on the target curvature.

    P0 solves the equation with c = 0 and D is the double integral of Q, so
    D > 0 on (a, infinity). P > 0 is equivalent to c < P0/D there.
    """
    over_line, over_tau, Q = kappa_parts(m, n, lam)
    N = n * (n - 1)
    P0 = double_integral(over_line * Fraction(c_M) + over_tau * N, a)
    D = double_integral(Q, a)
    return P0, D


def build_P(problem: BundleProblem) -> PolyQ:
    """P(tau) = integral from a to tau of (tau - x) kappa(x) Q(x) dx, exactly.

    Raises:
        BundleProblemError: If the double root at a is missing (never expected)
    """
    P0, D = p_components(problem.m, problem.n, problem.lam, problem.c_M, problem.a)
    P = P0 - D * problem.c
    if P(problem.a) != 0 or P.derivative()(problem.a) != 0:
        raise BundleProblemError(f"P does not vanish to second order at a = {problem.a}")
    logger.debug("P for %s: degree %d", problem, P.degree)
    return P


def kappa_times_Q(problem: BundleProblem) -> PolyQ:
    over_line, over_tau, Q = kappa_parts(problem.m, problem.n, problem.lam)
    return over_line * problem.c_M + over_tau * problem.curvature_constant - Q * problem.c


def kappa(problem: BundleProblem) -> RatFuncQ:
    """kappa(tau) as a reduced rational function."""
    return RatFuncQ.build(kappa_times_Q(problem), build_Q(problem.m, problem.n, problem.lam))


def kappa_value(problem: BundleProblem, tau) -> Fraction:
    """Exact c_M/(1 + lambda tau) + n(n-1)/tau - c."""
    tau = Fraction(tau)
    return problem.c_M / (1 + problem.lam * tau) + problem.curvature_constant / tau - problem.c


def kappa_derivative(problem: BundleProblem, tau, order: int) -> Fraction:
    """Exact k-th derivative of kappa at tau, k >= 1."""
    if order < 1:
        return kappa_value(problem, tau)
    tau = Fraction(tau)
    k = order
    sign = (-1) ** k
    return sign * math.factorial(k) * (
        problem.c_M * problem.lam**k / (1 + problem.lam * tau) ** (k + 1)
        + problem.curvature_constant / tau ** (k + 1)
    )


def check_curvature_identity(problem: BundleProblem, P: PolyQ) -> bool:
    """P'' equals kappa * Q as polynomials."""
    return (P.derivative().derivative() - kappa_times_Q(problem)).is_zero()


def zero_section_factor(m: int, n: int, lam, c_M, c) -> PolyQ:
    """A(tau) with P = tau^n (1 + A(tau)) for the a = 0 data.

    With a = 0 the profile extends smoothly across the zero section; this is
    the reason BundleProblem rejects a = 0.
    """
    over_line, over_tau, Q = kappa_parts(m, n, lam)
    N = n * (n - 1)
    G = over_line * Fraction(c_M) + over_tau * N - Q * Fraction(c)
    P = double_integral(G, 0)
    quotient = P.exact_div(PolyQ.monomial(n))
    return quotient - PolyQ.constant(1)


def degree_gap(P: PolyQ, Q: PolyQ) -> int:
    """deg P - deg Q"""
    return P.degree - Q.degree
