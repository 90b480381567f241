"""Exact H and L integrals over [a, b] and the curvature constants they determine.

With Q(x) = (1 + lambda x)^m x^(n-1) the five moments

    A0 = int Q/(1+lambda x)   A1 = int x Q/(1+lambda x)   B0 = int Q/x
    C0 = int Q                C1 = int x Q

are integrals of polynomials, so every quantity here is an exact Fraction
for rational inputs. P'(b) = int kappa Q and P(b) = b P'(b) - int x kappa Q
are linear in (c_M, c); prescribing them gives two linear equations whose
determinant is H2.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from polycore import PolyQ

logger = logging.getLogger(__name__)


class ProjectiveError(Exception):
    """Raised for degenerate H/L data, failed solves and failed extension checks."""

    pass


@dataclass(frozen=True)
class Moments:
    A0: Fraction
    A1: Fraction
    B0: Fraction
    C0: Fraction
    C1: Fraction
    Qb: Fraction


@dataclass(frozen=True)
class HLValues:
    """H1 = B0 C1 - C0^2, H2 = A1 C0 - A0 C1, H3 = A1 B0 - A0 C0,
    L1 = Q(b)(C1 - b C0), L2 = Q(b)(A1 - b A0)."""

    H1: Fraction
    H2: Fraction
    H3: Fraction
    L1: Fraction
    L2: Fraction


def _validate(m: int, n: int, lam: Fraction, a: Fraction, b: Fraction) -> None:
    if m < 1 or n < 2:
        raise ProjectiveError(f"need m >= 1 and n >= 2, got m={m}, n={n}")
    if a <= 0:
        raise ProjectiveError(f"a must be positive, got {a}")
    if b < a:
        raise ProjectiveError(f"b = {b} must not be below a = {a}")
    if lam < 0 and b >= -1 / lam:
        raise ProjectiveError(f"lambda < 0 requires b < -1/lambda = {-1 / lam}, got b = {b}")


def integrands(m: int, n: int, lam) -> tuple[PolyQ, PolyQ, PolyQ, PolyQ, PolyQ]:
    """Q/(1+lambda x), x Q/(1+lambda x), Q/x, Q, x Q as polynomials."""
    lam = Fraction(lam)
    line = PolyQ.linear(lam, 1)
    x = PolyQ.monomial(1)
    over_line = line ** (m - 1) * PolyQ.monomial(n - 1)
    Q = over_line * line
    over_x = line**m * PolyQ.monomial(n - 2)
    return over_line, over_line * x, over_x, Q, Q * x


def moments(m: int, n: int, lam, a, b) -> Moments:
    lam, a, b = Fraction(lam), Fraction(a), Fraction(b)
    _validate(m, n, lam, a, b)
    over_line, x_over_line, over_x, Q, xQ = integrands(m, n, lam)
    return Moments(
        A0=over_line.integrate(a, b),
        A1=x_over_line.integrate(a, b),
        B0=over_x.integrate(a, b),
        C0=Q.integrate(a, b),
        C1=xQ.integrate(a, b),
        Qb=Q(b),
    )


def hl_values(m: int, n: int, lam, a, b) -> HLValues:
    """H1, H2, H3, L1, L2 for the interval [a, b], exactly.

    b = a gives all zeros. For lambda < 0 and a < b < -1/lambda the three H
    values are positive; for lambda > 0, H2 is negative.

    Raises:
        ProjectiveError: If b < a, a <= 0, or lambda < 0 and b >= -1/lambda
    """
    b = Fraction(b)
    mo = moments(m, n, lam, a, b)
    return HLValues(
        H1=mo.B0 * mo.C1 - mo.C0**2,
        H2=mo.A1 * mo.C0 - mo.A0 * mo.C1,
        H3=mo.A1 * mo.B0 - mo.A0 * mo.C0,
        L1=mo.Qb * (mo.C1 - b * mo.C0),
        L2=mo.Qb * (mo.A1 - b * mo.A0),
    )


def _nonzero_H2(hl: HLValues, a, b) -> Fraction:
    if hl.H2 == 0:
        raise ProjectiveError(f"H2 vanishes on [{a}, {b}]; c_M and c are undetermined")
    return hl.H2


def cM_of_b(m: int, n: int, lam, a, b, extension: bool = True) -> Fraction:
    """Base curvature for which the profile closes at b.

    With ``extension`` (phi(b) = 0, phi'(b) = -1): (n(n-1) H1 + L1) / H2.
    Without (a double root at b): n(n-1) H1 / H2.
    """
    hl = hl_values(m, n, lam, a, b)
    H2 = _nonzero_H2(hl, a, b)
    N = n * (n - 1)
    return (N * hl.H1 + (hl.L1 if extension else 0)) / H2


def c_of_b(m: int, n: int, lam, a, b, extension: bool = True) -> Fraction:
    """Target curvature paired with cM_of_b: (n(n-1) H3 + L2)/H2, or n(n-1) H3/H2."""
    hl = hl_values(m, n, lam, a, b)
    H2 = _nonzero_H2(hl, a, b)
    N = n * (n - 1)
    return (N * hl.H3 + (hl.L2 if extension else 0)) / H2


def curvature_pair(m: int, n: int, lam, a, b, extension: bool = True) -> tuple[Fraction, Fraction]:
    """(c_M, c) from one evaluation of the H/L values."""
    hl = hl_values(m, n, lam, a, b)
    H2 = _nonzero_H2(hl, a, b)
    N = n * (n - 1)
    if extension:
        return (N * hl.H1 + hl.L1) / H2, (N * hl.H3 + hl.L2) / H2
    return N * hl.H1 / H2, N * hl.H3 / H2


def h_ratio(m: int, n: int, lam, a, b) -> Fraction:
    """H(a, b) = H1/H2."""
    hl = hl_values(m, n, lam, a, b)
    return hl.H1 / _nonzero_H2(hl, a, b)


def cM_limit(m: int, n: int, lam) -> Fraction:
    """m(m+2n-1) lambda, the limit of cM_of_b as b -> infinity for lambda > 0."""
    return m * (m + 2 * n - 1) * Fraction(lam)


def range_gap(m: int, n: int, lam, a, b) -> Fraction:
    """K(b) = n(n-1) H1 + L1 - m(m+2n-1) lambda H2.

    Since H2 < 0 for lambda > 0, K(b) < 0 is equivalent to
    cM_of_b(b) > m(m+2n-1) lambda.
    """
    hl = hl_values(m, n, lam, a, b)
    N = n * (n - 1)
    return N * hl.H1 + hl.L1 - cM_limit(m, n, lam) * hl.H2
