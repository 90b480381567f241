"""Univariate polynomials and rational functions with exact rational coefficients."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
import sympy
from numpy.polynomial import polynomial as npoly

from .rational import PolynomialError, format_rational, to_mpf

_X = sympy.Symbol("x")


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    raise PolynomialError(f"coefficient must be exact, got {value!r}")


@dataclass(frozen=True)
class PolyQ:
    """Polynomial with exact coefficients, lowest degree first.

    Trailing zero coefficients are stripped on construction, so the zero
    polynomial has an empty coefficient tuple and degree -1.

    Example:
        >>> p = PolyQ.from_coefficients([3, -5, 1, 1])   # x^3 + x^2 - 5x + 3
        >>> p(Fraction(1))
        Fraction(0, 1)
    """

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = [_as_fraction(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def from_coefficients(cls, coefficients: Iterable) -> PolyQ:
        return cls(tuple(_as_fraction(c) for c in coefficients))

    @classmethod
    def constant(cls, value) -> PolyQ:
        return cls((_as_fraction(value),))

    @classmethod
    def monomial(cls, degree: int, coefficient=1) -> PolyQ:
        return cls((Fraction(0),) * degree + (_as_fraction(coefficient),))

    @classmethod
    def linear(cls, slope, intercept) -> PolyQ:
        """slope * x + intercept"""
        return cls((_as_fraction(intercept), _as_fraction(slope)))

    @classmethod
    def from_sympy(cls, poly: sympy.Poly) -> PolyQ:
        return cls(tuple(_as_fraction(c) for c in reversed(poly.all_coeffs())))

    def to_sympy(self) -> sympy.Poly:
        coeffs = [sympy.Rational(c.numerator, c.denominator) for c in reversed(self.coefficients)]
        return sympy.Poly(coeffs or [0], _X, domain=sympy.QQ)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, k: int) -> Fraction:
        return self.coefficients[k] if 0 <= k < len(self.coefficients) else Fraction(0)

    def __call__(self, x) -> Fraction:
        x = _as_fraction(x)
        total = Fraction(0)
        for c in reversed(self.coefficients):
            total = total * x + c
        return total

    def eval_float(self, x):
        """Evaluate at a float or numpy array."""
        return npoly.polyval(x, self.float_coefficients())

    def float_coefficients(self) -> np.ndarray:
        return np.array([float(c) for c in self.coefficients] or [0.0])

    def eval_mp(self, x: mpmath.mpf, coefficients: Sequence[mpmath.mpf] | None = None) -> mpmath.mpf:
        """Evaluate in mpmath at the current precision.

        Pass ``coefficients`` from ``mp_coefficients()`` when evaluating many
        times at the same precision.
        """
        coeffs = coefficients if coefficients is not None else self.mp_coefficients()
        total = mpmath.mpf(0)
        for c in reversed(coeffs):
            total = total * x + c
        return total

    def mp_coefficients(self) -> list[mpmath.mpf]:
        return [to_mpf(c) for c in self.coefficients]

    def derivative(self) -> PolyQ:
        return PolyQ(tuple(k * c for k, c in enumerate(self.coefficients) if k > 0))

    def antiderivative(self) -> PolyQ:
        """Antiderivative with zero constant term."""
        return PolyQ((Fraction(0),) + tuple(c / (k + 1) for k, c in enumerate(self.coefficients)))

    def integrate(self, lo, hi) -> Fraction:
        """Exact definite integral over [lo, hi]."""
        anti = self.antiderivative()
        return anti(hi) - anti(lo)

    def rescale(self, s) -> PolyQ:
        """The polynomial x -> p(s*x)."""
        s = _as_fraction(s)
        return PolyQ(tuple(c * s**k for k, c in enumerate(self.coefficients)))

    def compose_linear(self, slope, intercept) -> PolyQ:
        """The polynomial x -> p(slope*x + intercept)."""
        inner = PolyQ.linear(slope, intercept)
        result = PolyQ(())
        for c in reversed(self.coefficients):
            result = result * inner + PolyQ.constant(c)
        return result

    def monic(self) -> PolyQ:
        if self.is_zero():
            return self
        return self.scale(1 / self.leading)

    def scale(self, factor) -> PolyQ:
        factor = _as_fraction(factor)
        return PolyQ(tuple(c * factor for c in self.coefficients))

    def __add__(self, other: PolyQ) -> PolyQ:
        n = max(len(self.coefficients), len(other.coefficients))
        return PolyQ(tuple(self.coefficient(k) + other.coefficient(k) for k in range(n)))

    def __neg__(self) -> PolyQ:
        return self.scale(-1)

    def __sub__(self, other: PolyQ) -> PolyQ:
        return self + (-other)

    def __mul__(self, other) -> PolyQ:
        if not isinstance(other, PolyQ):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return PolyQ(())
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return PolyQ(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> PolyQ:
        result = PolyQ.constant(1)
        for _ in range(k):
            result = result * self
        return result

    def divmod(self, divisor: PolyQ) -> tuple[PolyQ, PolyQ]:
        """Exact long division: self = q * divisor + r with deg r < deg divisor."""
        if divisor.is_zero():
            raise PolynomialError("division by the zero polynomial")
        remainder = list(self.coefficients)
        quotient = [Fraction(0)] * max(len(remainder) - divisor.degree, 0)
        lead = divisor.leading
        for k in range(len(quotient) - 1, -1, -1):
            factor = remainder[k + divisor.degree] / lead
            quotient[k] = factor
            if factor:
                for j, d in enumerate(divisor.coefficients):
                    remainder[k + j] -= factor * d
        return PolyQ(tuple(quotient)), PolyQ(tuple(remainder[: divisor.degree]))

    def exact_div(self, divisor: PolyQ) -> PolyQ:
        quotient, remainder = self.divmod(divisor)
        if not remainder.is_zero():
            raise PolynomialError(f"{divisor} does not divide {self}")
        return quotient

    def gcd(self, other: PolyQ) -> PolyQ:
        return poly_gcd(self, other)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            power = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            terms.append(f"({format_rational(c)}){'*' if power else ''}{power}")
        return " + ".join(terms)


def poly_eval(p: PolyQ, x) -> Fraction:
    """Exact Horner evaluation."""
    return p(x)


def poly_derivative(p: PolyQ) -> PolyQ:
    return p.derivative()


def poly_antiderivative(p: PolyQ) -> PolyQ:
    return p.antiderivative()


def poly_gcd(p: PolyQ, q: PolyQ) -> PolyQ:
    """Monic greatest common divisor.

    Raises:
        PolynomialError: If both polynomials are zero
    """
    if p.is_zero() and q.is_zero():
        raise PolynomialError("gcd of two zero polynomials is undefined")
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    return PolyQ.from_sympy(p.to_sympy().gcd(q.to_sympy())).monic()


@dataclass(frozen=True)
class RatFuncQ:
    """Reduced quotient num/den with a monic denominator."""

    num: PolyQ
    den: PolyQ

    @classmethod
    def build(cls, num: PolyQ, den: PolyQ) -> RatFuncQ:
        if den.is_zero():
            raise PolynomialError("rational function with zero denominator")
        if num.is_zero():
            return cls(PolyQ(()), PolyQ.constant(1))
        g = poly_gcd(num, den)
        num, den = num.exact_div(g), den.exact_div(g)
        lead = den.leading
        return cls(num.scale(1 / lead), den.scale(1 / lead))

    def __call__(self, x) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise PolynomialError(f"pole at x = {x}")
        return self.num(x) / d

    def eval_float(self, x):
        return self.num.eval_float(x) / self.den.eval_float(x)

    def derivative(self) -> RatFuncQ:
        return RatFuncQ.build(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def equals(self, num: PolyQ, den: PolyQ) -> bool:
        """Cross-multiplied equality with an unreduced quotient."""
        return (self.num * den - num * self.den).is_zero()

    def __str__(self) -> str:
        return f"({self.num}) / ({self.den})"
