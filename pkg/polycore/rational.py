"""Exact rational values: parsing, snapping and "p/q" formatting."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction

import mpmath

logger = logging.getLogger(__name__)

Rational = Fraction

# Floats handed to the library are snapped to the nearest fraction with at most
# this denominator.
DEFAULT_MAX_DENOMINATOR = 10**12


class PolynomialError(Exception):
    """Raised for invalid polynomial or rational input."""

    pass


@dataclass(frozen=True)
class Snap:
    """Record of an inexact input replaced by an exact rational."""

    name: str
    original: str
    value: Fraction

    def describe(self) -> str:
        return f"{self.name}: {self.original} snapped to {format_rational(self.value)}"


def parse_rational(text: str | int | float | Fraction, name: str = "value") -> tuple[Fraction, Snap | None]:
    """Parse a user supplied number into an exact rational.

    Accepts "p/q" strings, integers and decimal strings ("0.001" is read as
    exactly 1/1000). Floats are snapped with ``limit_denominator`` and the snap
    is returned so callers can record it.

    Args:
        text: The number to parse
        name: Parameter name used in error messages and snap records

    Returns:
        Tuple of (exact value, snap record or None when the input was exact)

    Raises:
        PolynomialError: If the text is not a finite number
    """
    if isinstance(text, Fraction):
        return text, None
    if isinstance(text, bool):
        raise PolynomialError(f"{name} must be a number, got {text!r}")
    if isinstance(text, int):
        return Fraction(text), None
    if isinstance(text, float):
        return snap_rational(text, name)

    raw = str(text).strip()
    if not raw:
        raise PolynomialError(f"{name} is empty")
    try:
        if "/" in raw:
            value = Fraction(raw)
        else:
            decimal = Decimal(raw)
            if not decimal.is_finite():
                raise PolynomialError(f"{name} must be finite, got {raw}")
            value = Fraction(decimal)
    except (ValueError, ZeroDivisionError, InvalidOperation):
        raise PolynomialError(f"{name} is not a rational number: {raw!r}")
    return value, None


def snap_rational(x: float, name: str = "value", max_denominator: int = DEFAULT_MAX_DENOMINATOR) -> tuple[Fraction, Snap]:
    """Snap a float to a nearby exact rational and record the snap."""
    if x != x or x in (float("inf"), float("-inf")):
        raise PolynomialError(f"{name} must be finite, got {x}")
    value = Fraction(x).limit_denominator(max_denominator)
    snap = Snap(name=name, original=repr(x), value=value)
    logger.debug(snap.describe())
    return value, snap


def format_rational(value: Fraction) -> str:
    """Format as "p/q" (or "p" for integers)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_exact(text: str) -> Fraction:
    """Parse the "p/q" form written by ``format_rational``."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError, TypeError):
        raise PolynomialError(f"not an exact rational: {text!r}")


def to_mpf(value: Fraction) -> mpmath.mpf:
    """Convert to an mpmath float at the current working precision."""
    return mpmath.mpf(value.numerator) / value.denominator
