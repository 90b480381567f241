"""Radial length integrals toward each end of a profile.

The length to an end is probed along a geometric sequence of cut-offs. The
increments of L between consecutive cut-offs decide the outcome: constant or
growing increments mean the end is at infinite distance, geometric decay
means finite distance. Where the increments are constant, L is fitted to
A + C * depth with depth = -log(cut-off) to report the log rate C.

Flat integrand: sqrt(x^(n-1)/F(x)). Bundle integrand: 1/sqrt(phi(tau)). Both
omit the factor 1/2 of the geodesic length, so near a double root at a the
log rate is sqrt(a^(n-1) * 2/F''(a)) or sqrt(2/kappa(a)).
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy import integrate

from flat import FlatProfile
from momentum import BundleProfile, End
from polycore import PolyQ

from .settings import VerificationError

logger = logging.getLogger(__name__)

STEPS = 10
DECADE = 10.0
DIVERGENCE_RATIO = 0.9
# The log-rate fit uses cut-offs from the fourth one on.
FIT_START = 3


@dataclass
class CompletenessResult:
    """Outcome of a length probe toward one end.

    ``data`` holds (cut-off, L) pairs; the cut-off is the distance to the
    end point in the profile variable, or the far value itself for an
    unbounded end.
    """

    end: End
    divergent: bool
    log_rate: float | None = None
    residual: float | None = None
    limit: float | None = None
    ratios: list[float] = field(default_factory=list)
    data: list[tuple[float, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "end": self.end.value,
            "divergent": self.divergent,
            "log_rate": self.log_rate,
            "residual": self.residual,
            "limit": self.limit,
        }


def _log_quad(func, lo: float, hi: float) -> float:
    """Integral of func over [lo, hi] (0 < lo < hi) in the variable y = log x."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, _ = integrate.quad(lambda y: func(math.exp(y)) * math.exp(y), math.log(lo), math.log(hi), limit=200)
    return value


class _Probe:
    """Integrand in a variable g > 0 that goes to 0 (or infinity) at the end."""

    def __init__(self, integrand, reference: float, toward_zero: bool):
        self.integrand = integrand
        self.reference = reference
        self.toward_zero = toward_zero

    def cutoffs(self) -> list[float]:
        if self.toward_zero:
            return [self.reference / DECADE ** (k + 1) for k in range(STEPS)]
        return [self.reference * DECADE ** (k + 1) for k in range(STEPS)]

    def increment(self, g1: float, g2: float) -> float:
        lo, hi = min(g1, g2), max(g1, g2)
        return _log_quad(self.integrand, lo, hi)

    def depth(self, g: float) -> float:
        return -math.log(g) if self.toward_zero else math.log(g)


def _evaluate(probe: _Probe, end: End) -> CompletenessResult:
    cutoffs = probe.cutoffs()
    previous = probe.reference
    total = 0.0
    increments, data = [], []
    for g in cutoffs:
        d = probe.increment(previous, g)
        if not math.isfinite(d):
            raise VerificationError(f"length integrand is not finite near cut-off {g:.3g}")
        total += d
        increments.append(d)
        data.append((g, total))
        previous = g

    ratios = [increments[k + 1] / increments[k] for k in range(len(increments) - 1) if increments[k] > 0]
    tail = ratios[-4:]
    if not tail:
        raise VerificationError("length increments vanish; cannot classify the end")
    median = float(np.median(tail))
    divergent = median >= DIVERGENCE_RATIO
    result = CompletenessResult(end=end, divergent=divergent, ratios=ratios, data=data)

    if divergent and abs(median - 1.0) < 1.0 - DIVERGENCE_RATIO:
        depth = np.array([probe.depth(g) for g, _ in data[FIT_START:]])
        lengths = np.array([L for _, L in data[FIT_START:]])
        A = np.column_stack([np.ones_like(depth), depth])
        (intercept, rate), *_ = np.linalg.lstsq(A, lengths, rcond=None)
        deviation = np.max(np.abs(A @ np.array([intercept, rate]) - lengths))
        span = max(abs(lengths[-1] - lengths[0]), np.finfo(float).tiny)
        result.log_rate = float(rate)
        result.residual = float(deviation / span)
    elif not divergent:
        L = [length for _, length in data]
        denominator = L[-1] - 2 * L[-2] + L[-3]
        result.limit = L[-1] if denominator == 0 else L[-1] - (L[-1] - L[-2]) ** 2 / denominator
    logger.info(
        "%s: divergent=%s, increment ratio %.4g, log rate %s",
        end.value, divergent, median, "n/a" if result.log_rate is None else f"{result.log_rate:.6g}",
    )
    return result


def _sqrt_ratio(num: np.ndarray, den: np.ndarray):
    def f(g: float) -> float:
        top = np.polynomial.polynomial.polyval(g, num)
        bottom = np.polynomial.polynomial.polyval(g, den)
        return math.sqrt(top / bottom)

    return f


def _flat_probe(profile: FlatProfile, end: End) -> _Probe:
    problem = profile.problem
    a = problem.a
    n = problem.n
    x_power = PolyQ.monomial(n - 1)
    if end is End.NEAR_A:
        num = x_power.compose_linear(1, a).float_coefficients()
        den = profile.shifted_F.float_coefficients()
        return _Probe(_sqrt_ratio(num, den), float(profile.phi0 - a), toward_zero=True)
    if profile.b is None:
        num = x_power.float_coefficients()
        den = profile.F.float_coefficients()
        return _Probe(_sqrt_ratio(num, den), float(profile.phi0), toward_zero=False)
    b = profile.b
    num = x_power.compose_linear(-1, b).float_coefficients()
    den = profile.F.compose_linear(-1, b).float_coefficients()
    return _Probe(_sqrt_ratio(num, den), float(b - profile.phi0), toward_zero=True)


def _bundle_probe(profile: BundleProfile, end: End) -> _Probe:
    P, Q = profile.P, profile.Q
    a = profile.problem.a
    if end is End.NEAR_A:
        num = Q.compose_linear(1, a).float_coefficients()
        den = P.compose_linear(1, a).float_coefficients()
        return _Probe(_sqrt_ratio(num, den), float(profile.tau0 - a), toward_zero=True)
    if profile.b is None:
        return _Probe(_sqrt_ratio(Q.float_coefficients(), P.float_coefficients()), float(profile.tau0), False)
    b: Fraction = profile.b
    num = Q.compose_linear(-1, b).float_coefficients()
    den = P.compose_linear(-1, b).float_coefficients()
    return _Probe(_sqrt_ratio(num, den), float(b - profile.tau0), toward_zero=True)


def completeness_probe(profile, end: End) -> CompletenessResult:
    """Probe the radial length toward ``end`` of a flat, bundle or projective profile.

    Raises:
        VerificationError: If the profile type is unknown or the integrand
            breaks down
    """
    base = getattr(profile, "base", profile)
    if isinstance(base, FlatProfile):
        return _evaluate(_flat_probe(base, end), end)
    if isinstance(base, BundleProfile):
        return _evaluate(_bundle_probe(base, end), end)
    raise VerificationError(f"cannot probe completeness of {type(profile).__name__}")


def flat_log_rate(profile: FlatProfile) -> float:
    """sqrt(a^(n-1) * 2/F''(a)), the expected near-a log rate of a flat profile."""
    a = profile.problem.a
    second = profile.F.derivative().derivative()(a)
    return math.sqrt(float(a ** (profile.problem.n - 1) * 2 / second))


def bundle_log_rate(profile: BundleProfile) -> float | None:
    """sqrt(2/kappa(a)) when kappa(a) > 0."""
    if profile.kappa_a <= 0:
        return None
    return math.sqrt(float(2 / profile.kappa_a))
