"""Least-squares fits of sampled potentials against asymptotic models."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from flat import AsymptoticModel, FlatProfile, Location, Spacing, ale_model, sample_potential
from momentum import BundleProfile, End, MomentumSampler

from .settings import VerificationError

logger = logging.getLogger(__name__)

MAX_CONDITION = 1e13
DEFAULT_POINTS = 400


@dataclass
class FitResult:
    """Fitted coefficients (leading terms first, then the remainder basis)."""

    model: AsymptoticModel
    fitted: list[float]
    residual_norm: float
    condition: float
    samples: int

    @property
    def leading(self) -> list[float]:
        return self.fitted[: len(self.model.terms)]

    @property
    def relative_errors(self) -> list[float]:
        errors = []
        for fitted, predicted in zip(self.leading, self.model.predicted, strict=True):
            scale = abs(predicted) if predicted != 0 else 1.0
            errors.append(abs(fitted - predicted) / scale)
        return errors

    @property
    def max_relative_error(self) -> float:
        return max(self.relative_errors, default=0.0)

    def passed(self, tolerance: float | None = None) -> bool:
        return self.max_relative_error <= (self.model.tolerance if tolerance is None else tolerance)

    def to_dict(self) -> dict:
        return {
            "model": self.model.describe(),
            "location": self.model.location.value,
            "basis": [b.label for b in self.model.basis],
            "predicted": self.model.predicted,
            "fitted": self.fitted,
            "relative_errors": self.relative_errors,
            "residual_norm": self.residual_norm,
            "condition": self.condition,
            "samples": self.samples,
        }


def model_grid(model: AsymptoticModel, window: tuple[float, float] | None = None, points: int = DEFAULT_POINTS):
    """Increasing sample points covering the window with the model's spacing."""
    lo, hi = sorted(window or model.window)
    if model.spacing is Spacing.LINEAR:
        return np.linspace(lo, hi, points)
    if hi < 0:
        return -np.geomspace(-lo, -hi, points)
    if lo <= 0:
        raise VerificationError(f"geometric window must not contain 0, got [{lo}, {hi}]")
    return np.geomspace(lo, hi, points)


def fit_samples(model: AsymptoticModel, x, y) -> FitResult:
    """Fit y against the model basis with column scaling.

    Raises:
        VerificationError: If the scaled basis is ill-conditioned on x (the
            message carries the condition estimate; widen the window)
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < len(model.basis):
        raise VerificationError(f"{x.size} samples cannot fit {len(model.basis)} basis functions")
    B = np.column_stack([basis.evaluate(x) for basis in model.basis])
    scale = np.linalg.norm(B, axis=0)
    scale[scale == 0] = 1.0
    scaled = B / scale
    condition = float(np.linalg.cond(scaled))
    if not math.isfinite(condition) or condition > MAX_CONDITION:
        raise VerificationError(
            f"basis for {model.location.value} is ill-conditioned on the window (condition {condition:.3g})"
        )
    coefficients, *_ = np.linalg.lstsq(scaled, y, rcond=None)
    coefficients = coefficients / scale
    residual = float(np.linalg.norm(B @ coefficients - y) / math.sqrt(x.size))
    result = FitResult(model, [float(c) for c in coefficients], residual, condition, int(x.size))
    logger.debug(
        "fit %s: leading %s (predicted %s), condition %.3g",
        model.location.value, result.leading, model.predicted, condition,
    )
    return result


def sample_profile(profile, model: AsymptoticModel, window=None, points: int = DEFAULT_POINTS, dps: int = 30):
    """(x, y) samples of the potential in log r^2 over the model window.

    Flat profiles give (t, u); bundle and projective profiles give (nu, f).
    """
    base = getattr(profile, "base", profile)
    if isinstance(base, FlatProfile):
        t = model_grid(model, window, points)
        table = sample_potential(base, t)
        return table.t, table.u
    if isinstance(base, BundleProfile):
        end = End.NEAR_A if model.location is Location.PUNCTURE_ZERO else End.FAR_END
        table = MomentumSampler(base, dps).sample_window(end, window or model.window, points)
        return table.nu, table.f
    raise VerificationError(f"cannot sample {type(profile).__name__}")


def fit_asymptotics(
    profile, model: AsymptoticModel, window=None, points: int = DEFAULT_POINTS, dps: int = 30
) -> FitResult:
    """Fit the sampled potential of a profile against ``model`` on ``window``."""
    x, y = sample_profile(profile, model, window, points, dps)
    result = fit_samples(model, x, y)
    logger.info(
        "%s fit: max relative error %.3g over %d samples",
        model.location.value, result.max_relative_error, result.samples,
    )
    return result


def synthetic_self_test(model: AsymptoticModel, remainder=None, points: int = DEFAULT_POINTS) -> float:
    """Fit data generated exactly from the model and return the largest coefficient error."""
    remainder = list(remainder) if remainder is not None else [0.3 / (k + 1) for k in range(len(model.remainder))]
    truth = np.array(model.predicted + remainder, dtype=float)
    x = model_grid(model, None, points)
    y = model.evaluate(x, truth)
    result = fit_samples(model, x, y)
    scale = np.maximum(np.abs(truth), 1.0)
    return float(np.max(np.abs(np.array(result.fitted) - truth) / scale))


@dataclass
class ExponentComparison:
    """Residuals of the n >= 3 far-field fit with the first correction (r^2)^(2-n) or (r^2)^(1-2n)."""

    residual_standard: float
    residual_alternative: float

    @property
    def preferred(self) -> str:
        return "2-n" if self.residual_standard <= self.residual_alternative else "1-2n"

    def to_dict(self) -> dict:
        return {
            "residual_2_minus_n": self.residual_standard,
            "residual_1_minus_2n": self.residual_alternative,
            "preferred": self.preferred,
        }


def compare_ale_exponents(profile: FlatProfile, points: int = DEFAULT_POINTS) -> ExponentComparison:
    """Fit both readings of the first far-field correction to the same samples."""
    n = profile.problem.n
    if n < 3:
        raise VerificationError("the exponent comparison applies to n >= 3")
    standard = ale_model(profile.problem)
    alternative = ale_model(profile.problem, exponent_variant=1 - 2 * n)
    x, y = sample_profile(profile, standard, None, points)
    comparison = ExponentComparison(
        residual_standard=fit_samples(standard, x, y).residual_norm,
        residual_alternative=fit_samples(alternative, x, y).residual_norm,
    )
    logger.info("far-field first correction exponent: %s fits better", comparison.preferred)
    return comparison
