"""Scalar curvature recomputed by finite differences from sampled profiles.

Flat profiles: u' = phi(t) is sampled at extended precision and the
curvature is assembled from v = n t - (n-1) log u' - log u'' as

    c(t) = (n-1) v'/u' + v''/u''.

Bundle profiles: phi(tau) is sampled and (Q phi)'' is differenced, giving

    c(tau) = c_M/(1 + lambda tau) + n(n-1)/tau - (Q phi)''/Q.

Neither route reads a symbolic derivative of the solved profile.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from flat import EndpointClass, FlatProfile, PrecisePhiSampler
from momentum import BundleProblem, BundleProfile, build_Q
from polycore import PolyQ, to_mpf

from .settings import OracleSettings, VerificationError

logger = logging.getLogger(__name__)

FLAT_STEP = 1e-3
BUNDLE_STEP = 1e-4
# Below this the h/2 error is rounding, not truncation, and the ratio says nothing.
RICHARDSON_FLOOR = 1e-11
STENCIL_CLEARANCE = 5


@dataclass
class CurvatureCheck:
    """Curvature residuals on a grid at steps h and h/2.

    ``ratio`` is max|error(h)| / max|error(h/2)|, about 4 for a second-order
    stencil; None when the h/2 error sits at the rounding floor.
    """

    grid: np.ndarray
    curvature: np.ndarray
    residual: float
    residual_half: float
    ratio: float | None


def _ratio(residual: float, residual_half: float) -> float | None:
    if residual_half < RICHARDSON_FLOOR:
        return None
    return residual / residual_half


def flat_curvature_from_samples(n: int, samples: dict[int, mpmath.mpf], h: mpmath.mpf) -> mpmath.mpf:
    """c(t) from phi at t + k h, k = -2..2."""
    p = samples
    u1 = p[0]
    u2 = (p[1] - p[-1]) / (2 * h)
    u3 = (p[1] - 2 * p[0] + p[-1]) / h**2
    u4 = (p[2] - 2 * p[1] + 2 * p[-1] - p[-2]) / (2 * h**3)
    dv = n - (n - 1) * u2 / u1 - u3 / u2
    ddv = -(n - 1) * (u3 * u1 - u2**2) / u1**2 - (u4 * u2 - u3**2) / u2**2
    return (n - 1) * dv / u1 + ddv / u2


def default_flat_grid(profile: FlatProfile, points: int) -> np.ndarray:
    """[t0 - 3, t0 + 3] around the reference point, or [t0 - 3, t0/2] when sup t = 0."""
    t0 = profile.t_normalization
    if profile.endpoint_class is EndpointClass.INFINITE_POINCARE:
        return np.linspace(t0 - 3.0, t0 / 2, points)
    return np.linspace(t0 - 3.0, t0 + 3.0, points)


def _flat_steps(profile: FlatProfile, grid: np.ndarray) -> np.ndarray:
    if profile.endpoint_class is EndpointClass.INFINITE_POINCARE:
        return FLAT_STEP * np.minimum(1.0, np.abs(grid))
    return np.full_like(grid, FLAT_STEP)


def _flat_values(profile: FlatProfile, grid: np.ndarray, steps: np.ndarray, sampler: PrecisePhiSampler):
    n = profile.problem.n
    offsets = (-2, -1, 0, 1, 2)
    with mpmath.workdps(sampler.dps):
        targets = []
        for t, h in zip(grid, steps, strict=True):
            center, step = mpmath.mpf(float(t)), mpmath.mpf(float(h))
            targets.extend(center + k * step for k in offsets)
        phis = sampler.phi_values(targets)
        values = []
        for i, h in enumerate(steps):
            block = dict(zip(offsets, phis[5 * i : 5 * i + 5], strict=True))
            values.append(float(flat_curvature_from_samples(n, block, mpmath.mpf(float(h)))))
    return np.array(values)


def curvature_check_flat(
    profile: FlatProfile, grid=None, settings: OracleSettings | None = None
) -> CurvatureCheck:
    """Finite-difference curvature of a flat profile at steps h and h/2.

    Raises:
        VerificationError: If the stencil leaves the t-range
    """
    settings = settings or OracleSettings()
    grid = default_flat_grid(profile, settings.curvature_grid) if grid is None else np.asarray(grid, float)
    steps = _flat_steps(profile, grid)
    if profile.endpoint_class is EndpointClass.INFINITE_POINCARE and np.any(
        grid + STENCIL_CLEARANCE * steps >= 0.0
    ):
        raise VerificationError("curvature grid is too close to sup t = 0 for the stencil")
    sampler = PrecisePhiSampler(profile, dps=settings.precision_digits)
    c = float(profile.problem.c)
    values = _flat_values(profile, grid, steps, sampler)
    values_half = _flat_values(profile, grid, steps / 2, sampler)
    residual = float(np.max(np.abs(values - c)))
    residual_half = float(np.max(np.abs(values_half - c)))
    logger.info("flat curvature residual %.3g (h/2: %.3g) on %d points", residual, residual_half, grid.size)
    return CurvatureCheck(grid, values, residual, residual_half, _ratio(residual, residual_half))


def curvature_residual_flat(profile: FlatProfile, grid=None, settings: OracleSettings | None = None) -> float:
    """max |c(t) - c| over the grid."""
    return curvature_check_flat(profile, grid, settings).residual


def bundle_curvature_values(
    problem: BundleProblem, P: PolyQ, grid, h: float, dps: int = 30
) -> np.ndarray:
    """c(tau) from phi = P/Q sampled at tau, tau +- h.

    Q is rebuilt from (m, n, lambda) so that a corrupted P shows up as a
    curvature error.
    """
    Q = build_Q(problem.m, problem.n, problem.lam)
    with mpmath.workdps(dps):
        pc, qc = P.mp_coefficients(), Q.mp_coefficients()
        step = mpmath.mpf(h)
        c_M, lam = to_mpf(problem.c_M), to_mpf(problem.lam)
        N = problem.curvature_constant

        def q_phi(x):
            q = Q.eval_mp(x, qc)
            phi = P.eval_mp(x, pc) / q
            return q * phi

        out = []
        for tau in grid:
            x = mpmath.mpf(float(tau))
            second = (q_phi(x + step) - 2 * q_phi(x) + q_phi(x - step)) / step**2
            value = c_M / (1 + lam * x) + N / x - second / Q.eval_mp(x, qc)
            out.append(float(value))
    return np.array(out)


def default_bundle_grid(a: Fraction, b: Fraction | None, points: int) -> tuple[np.ndarray, float]:
    """Interior grid of (a, b) and the step h; (a, a + 10 max(a, 1)) when b is infinite."""
    a_f = float(a)
    if b is None:
        span = 10.0 * max(a_f, 1.0)
        h = BUNDLE_STEP * a_f
    else:
        span = float(b - a)
        h = BUNDLE_STEP * span
    margin = max(1e-2 * span, STENCIL_CLEARANCE * h)
    hi = a_f + span if b is None else float(b)
    return np.linspace(a_f + margin, hi - margin, points), h


def curvature_check_raw(
    problem: BundleProblem, P: PolyQ, b: Fraction | None, grid=None, settings: OracleSettings | None = None
) -> CurvatureCheck:
    """Curvature residual for bundle data given only (problem, P) and the domain end."""
    settings = settings or OracleSettings()
    default_grid, h = default_bundle_grid(problem.a, b, settings.curvature_grid)
    grid = default_grid if grid is None else np.asarray(grid, float)
    lo = float(problem.a) + STENCIL_CLEARANCE * h
    if grid.min() <= lo or (b is not None and grid.max() >= float(b) - STENCIL_CLEARANCE * h):
        raise VerificationError("curvature grid is too close to the ends of the profile domain")
    c = float(problem.c)
    dps = settings.precision_digits
    values = bundle_curvature_values(problem, P, grid, h, dps)
    values_half = bundle_curvature_values(problem, P, grid, h / 2, dps)
    residual = float(np.max(np.abs(values - c)))
    residual_half = float(np.max(np.abs(values_half - c)))
    logger.info("bundle curvature residual %.3g (h/2: %.3g) on %d points", residual, residual_half, grid.size)
    return CurvatureCheck(grid, values, residual, residual_half, _ratio(residual, residual_half))


def curvature_check_bundle(
    profile: BundleProfile, grid=None, settings: OracleSettings | None = None
) -> CurvatureCheck:
    return curvature_check_raw(profile.problem, profile.P, profile.b, grid, settings)


def curvature_residual_bundle(profile: BundleProfile, grid=None, settings: OracleSettings | None = None) -> float:
    """max |c(tau) - c| over the grid."""
    return curvature_check_bundle(profile, grid, settings).residual
