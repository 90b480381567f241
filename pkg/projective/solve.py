"""Solving cM_of_b(b) = c_M for b by scanning and bracketing.

Each scan point is evaluated exactly (the float grid point is converted to
a Fraction), so sign changes are decided without rounding; brentq then
refines every bracket.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .integrals import ProjectiveError, cM_limit, cM_of_b

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
SCAN_POINTS = 400
# Points clustered geometrically toward each end of the scan interval.
END_POINTS = 120
MAX_GROWTH = 80
LIMIT_MARGIN = 0.01


@dataclass(frozen=True)
class ScanResult:
    """Roots of cM_of_b(b) - c_M in ``interval`` with the range of values the scan saw."""

    roots: list[float]
    interval: tuple[float, float]
    value_range: tuple[float, float]
    brackets: int

    def describe(self) -> str:
        lo, hi = self.interval
        vmin, vmax = self.value_range
        return (
            f"scanned b in ({lo:.6g}, {hi:.6g}): c_M(b) ranged over [{vmin:.6g}, {vmax:.6g}], "
            f"{len(self.roots)} root(s)"
        )


def scan_grid(lo: float, hi: float, points: int = SCAN_POINTS, end_points: int = END_POINTS) -> np.ndarray:
    """Interior points of (lo, hi): a uniform grid plus geometric clusters at both ends."""
    span = hi - lo
    fractions = np.geomspace(1e-9, 0.5, end_points)
    interior = np.linspace(0.0, 1.0, points)[1:-1]
    s = np.unique(np.concatenate([fractions, 1.0 - fractions, interior]))
    s = s[(s > 0.0) & (s < 1.0)]
    grid = lo + span * s
    return np.unique(grid[(grid > lo) & (grid < hi)])


def find_sign_changes(
    func: Callable[[float], float], grid: np.ndarray, tol: float
) -> tuple[list[float], list[float]]:
    """Roots of func bracketed by consecutive grid points, and the sampled values.

    Exact zeros on the grid count as roots.
    """
    values = [func(float(x)) for x in grid]
    roots: list[float] = []
    for k, (x, v) in enumerate(zip(grid, values, strict=True)):
        if v == 0:
            roots.append(float(x))
            continue
        if k + 1 < len(grid) and values[k + 1] != 0 and (v < 0) != (values[k + 1] < 0):
            root = brentq(func, float(x), float(grid[k + 1]), xtol=tol, rtol=4 * np.finfo(float).eps)
            roots.append(float(root))
    return sorted(roots), values


def _upper_bound(m: int, n: int, lam: Fraction, a: Fraction, c_M: Fraction) -> Fraction:
    """Grow B from 2a until cM_of_b(B) is within 1% of its limit and below c_M."""
    limit = cM_limit(m, n, lam)
    B = 2 * a
    for _ in range(MAX_GROWTH):
        value = cM_of_b(m, n, lam, a, B)
        if abs(value - limit) <= LIMIT_MARGIN * abs(limit) and value < c_M:
            return B
        B *= 2
    logger.warning("scan bound stopped growing at B = %.6g", float(B))
    return B


def scan_b(m: int, n: int, lam, a, c_M, tol: float = DEFAULT_TOL, extension: bool = True) -> ScanResult:
    """Scan for every b with cM_of_b(b) = c_M.

    For lambda < 0 the scan covers (a, -1/lambda). For lambda > 0 the upper
    bound grows geometrically from 2a; values of c_M at or below the limit
    m(m+2n-1) lambda have no root and return an empty result.

    Raises:
        ProjectiveError: If lambda = 0, a <= 0, tol <= 0, or a >= -1/lambda for lambda < 0
    """
    lam, a, c_M = Fraction(lam), Fraction(a), Fraction(c_M)
    if lam == 0:
        raise ProjectiveError("lambda = 0 has no H/L solve: H2 vanishes identically")
    if a <= 0 or tol <= 0:
        raise ProjectiveError(f"need a > 0 and tol > 0, got a = {a}, tol = {tol}")
    if lam < 0:
        upper = -1 / lam
        if a >= upper:
            raise ProjectiveError(f"lambda < 0 requires a < -1/lambda = {upper}, got a = {a}")
    else:
        if not extension:
            raise ProjectiveError("double-root closure at b needs lambda < 0")
        if c_M <= cM_limit(m, n, lam):
            logger.warning(
                "c_M = %s is outside the range (%s, infinity) for lambda > 0", c_M, cM_limit(m, n, lam)
            )
            limit = float(cM_limit(m, n, lam))
            return ScanResult([], (float(a), math.inf), (limit, limit), 0)
        upper = _upper_bound(m, n, lam, a, c_M)

    def residual(b: float) -> float:
        return float(cM_of_b(m, n, lam, a, Fraction(b), extension=extension) - c_M)

    grid = scan_grid(float(a), float(upper))
    roots, values = find_sign_changes(residual, grid, tol)
    finite = [v + float(c_M) for v in values if math.isfinite(v)]
    result = ScanResult(
        roots=roots,
        interval=(float(a), float(upper)),
        value_range=(min(finite), max(finite)) if finite else (math.nan, math.nan),
        brackets=len(roots),
    )
    if roots:
        logger.info("c_M = %s: b = %s", c_M, ", ".join(f"{b:.10g}" for b in roots))
    else:
        logger.warning("no b found: %s", result.describe())
    return result


def solve_b_given_cM(m: int, n: int, lam, a, c_M, tol: float = DEFAULT_TOL) -> list[float]:
    """All b with cM_of_b(b) = c_M for a projective extension, sorted ascending."""
    return scan_b(m, n, lam, a, c_M, tol).roots


@dataclass(frozen=True)
class CMRange:
    """Open interval (lower, upper) of admissible c_M; None means unbounded."""

    lower: Fraction | None
    upper: Fraction | None

    def __contains__(self, value) -> bool:
        value = Fraction(value)
        return (self.lower is None or value > self.lower) and (self.upper is None or value < self.upper)

    def describe(self) -> str:
        if self.lower is None and self.upper is None:
            return "all reals"
        lo = "-inf" if self.lower is None else str(self.lower)
        hi = "inf" if self.upper is None else str(self.upper)
        return f"({lo}, {hi})"


def cM_range(m: int, n: int, lam) -> CMRange:
    """Range of c_M admitting a projective extension.

    Raises:
        ProjectiveError: If lambda = 0
    """
    lam = Fraction(lam)
    if lam == 0:
        raise ProjectiveError("no c_M range is available for lambda = 0")
    if lam < 0:
        return CMRange(None, None)
    return CMRange(cM_limit(m, n, lam), None)


def snap_b(b: float, tol: float = DEFAULT_TOL) -> Fraction:
    """The closest rational to b with denominator at most 1/tol."""
    return Fraction(b).limit_denominator(max(1, math.ceil(1 / tol)))
