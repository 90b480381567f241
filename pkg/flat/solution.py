"""t(phi) by quadrature, its inverse, and sampled potentials.

All quadrature runs in the gap variable s = phi - a. Near the double root
the weight x^(n-1)/F(x) behaves like h0/s^2 + h1/s; that part is integrated in
closed form and only the bounded remainder goes to QUADPACK.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from scipy import integrate, optimize

from polycore import PolyQ, to_mpf

from .profile import EndpointClass, FlatProblemError, FlatProfile, normalization_offset

logger = logging.getLogger(__name__)

QUAD_EPSREL = 1e-13
QUAD_EPSABS = 1e-15
QUAD_LIMIT = 200


def _quad(func, lo: float, hi: float) -> float:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, error = integrate.quad(func, lo, hi, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
    if caught and error > 1e-8 * (1 + abs(value)):
        raise FlatProblemError(
            f"quadrature on [{lo}, {hi}] did not converge (error estimate {error:.3g}): {caught[0].message}"
        )
    return value


class GapIntegrand:
    """The weight x^(n-1)/F(x) written in s = x - a."""

    def __init__(self, profile: FlatProfile):
        problem = profile.problem
        a = problem.a
        self.numerator = PolyQ.linear(1, a) ** (problem.n - 1)
        self.shifted = profile.shifted_F
        self.double_root = self.shifted.coefficient(0) == 0 and self.shifted.coefficient(1) == 0
        self._num = self.numerator.float_coefficients()
        self._fs = self.shifted.float_coefficients()
        if self.double_root:
            G = PolyQ(self.shifted.coefficients[2:])
            g0, g1 = G.coefficient(0), G.coefficient(1)
            self.h0 = a ** (problem.n - 1) / g0
            self.h1 = ((problem.n - 1) * a ** (problem.n - 2) * g0 - a ** (problem.n - 1) * g1) / g0**2
            self._g = G.float_coefficients()
            self._h0, self._h1 = float(self.h0), float(self.h1)

    def weight(self, s):
        num = np.polynomial.polynomial.polyval(s, self._num)
        if self.double_root:
            return num / (s * s * np.polynomial.polynomial.polyval(s, self._g))
        return num / np.polynomial.polynomial.polyval(s, self._fs)

    def _regular(self, s: float) -> float:
        h = np.polynomial.polynomial.polyval(s, self._num) / np.polynomial.polynomial.polyval(s, self._g)
        return (h - self._h0 - self._h1 * s) / (s * s)

    def _singular(self, s: float) -> float:
        return -self._h0 / s + self._h1 * np.log(s)

    def integral(self, lo: float, hi: float) -> float:
        """Integral of the weight over [lo, hi] in the gap variable."""
        if lo == hi:
            return 0.0
        if self.double_root:
            return self._singular(hi) - self._singular(lo) + _quad(self._regular, lo, hi)
        return _quad(self.weight, lo, hi)

    def F_values(self, s):
        """F(a + s), accurate for small s."""
        return np.polynomial.polynomial.polyval(s, self._fs)


def _gap(profile: FlatProfile, phi) -> float:
    if isinstance(phi, Fraction):
        return float(phi - profile.problem.a)
    return float(phi) - float(profile.problem.a)


def t_of_phi(profile: FlatProfile, phi, integrand: GapIntegrand | None = None) -> float:
    """t as a function of phi on (a, b).

    Raises:
        FlatProblemError: If phi lies outside (a, b) or the quadrature fails
    """
    s = _gap(profile, phi)
    s_max = None if profile.b is None else float(profile.b - profile.problem.a)
    if s <= 0 or (s_max is not None and s >= s_max):
        raise FlatProblemError(f"phi = {phi} is outside ({profile.problem.a}, {profile.b or 'inf'})")
    integrand = integrand or GapIntegrand(profile)
    return profile.t_normalization + integrand.integral(float(profile.phi0 - profile.problem.a), s)


class PhiInverter:
    """Invert t(phi) on sorted targets by marching from the reference point.

    Each step brackets the next target starting from the previous solution, so
    quadratures stay short.
    """

    def __init__(self, profile: FlatProfile, integrand: GapIntegrand | None = None):
        self.profile = profile
        self.integrand = integrand or GapIntegrand(profile)
        self.s0 = float(profile.phi0 - profile.problem.a)
        self.t0 = profile.t_normalization
        self.s_max = None if profile.b is None else float(profile.b - profile.problem.a)
        self.t_sup = 0.0 if profile.endpoint_class is EndpointClass.INFINITE_POINCARE else np.inf

    def gaps(self, targets) -> np.ndarray:
        """Gap values s = phi - a with t(a + s) = target for every target."""
        targets = np.asarray(targets, dtype=float)
        if targets.size and targets.max() >= self.t_sup:
            raise FlatProblemError(f"t = {targets.max()} is outside the t-range (sup {self.t_sup})")
        out = np.empty_like(targets)
        order = np.argsort(targets)
        above = [i for i in order if targets[i] >= self.t0]
        below = [i for i in order[::-1] if targets[i] < self.t0]

        s_cur, t_cur = self.s0, self.t0
        for i in above:
            s_cur = self._step_up(s_cur, t_cur, targets[i])
            t_cur = targets[i]
            out[i] = s_cur
        s_cur, t_cur = self.s0, self.t0
        for i in below:
            s_cur = self._step_down(s_cur, t_cur, targets[i])
            t_cur = targets[i]
            out[i] = s_cur
        return out

    def _solve(self, lo: float, t_lo: float, hi: float, target: float) -> float:
        integral = self.integrand.integral
        return optimize.brentq(
            lambda s: t_lo + integral(lo, s) - target,
            lo,
            hi,
            xtol=1e-300,
            rtol=4 * np.finfo(float).eps,
        )

    def _step_up(self, s: float, t: float, target: float) -> float:
        if target == t:
            return s
        lo, t_lo = s, t
        while True:
            if self.s_max is None:
                hi = 2 * lo + 1e-3
            else:
                hi = lo + (self.s_max - lo) / 2
                if hi == lo:
                    raise FlatProblemError(f"t = {target} is beyond the resolvable range near b")
            t_hi = t_lo + self.integrand.integral(lo, hi)
            if t_hi >= target:
                return self._solve(lo, t_lo, hi, target)
            lo, t_lo = hi, t_hi

    def _step_down(self, s: float, t: float, target: float) -> float:
        hi, t_hi = s, t
        while True:
            lo = hi / 2
            if lo == 0.0:
                raise FlatProblemError(f"t = {target} is beyond the resolvable range near a")
            t_lo = t_hi - self.integrand.integral(lo, hi)
            if t_lo <= target:
                return self._solve(lo, t_lo, hi, target)
            hi, t_hi = lo, t_lo


def phi_of_t(profile: FlatProfile, t: float) -> float:
    """Numeric inverse of t_of_phi."""
    s = PhiInverter(profile).gaps([t])[0]
    return float(profile.problem.a) + s


@dataclass
class PotentialTable:
    """Sampled potential: columns t, phi = u'(t), u (zero at the first node) and det g."""

    t: np.ndarray
    phi: np.ndarray
    u: np.ndarray
    det_g: np.ndarray
    gap: np.ndarray
    refinements: int = 0

    def rows(self):
        return zip(self.t, self.phi, self.u, self.det_g, strict=True)


def sample_potential(
    profile: FlatProfile,
    t_grid,
    tol: float = 1e-9,
    max_refinements: int = 4,
) -> PotentialTable:
    """Sample phi, u and det g on an increasing t grid.

    u is accumulated with cumulative Simpson and the grid is refined by
    inserting midpoints until u at the original nodes changes by less than
    ``tol`` relative.

    Raises:
        FlatProblemError: If the grid is not increasing or leaves the t-range
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise FlatProblemError("t grid must be a non-empty 1-d sequence")
    if t.size > 1 and np.any(np.diff(t) <= 0):
        raise FlatProblemError("t grid must be strictly increasing")

    inverter = PhiInverter(profile)
    gaps = inverter.gaps(t)
    a = float(profile.problem.a)

    u = _accumulate(t, a + gaps)
    fine_t, fine_gaps = t, gaps
    refinements = 0
    while t.size > 1 and refinements < max_refinements:
        midpoints = (fine_t[:-1] + fine_t[1:]) / 2
        mid_gaps = inverter.gaps(midpoints)
        merged_t = np.empty(fine_t.size + midpoints.size)
        merged_t[0::2], merged_t[1::2] = fine_t, midpoints
        merged_gaps = np.empty_like(merged_t)
        merged_gaps[0::2], merged_gaps[1::2] = fine_gaps, mid_gaps
        fine_t, fine_gaps = merged_t, merged_gaps
        refinements += 1
        refined = _accumulate(fine_t, a + fine_gaps)[:: 2**refinements]
        change = np.max(np.abs(refined - u)) / max(1.0, np.max(np.abs(refined)))
        u = refined
        logger.debug("potential refinement %d: relative change %.3g", refinements, change)
        if change < tol:
            break

    phi = a + gaps
    with np.errstate(over="ignore", invalid="ignore"):
        det_g = np.exp(-profile.problem.n * t + np.log(inverter.integrand.F_values(gaps)))
    return PotentialTable(t=t, phi=phi, u=u, det_g=det_g, gap=gaps, refinements=refinements)


def _accumulate(t: np.ndarray, phi: np.ndarray) -> np.ndarray:
    if t.size == 1:
        return np.zeros(1)
    return integrate.cumulative_simpson(phi, x=t, initial=0.0)


class PrecisePhiSampler:
    """phi(t) at extended precision for finite-difference checks.

    Targets are visited in sorted order; each is reached by Newton iteration on
    t(a + s) - target, starting from an Euler step off the previous point, with
    increments of t integrated by mpmath.
    """

    def __init__(self, profile: FlatProfile, dps: int = 30):
        self.profile = profile
        self.dps = dps
        self.inverter = PhiInverter(profile)
        with mpmath.workdps(dps):
            self._num = GapIntegrand(profile).numerator.mp_coefficients()
            self._fs = profile.shifted_F.mp_coefficients()
            self.s0 = to_mpf(profile.phi0 - profile.problem.a)
            self.t0 = normalization_offset(profile, dps)
            self.s_max = None if profile.b is None else to_mpf(profile.b - profile.problem.a)

    def _weight(self, s):
        num = mpmath.mpf(0)
        for c in reversed(self._num):
            num = num * s + c
        den = mpmath.mpf(0)
        for c in reversed(self._fs):
            den = den * s + c
        return num / den

    def _distance(self, s):
        return s if self.s_max is None else min(s, self.s_max - s)

    def _increment(self, s1, s2):
        if abs(s2 - s1) <= mpmath.mpf("1e-6") * self._distance(min(s1, s2)):
            mid = (s1 + s2) / 2
            return (s2 - s1) / 6 * (self._weight(s1) + 4 * self._weight(mid) + self._weight(s2))
        return mpmath.quad(self._weight, [s1, s2], method="gauss-legendre")

    def _float_guess(self, target: float):
        return mpmath.mpf(float(self.inverter.gaps([target])[0]))

    def _solve(self, s_cur, t_cur, target):
        if abs(target - t_cur) > mpmath.mpf("0.05"):
            guess = self._float_guess(float(target))
        else:
            guess = s_cur + (target - t_cur) / self._weight(s_cur)
            if guess <= 0 or (self.s_max is not None and guess >= self.s_max):
                guess = self._float_guess(float(target))
        t_guess = t_cur + self._increment(s_cur, guess)
        tolerance = mpmath.mpf(10) ** (8 - self.dps)
        for _ in range(12):
            step = (target - t_guess) / self._weight(guess)
            new = guess + step
            t_guess = t_guess + self._increment(guess, new)
            guess = new
            if abs(step) <= tolerance * self._distance(guess):
                return guess, t_guess
        raise FlatProblemError(f"Newton inversion at t = {target} did not converge")

    def phi_values(self, targets) -> list:
        """phi = u'(t) at each target, as mpmath numbers."""
        with mpmath.workdps(self.dps):
            values = [mpmath.mpf(float(x)) if not isinstance(x, mpmath.mpf) else x for x in targets]
            order = sorted(range(len(values)), key=lambda i: values[i])
            out: list = [None] * len(values)
            above = [i for i in order if values[i] >= self.t0]
            below = [i for i in reversed(order) if values[i] < self.t0]
            for chain in (above, below):
                s_cur, t_cur = self.s0, self.t0
                for i in chain:
                    s_cur, t_cur = self._solve(s_cur, t_cur, values[i])
                    out[i] = to_mpf(self.profile.problem.a) + s_cur
            return out
