"""Cross-check of t(phi) quadrature against the first-order ODE dphi/dt = F(phi)/phi^(n-1)."""

from __future__ import annotations

import logging

import numpy as np
from scipy.integrate import solve_ivp

from flat import EndpointClass, FlatProfile, PhiInverter

from .settings import VerificationError

logger = logging.getLogger(__name__)

RTOL = 1e-12
ATOL = 1e-14
MAX_TRIMS = 3


def _rhs(profile: FlatProfile):
    """ds/dt in the gap variable s = phi - a."""
    a = float(profile.problem.a)
    n = profile.problem.n
    shifted = profile.shifted_F.float_coefficients()

    def rhs(_t, s):
        return np.polynomial.polynomial.polyval(s, shifted) / (a + s) ** (n - 1)

    return rhs


def ode_vs_quadrature(profile: FlatProfile, t_span: tuple[float, float], points: int = 200) -> float:
    """max |phi_ODE(t) - phi_quadrature(t)| over t_span.

    The ODE starts from the quadrature value at t_span[0] and is integrated
    with the Dormand-Prince RK45 pair. When the integrator fails near an
    endpoint the span is trimmed by 10% (up to three times) and a warning is
    logged.

    Raises:
        VerificationError: If the integrator still fails after trimming
    """
    t_start, t_end = float(t_span[0]), float(t_span[1])
    if t_start == t_end:
        return 0.0
    if t_end < t_start:
        raise VerificationError(f"t_span must be increasing, got {t_span}")

    inverter = PhiInverter(profile)
    rhs = _rhs(profile)
    for attempt in range(MAX_TRIMS + 1):
        grid = np.linspace(t_start, t_end, points)
        gaps = inverter.gaps(grid)
        solution = solve_ivp(rhs, (t_start, t_end), [gaps[0]], method="RK45", t_eval=grid, rtol=RTOL, atol=ATOL)
        if solution.success:
            gap = float(np.max(np.abs(solution.y[0] - gaps)))
            logger.info("ODE vs quadrature on [%.4g, %.4g]: %.3g", t_start, t_end, gap)
            return gap
        logger.warning(
            "RK45 failed on [%.4g, %.4g] (%s); trimming the span (attempt %d)",
            t_start, t_end, solution.message, attempt + 1,
        )
        t_end = t_start + 0.9 * (t_end - t_start)
    raise VerificationError(f"ODE integration failed on [{t_span[0]}, {t_span[1]}] after trimming")


def default_ode_span(profile: FlatProfile) -> tuple[float, float]:
    """[t0, t0 + 5] from the reference point, or [t0, t0/2] when sup t = 0."""
    t0 = profile.t_normalization
    if profile.endpoint_class is EndpointClass.INFINITE_POINCARE:
        return t0, t0 / 2
    return t0, t0 + 5.0
