"""Solved momentum profiles and their fibre potentials.

A profile is phi = P/Q on I = (a, b). The fibre coordinate nu = log r^2 and the
potential f(nu) follow from dnu = dtau/phi and df = tau dnu; both are
integrated here with mpmath so that tau can approach a double root of P.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction

import mpmath
import numpy as np

from polycore import PolyQ, RatFuncQ, isolate_real_roots, positive_on, to_mpf

from .allowable import DEFAULT_TOL, AllowableCase, AllowableResult, sup_allowable_c
from .problem import (
    BundleProblem,
    BundleProblemError,
    build_P,
    build_Q,
    check_curvature_identity,
    degree_gap,
    kappa_value,
)

logger = logging.getLogger(__name__)

ROOT_WIDTH = Fraction(1, 10**45)
# Two roots of P closer than this count as one double root.
DOUBLE_ROOT_SEPARATION = Fraction(1, 10**30)
GUARD_DIGITS = 15


class CaseTag(str, Enum):
    CASE_I_USTAR = "CaseI_Ustar"
    CASE_II_ESTAR_C0ZERO = "CaseII_Estar_c0zero"
    CASE_III_USTAR_C0NEG = "CaseIII_Ustar_c0neg"
    CASE_IV_ESTAR_DOUBLEROOT = "CaseIV_Estar_doubleroot"
    LAMBDA_NEG_ESTAR = "LambdaNeg_Estar"
    PROJECTIVE_EXTENSION = "Projective_Extension"


class TotalSpace(str, Enum):
    ESTAR = "Estar"
    USTAR = "Ustar"


class End(str, Enum):
    NEAR_A = "NearA"
    FAR_END = "FarEnd"


@dataclass(frozen=True)
class BundleProfile:
    """phi = P/Q on (a, b) with its case and the nu normalisation.

    ``b`` is None for I = (a, infinity). ``nu_offset`` is nu(tau0).
    """

    problem: BundleProblem
    Q: PolyQ
    P: PolyQ
    phi: RatFuncQ
    b: Fraction | None
    case_tag: CaseTag
    total_space: TotalSpace
    kappa_a: Fraction
    kappa_b: Fraction | None
    degree_gap: int
    tau0: Fraction
    nu_offset: float = 0.0
    b_width: Fraction = Fraction(0)
    allowable: AllowableResult | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def far_root(self) -> str:
        """'none', 'double' or 'simple': the kind of zero of phi at b."""
        if self.b is None:
            return "none"
        if self.case_tag is CaseTag.PROJECTIVE_EXTENSION:
            return "simple"
        return "double"

    @property
    def theta1(self) -> Fraction:
        """Leading coefficient ratio of P and Q; the growth rate tau ~ (r^2)^theta1 for gap 1."""
        return self.P.leading / self.Q.leading


def _reference_point(a: Fraction, b: Fraction | None) -> Fraction:
    if b is None or a + 1 < b:
        return a + 1
    return (a + b) / 2


def build_profile(
    problem: BundleProblem,
    tol: float = DEFAULT_TOL,
    allowable: AllowableResult | None = None,
    at_c0: bool = False,
) -> BundleProfile:
    """Construct the profile for the given problem and classify it.

    - lambda > 0: c is compared with c0 = sup of the allowable set. c < c0 gives
      case (i) on U*; c = c0 (within ``tol``, or ``at_c0``) gives case (ii),
      (iii) or (iv) and the profile is rebuilt at the exact c0.
    - lambda = 0: c < c_M gives case (i) on U*, c = c_M case (ii) on E*.
    - lambda < 0: P must already have a double root b in (a, -1/lambda), as
      produced by ``solve_lambda_negative``.

    Raises:
        BundleProblemError: If c exceeds the allowable range or positivity fails
    """
    lam = problem.lam
    if lam > 0:
        allowable = allowable or sup_allowable_c(problem.m, problem.n, lam, problem.c_M, problem.a, tol)
        c0 = allowable.c0
        if at_c0 or abs(problem.c - c0) <= Fraction(tol):
            problem = problem.with_c(c0)
            case = {
                AllowableCase.IN_SET_ZERO: CaseTag.CASE_II_ESTAR_C0ZERO,
                AllowableCase.IN_SET_NEGATIVE: CaseTag.CASE_III_USTAR_C0NEG,
                AllowableCase.NOT_IN_SET: CaseTag.CASE_IV_ESTAR_DOUBLEROOT,
            }[allowable.case]
        elif problem.c < c0:
            case = CaseTag.CASE_I_USTAR
        else:
            raise BundleProblemError(
                f"c = {problem.c} exceeds c0 = {float(c0):.10g}: no positive profile on (a, infinity)"
            )
    elif lam == 0:
        if problem.c == problem.c_M:
            case = CaseTag.CASE_II_ESTAR_C0ZERO
        elif problem.c < problem.c_M:
            case = CaseTag.CASE_I_USTAR
        else:
            raise BundleProblemError(f"lambda = 0 needs c <= c_M = {problem.c_M}, got c = {problem.c}")
    else:
        case = CaseTag.LAMBDA_NEG_ESTAR
    return assemble_bundle_profile(problem, case, allowable=allowable)


def assemble_bundle_profile(
    problem: BundleProblem,
    case: CaseTag,
    allowable: AllowableResult | None = None,
    P: PolyQ | None = None,
    notes: tuple[str, ...] = (),
    known_root: Fraction | None = None,
) -> BundleProfile:
    """Build P, find the domain and certify positivity for a tagged case.

    ``P`` may be supplied (a document read back from disk); the identity
    P'' = kappa Q is then what ties it to the problem. ``known_root`` is an
    exact root of P expected to be the right end b.
    """
    Q = build_Q(problem.m, problem.n, problem.lam)
    P = P if P is not None else build_P(problem)
    a = problem.a
    if P(a) != 0 or P.derivative()(a) != 0:
        raise BundleProblemError(f"P does not vanish to second order at a = {a}")
    if not check_curvature_identity(problem, P):
        raise BundleProblemError("P'' differs from kappa * Q")

    b: Fraction | None = None
    b_width = Fraction(0)
    if case in (CaseTag.CASE_I_USTAR, CaseTag.CASE_II_ESTAR_C0ZERO, CaseTag.CASE_III_USTAR_C0NEG):
        if not positive_on(P, a, None):
            raise BundleProblemError(f"P is not positive on ({a}, infinity) for {case.value}")
    else:
        upper = problem.tau_limit
        b, b_width, multiplicity = first_root(P, a, upper, known_root)
        if known_root is not None and b != known_root:
            raise BundleProblemError(
                f"P vanishes at {float(b):.10g} before the expected end b = {float(known_root):.10g}"
            )
        if case is CaseTag.PROJECTIVE_EXTENSION:
            if multiplicity != 1:
                raise BundleProblemError(f"phi has a multiple root at b = {float(b)}; no extension")
        elif multiplicity < 2:
            raise BundleProblemError(
                f"{case.value} needs a double root of P; the first root {float(b):.10g} is simple"
            )

    if not positive_on(Q, a, b):
        raise BundleProblemError("Q is not positive on the profile domain")

    gap = degree_gap(P, Q)
    if b is None and gap not in (1, 2):
        raise BundleProblemError(f"deg P - deg Q = {gap}; complete profiles need 1 or 2")
    total_space = total_space_of(case)
    kappa_b = None
    if b is not None and case is not CaseTag.PROJECTIVE_EXTENSION:
        kappa_b = kappa_value(problem, b)

    profile = BundleProfile(
        problem=problem,
        Q=Q,
        P=P,
        phi=RatFuncQ.build(P, Q),
        b=b,
        case_tag=case,
        total_space=total_space,
        kappa_a=kappa_value(problem, a),
        kappa_b=kappa_b,
        degree_gap=gap,
        tau0=_reference_point(a, b),
        b_width=b_width,
        allowable=allowable,
        notes=tuple(notes),
    )
    offset = nu_normalization(profile)
    logger.info(
        "bundle profile %s on (%s, %s), %s, kappa(a) = %s",
        case.value, a, "inf" if b is None else f"{float(b):.10g}", total_space.value, profile.kappa_a,
    )
    return replace(profile, nu_offset=float(offset))


def first_root(
    P: PolyQ, a: Fraction, upper: Fraction | None, known_root: Fraction | None = None
) -> tuple[Fraction, Fraction, int]:
    """First root of P in (a, upper) with its multiplicity.

    Two distinct roots closer than DOUBLE_ROOT_SEPARATION are reported as one
    double root, which is how a rationally rounded c0 shows up.

    Raises:
        BundleProblemError: If P has no root there
    """
    roots = isolate_real_roots(P, a, upper, width=ROOT_WIDTH)
    if upper is not None and P(upper) == 0:
        # the last interval then holds the root at upper itself
        roots = roots[:-1]
    if not roots:
        raise BundleProblemError(f"P has no root in ({a}, {upper if upper is not None else 'inf'})")
    first = roots[0]
    multiplicity = first.multiplicity
    if multiplicity == 1 and len(roots) > 1 and roots[1].hi - first.lo <= DOUBLE_ROOT_SEPARATION:
        multiplicity = 2
    if known_root is not None and first.lo < known_root <= first.hi and P(known_root) == 0:
        b = known_root
    else:
        b = snap_root(P, first.lo, first.hi)
    width = Fraction(0) if P(b) == 0 else first.width
    return b, width, multiplicity


def snap_root(P: PolyQ, lo: Fraction, hi: Fraction) -> Fraction:
    """An exact root in (lo, hi] when one has a small denominator, else the midpoint."""
    if P(hi) == 0:
        return hi
    mid = (lo + hi) / 2
    candidate = mid.limit_denominator(10**6)
    if lo < candidate <= hi and P(candidate) == 0:
        return candidate
    return mid


def nu_normalization(profile: BundleProfile, dps: int = 30) -> mpmath.mpf:
    """nu(tau0) under the far-end normalisation.

    - U* (phi ~ tau^2): nu -> 0 as tau -> infinity.
    - Gap 1 (phi ~ theta1 tau): nu - log(tau)/theta1 -> 0.
    - Simple root with phi'(b) = -1: nu + log(b - tau) -> 0.
    - Other profiles with finite b: nu(tau0) = 0.
    """
    with mpmath.workdps(dps):
        rf = _MpRational(profile)
        tau0 = to_mpf(profile.tau0)
        if profile.b is None and profile.degree_gap == 2:
            return -mpmath.quad(lambda x: 1 / rf.phi(x), [tau0, mpmath.inf])
        if profile.b is None:
            theta = to_mpf(profile.theta1)
            tail = mpmath.quad(lambda x: 1 / rf.phi(x) - 1 / (theta * x), [tau0, mpmath.inf])
            return mpmath.log(tau0) / theta - tail
        if profile.case_tag is CaseTag.PROJECTIVE_EXTENSION:
            b = to_mpf(profile.b)
            tail = mpmath.quad(lambda x: 1 / rf.phi(x) - 1 / (b - x), [tau0, b], method="gauss-legendre")
            return -mpmath.log(b - tau0) - tail
        return mpmath.mpf(0)


class _MpRational:
    def __init__(self, profile: BundleProfile):
        self.p = profile.P.mp_coefficients()
        self.q = profile.Q.mp_coefficients()
        self.P = profile.P
        self.Q = profile.Q

    def phi(self, x):
        return self.P.eval_mp(x, self.p) / self.Q.eval_mp(x, self.q)


@dataclass
class MomentumTable:
    """Sampled fibre data: tau, phi(tau), nu = log r^2 and the potential f (up to a constant)."""

    tau: np.ndarray
    phi: np.ndarray
    nu: np.ndarray
    f: np.ndarray

    def rows(self):
        return zip(self.tau, self.phi, self.nu, self.f, strict=True)


class MomentumSampler:
    """nu(tau) and f(tau) at extended precision.

    Points are visited outward from tau0 and each increment is a short
    mpmath quadrature, so tau may approach a root of P closely.
    """

    def __init__(self, profile: BundleProfile, dps: int = 30):
        self.profile = profile
        # guard digits for the cancellation in P close to its roots
        self.dps = dps + GUARD_DIGITS
        with mpmath.workdps(self.dps):
            self.rf = _MpRational(profile)
            self.tau0 = to_mpf(profile.tau0)
            self.a = to_mpf(profile.problem.a)
            self.b = None if profile.b is None else to_mpf(profile.b)
            self.nu0 = nu_normalization(profile, self.dps)

    def phi(self, tau):
        with mpmath.workdps(self.dps):
            return self.rf.phi(mpmath.mpf(tau))

    def _breakpoints(self, lo, hi) -> list:
        """Points between lo and hi, geometric in the distance to the nearer end."""
        if lo == hi:
            return [lo, hi]
        if max(lo, hi) <= self.tau0:
            anchor, sign = self.a, 1
        elif self.b is None:
            anchor, sign = mpmath.mpf(0), 1
        else:
            anchor, sign = self.b, -1
        d_lo, d_hi = sign * (lo - anchor), sign * (hi - anchor)
        ratio = max(d_lo, d_hi) / min(d_lo, d_hi)
        pieces = max(1, math.ceil(float(mpmath.log(ratio, 2))))
        step = (d_hi / d_lo) ** (mpmath.mpf(1) / pieces)
        points = [anchor + sign * d_lo * step**k for k in range(pieces)]
        return points + [hi]

    def _increments(self, lo, hi):
        points = self._breakpoints(lo, hi)
        nu = mpmath.quad(lambda x: 1 / self.rf.phi(x), points, method="gauss-legendre")
        f = mpmath.quad(lambda x: x / self.rf.phi(x), points, method="gauss-legendre")
        return nu, f

    def _chain(self, taus):
        """Accumulate nu and f along points ordered away from tau0."""
        nu_cur, f_cur, tau_cur = self.nu0, mpmath.mpf(0), self.tau0
        out = []
        for tau in taus:
            d_nu, d_f = self._increments(tau_cur, tau)
            nu_cur, f_cur, tau_cur = nu_cur + d_nu, f_cur + d_f, tau
            out.append((nu_cur, f_cur))
        return out

    def sample(self, taus) -> MomentumTable:
        """nu and f at each tau in (a, b); f vanishes at tau0."""
        a = self.profile.problem.a
        b = self.profile.b
        with mpmath.workdps(self.dps):
            values = [t if isinstance(t, mpmath.mpf) else to_mpf(Fraction(t)) for t in taus]
            for t in values:
                if t <= to_mpf(a) or (b is not None and t >= to_mpf(b)):
                    raise BundleProblemError(f"tau = {t} is outside the profile domain")
            order = sorted(range(len(values)), key=lambda i: values[i])
            above = [i for i in order if values[i] >= self.tau0]
            below = [i for i in reversed(order) if values[i] < self.tau0]
            nu = [None] * len(values)
            f = [None] * len(values)
            for chain in (above, below):
                for i, (nu_i, f_i) in zip(chain, self._chain([values[i] for i in chain]), strict=True):
                    nu[i], f[i] = nu_i, f_i
            phi = [self.rf.phi(t) for t in values]
            return MomentumTable(
                tau=np.array([float(t) for t in values]),
                phi=np.array([float(p) for p in phi]),
                nu=np.array([float(x) for x in nu]),
                f=np.array([float(x) for x in f]),
            )

    def end_points(self, end: End, gaps) -> list:
        """tau at distance ``gap`` from an end: a + g, b - g, or 1/g when b is infinite."""
        with mpmath.workdps(self.dps):
            if end is End.NEAR_A:
                base = to_mpf(self.profile.problem.a)
                return [base + mpmath.mpf(g) for g in gaps]
            if self.profile.b is None:
                return [1 / mpmath.mpf(g) for g in gaps]
            base = to_mpf(self.profile.b)
            return [base - mpmath.mpf(g) for g in gaps]

    def max_gap(self, end: End) -> float:
        """Largest gap that stays between the end and tau0."""
        a, b = self.profile.problem.a, self.profile.b
        if end is End.NEAR_A:
            return float(self.profile.tau0 - a) / 2
        if b is None:
            return 1 / (2 * float(self.profile.tau0))
        return float(b - self.profile.tau0) / 2

    def sample_window(self, end: End, window: tuple[float, float], points: int = 400) -> MomentumTable:
        """Sample so that nu covers ``window`` at the given end.

        A coarse geometric scan of gaps locates the window in nu; the fine pass
        then spaces gaps geometrically between the located ends.

        Raises:
            BundleProblemError: If the window is not reached
        """
        g_max = self.max_gap(end)
        coarse_gaps = np.geomspace(g_max, g_max * 1e-12, 150)
        coarse = self.sample(self.end_points(end, coarse_gaps))
        lo, hi = sorted(window)
        inside = (coarse.nu >= lo) & (coarse.nu <= hi)
        if not np.any(inside):
            raise BundleProblemError(
                f"nu window [{lo:.3g}, {hi:.3g}] not reached at {end.value}: nu spans "
                f"[{coarse.nu.min():.3g}, {coarse.nu.max():.3g}]"
            )
        idx = np.nonzero(inside)[0]
        first, last = max(idx[0] - 1, 0), min(idx[-1] + 1, len(coarse_gaps) - 1)
        fine_gaps = np.geomspace(coarse_gaps[first], coarse_gaps[last], points)
        table = self.sample(self.end_points(end, fine_gaps))
        keep = (table.nu >= lo) & (table.nu <= hi)
        logger.debug("window %s at %s: %d of %d samples inside", window, end.value, int(keep.sum()), points)
        return MomentumTable(table.tau[keep], table.phi[keep], table.nu[keep], table.f[keep])


def total_space_of(case: CaseTag) -> TotalSpace:
    if case in (CaseTag.CASE_I_USTAR, CaseTag.CASE_III_USTAR_C0NEG):
        return TotalSpace.USTAR
    return TotalSpace.ESTAR
