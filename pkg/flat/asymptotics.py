"""Expected expansions of the potential near the puncture and the far end.

Every model is a list of predicted leading terms plus the remainder basis a
least-squares fit absorbs. Basis functions are evaluated in x = log r^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .profile import EndpointClass, FlatProblem, FlatProfile, build_F


class BasisKind(str, Enum):
    ONE = "1"
    R2 = "r^2"
    LOG_R2 = "log r^2"
    R2_POWER = "(r^2)^p"
    LOG_NEG_LOG_R2 = "log(-log r^2)"
    LOG_LOG_R2 = "log(log r^2)"
    NEG_LOG_R2_POWER = "(-log r^2)^p"
    LOG_R2_POWER = "(log r^2)^p"
    LOG_NEG_LOG_R2_OVER_LOG_R2 = "log(-log r^2)/log r^2"
    LOG_LOG_R2_OVER_LOG_R2 = "log(log r^2)/log r^2"
    R_KAPPA = "r^(-2/kappa)"


class Location(str, Enum):
    PUNCTURE_ZERO = "PunctureZero"
    INFINITY_ALE = "InfinityALE"
    BOUNDARY_POINCARE = "BoundaryPoincare"
    INFINITY_INCOMPLETE = "InfinityIncomplete"
    INFINITY_POWER = "InfinityPower"
    INFINITY_DOUBLE_ROOT = "InfinityDoubleRoot"


class Spacing(str, Enum):
    LINEAR = "linear"
    GEOMETRIC = "geometric"


@dataclass(frozen=True)
class Basis:
    """One basis function of log r^2, with its exponent when it has one."""

    kind: BasisKind
    exponent: float | None = None

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        kind, p = self.kind, self.exponent
        if kind is BasisKind.ONE:
            return np.ones_like(x)
        if kind is BasisKind.R2:
            return np.exp(x)
        if kind is BasisKind.LOG_R2:
            return x
        if kind is BasisKind.R2_POWER:
            return np.exp(p * x)
        if kind is BasisKind.LOG_NEG_LOG_R2:
            return np.log(-x)
        if kind is BasisKind.LOG_LOG_R2:
            return np.log(x)
        if kind is BasisKind.NEG_LOG_R2_POWER:
            return (-x) ** p
        if kind is BasisKind.LOG_R2_POWER:
            return x**p
        if kind is BasisKind.LOG_NEG_LOG_R2_OVER_LOG_R2:
            return np.log(-x) / x
        if kind is BasisKind.LOG_LOG_R2_OVER_LOG_R2:
            return np.log(x) / x
        if kind is BasisKind.R_KAPPA:
            # exponent holds kappa
            return np.exp(-x / p)
        raise ValueError(f"unknown basis kind {kind}")

    @property
    def label(self) -> str:
        if self.exponent is None:
            return self.kind.value
        if self.kind is BasisKind.R_KAPPA:
            return f"r^(-2/{self.exponent:.6g})"
        return self.kind.value.replace("p", f"{self.exponent:.6g}")


@dataclass(frozen=True)
class Term:
    coefficient: float
    basis: Basis


@dataclass(frozen=True)
class AsymptoticModel:
    """Predicted expansion at one end of the profile.

    ``window`` is the default fitting window in x = log r^2 and
    ``tolerance`` the relative tolerance on each predicted coefficient.
    """

    location: Location
    terms: tuple[Term, ...]
    remainder: tuple[Basis, ...]
    remainder_order: str
    window: tuple[float, float]
    spacing: Spacing = Spacing.LINEAR
    tolerance: float = 0.01
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def basis(self) -> list[Basis]:
        return [term.basis for term in self.terms] + list(self.remainder)

    @property
    def predicted(self) -> list[float]:
        return [term.coefficient for term in self.terms]

    def evaluate(self, x: np.ndarray, coefficients) -> np.ndarray:
        """Sum of coefficients times basis functions (leading terms then remainder)."""
        return sum(c * b.evaluate(x) for c, b in zip(coefficients, self.basis, strict=True))

    def describe(self) -> str:
        parts = [f"{t.coefficient:+.6g}*{t.basis.label}" for t in self.terms]
        return f"{self.location.value}: {' '.join(parts)} + O({self.remainder_order})"


PUNCTURE_WINDOW = (-1.0e5, -1.0e2)
POINCARE_WINDOW = (-1.0e-1, -1.0e-5)
ALE_WINDOW = (math.log(1.0e2), math.log(1.0e4))


def pmy_model(a: float, log_coefficient: float, window=PUNCTURE_WINDOW) -> AsymptoticModel:
    """a log r^2 + log_coefficient * log(-log r^2) + O((log r^2)^-1)."""
    return AsymptoticModel(
        location=Location.PUNCTURE_ZERO,
        terms=(
            Term(a, Basis(BasisKind.LOG_R2)),
            Term(log_coefficient, Basis(BasisKind.LOG_NEG_LOG_R2)),
        ),
        remainder=(
            Basis(BasisKind.ONE),
            Basis(BasisKind.LOG_R2_POWER, -1.0),
            Basis(BasisKind.LOG_NEG_LOG_R2_OVER_LOG_R2),
        ),
        remainder_order="(log r^2)^-1",
        window=window,
        spacing=Spacing.GEOMETRIC,
    )


def poincare_model(coefficient: float, location: Location = Location.BOUNDARY_POINCARE) -> AsymptoticModel:
    """coefficient * log(-log r^2) + O(log r^2) as log r^2 -> 0-."""
    return AsymptoticModel(
        location=location,
        terms=(Term(coefficient, Basis(BasisKind.LOG_NEG_LOG_R2)),),
        remainder=(
            Basis(BasisKind.ONE),
            Basis(BasisKind.LOG_R2),
            Basis(BasisKind.LOG_R2_POWER, 2.0),
        ),
        remainder_order="log r^2",
        window=POINCARE_WINDOW,
        spacing=Spacing.GEOMETRIC,
    )


def ale_model(problem: FlatProblem, exponent_variant: int | None = None) -> AsymptoticModel:
    """Far-field expansion of the c = 0 profile.

    n = 2: r^2 + 2a log r^2 + a^2/(2 r^2). n >= 3: r^2 with corrections in
    (r^2)^(2-n) and (r^2)^(1-n). ``exponent_variant`` replaces the 2-n
    exponent to test an alternative reading of the first correction.
    """
    n, a = problem.n, float(problem.a)
    if n == 2:
        terms = (
            Term(1.0, Basis(BasisKind.R2)),
            Term(2 * a, Basis(BasisKind.LOG_R2)),
            Term(a**2 / 2, Basis(BasisKind.R2_POWER, -1.0)),
        )
        remainder = (
            Basis(BasisKind.ONE),
            Basis(BasisKind.R2_POWER, -2.0),
            Basis(BasisKind.R2_POWER, -3.0),
        )
        order = "r^-4"
    else:
        first = 2 - n if exponent_variant is None else exponent_variant
        terms = (
            Term(1.0, Basis(BasisKind.R2)),
            Term(-n * a ** (n - 1) / ((n - 1) * (n - 2)), Basis(BasisKind.R2_POWER, float(first))),
            Term(a**n / n, Basis(BasisKind.R2_POWER, float(1 - n))),
        )
        remainder = (
            Basis(BasisKind.ONE),
            Basis(BasisKind.R2_POWER, float(3 - 2 * n)),
            Basis(BasisKind.R2_POWER, float(2 - 2 * n)),
        )
        order = f"(r^2)^{3 - 2 * n}"
    return AsymptoticModel(
        location=Location.INFINITY_ALE,
        terms=terms,
        remainder=remainder,
        remainder_order=order,
        window=ALE_WINDOW,
    )


def incomplete_model(b: float, kappa: float) -> AsymptoticModel:
    """b log r^2 + kappa r^(-2/kappa) as r -> infinity when phi -> b."""
    # r^(-2/kappa) below 1e-3 of the leading term, above float resolution of b - phi
    window = (7.0 * kappa, 20.0 * kappa)
    return AsymptoticModel(
        location=Location.INFINITY_INCOMPLETE,
        terms=(
            Term(b, Basis(BasisKind.LOG_R2)),
            Term(kappa, Basis(BasisKind.R_KAPPA, kappa)),
        ),
        remainder=(Basis(BasisKind.ONE), Basis(BasisKind.R2_POWER, -2.0 / kappa)),
        remainder_order="r^(-4/kappa)",
        window=window,
    )


def puncture_coefficient(problem: FlatProblem) -> float:
    """-2a/(n(n-1) - ac), the log(-log r^2) coefficient at the puncture."""
    return float(-2 * problem.a / (problem.curvature_constant - problem.a * problem.c))


def expected_asymptotics(target: FlatProblem | FlatProfile) -> list[AsymptoticModel]:
    """Puncture model followed by the far-end model for the sign of c."""
    profile = target if isinstance(target, FlatProfile) else build_F(target)
    problem = profile.problem
    models = [pmy_model(float(problem.a), puncture_coefficient(problem))]
    if profile.endpoint_class is EndpointClass.INFINITE_LOG_GROWTH:
        models.append(ale_model(problem))
    elif profile.endpoint_class is EndpointClass.INFINITE_POINCARE:
        n = problem.n
        models.append(poincare_model(-n * (n + 1) / float(-problem.c)))
    else:
        models.append(incomplete_model(float(profile.b), float(profile.kappa)))
    return models
