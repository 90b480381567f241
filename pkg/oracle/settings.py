"""Oracle thresholds and grid sizes, read from the environment."""

from __future__ import annotations

import os


class VerificationError(Exception):
    """Raised when an oracle check cannot be carried out on the given data."""

    pass


def _env_float(name: str, default: float, value: float | None = None) -> float:
    if value is not None:
        return value
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return float(raw)
    except ValueError as e:
        raise VerificationError(f"{name} = {raw!r} is not a number") from e


def _env_int(name: str, default: int, value: int | None = None) -> int:
    if value is not None:
        return value
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise VerificationError(f"{name} = {raw!r} is not an integer") from e


class OracleSettings:
    """Thresholds for the verification suite.

    Each value comes from the constructor argument, then from its CSCK_*
    environment variable, then from the built-in default.
    """

    def __init__(
        self,
        curvature_threshold: float | None = None,
        ode_threshold: float | None = None,
        fit_threshold: float | None = None,
        degenerate_fit_threshold: float | None = None,
        completeness_threshold: float | None = None,
        curvature_grid: int | None = None,
        precision_digits: int | None = None,
        solver_tol: float | None = None,
    ):
        self.curvature_threshold = _env_float("CSCK_CURVATURE_THRESHOLD", 1e-5, curvature_threshold)
        self.ode_threshold = _env_float("CSCK_ODE_THRESHOLD", 1e-7, ode_threshold)
        self.fit_threshold = _env_float("CSCK_FIT_THRESHOLD", 0.01, fit_threshold)
        self.degenerate_fit_threshold = _env_float(
            "CSCK_DEGENERATE_FIT_THRESHOLD", 0.02, degenerate_fit_threshold
        )
        self.completeness_threshold = _env_float("CSCK_COMPLETENESS_THRESHOLD", 1e-3, completeness_threshold)
        self.curvature_grid = _env_int("CSCK_CURVATURE_GRID", 400, curvature_grid)
        self.precision_digits = _env_int("CSCK_PRECISION_DIGITS", 30, precision_digits)
        self.solver_tol = _env_float("CSCK_SOLVER_TOL", 1e-8, solver_tol)

        for name in ("curvature_threshold", "ode_threshold", "fit_threshold", "degenerate_fit_threshold",
                     "completeness_threshold", "solver_tol"):
            if getattr(self, name) <= 0:
                raise VerificationError(f"{name} must be positive, got {getattr(self, name)}")
        if self.curvature_grid < 5:
            raise VerificationError(f"curvature_grid must be at least 5, got {self.curvature_grid}")
        if self.precision_digits < 16:
            raise VerificationError(f"precision_digits must be at least 16, got {self.precision_digits}")

    def as_dict(self) -> dict:
        return {
            "curvature_threshold": self.curvature_threshold,
            "ode_threshold": self.ode_threshold,
            "fit_threshold": self.fit_threshold,
            "degenerate_fit_threshold": self.degenerate_fit_threshold,
            "completeness_threshold": self.completeness_threshold,
            "curvature_grid": self.curvature_grid,
            "precision_digits": self.precision_digits,
            "solver_tol": self.solver_tol,
        }
