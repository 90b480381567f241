"""Data tables behind every figure, with optional polyline SVG output."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from flat import FlatProblem, build_F, sample_potential  # noqa: E402
from momentum import BundleProblem, build_profile, p_components, sup_allowable_c  # noqa: E402
from projective import build_projective_profile, cM_of_b, solve_projective  # noqa: E402

from .csvdata import default_t_grid, default_tau_grid, write_table  # noqa: E402
from .models import DocumentError  # noqa: E402

logger = logging.getLogger(__name__)

DEFAULT_POINTS = 200
SURFACE_POINTS = 41


@dataclass
class FigureTable:
    """Columns of one figure; ``series`` lists the y columns drawn against the first column."""

    figure_id: str
    title: str
    columns: tuple[str, ...]
    rows: np.ndarray
    series: tuple[str, ...]

    def write_csv(self, path: str | Path) -> int:
        return write_table(path, self.columns, self.rows.tolist())

    def column(self, name: str) -> np.ndarray:
        return self.rows[:, self.columns.index(name)]


def _flat_curve(figure_id: str, c: int, points: int) -> FigureTable:
    profile = build_F(FlatProblem(2, Fraction(1), Fraction(c)))
    table = sample_potential(profile, default_t_grid(profile, points))
    rows = np.column_stack([table.t, table.phi])
    return FigureTable(figure_id, f"phi(t) with n = 2, a = 1, c = {c}", ("t", "phi"), rows, ("phi",))


def phi_c0(points: int) -> FigureTable:
    return _flat_curve("phi-c0", 0, points)


def phi_cneg(points: int) -> FigureTable:
    return _flat_curve("phi-cneg", -6, points)


def phi_cpos(points: int) -> FigureTable:
    return _flat_curve("phi-cpos", 1, points)


def detg_surface(points: int) -> FigureTable:
    """det g = exp(-2/(phi - 1)) over a square in (x, y) with r^2 = x^2 + y^2."""
    profile = build_F(FlatProblem(2, Fraction(1), Fraction(0)))
    side = max(5, min(points, SURFACE_POINTS))
    axis = np.linspace(-2.0, 2.0, side)
    x, y = np.meshgrid(axis, axis)
    r2 = (x**2 + y**2).ravel()
    keep = r2 > 0
    t = np.log(r2[keep])
    unique_t, inverse = np.unique(t, return_inverse=True)
    table = sample_potential(profile, unique_t)
    det_g = np.zeros_like(r2)
    det_g[keep] = table.det_g[inverse]
    rows = np.column_stack([x.ravel(), y.ravel(), det_g])
    return FigureTable("detg-surface", "det g for n = 2, a = 1, c = 0", ("x", "y", "det_g"), rows, ("det_g",))


def psi_example(points: int) -> FigureTable:
    """psi(tau) and the profile at c0 for m = 1, n = 2, lambda = 1, c_M = -4, a = 1."""
    m, n, lam, c_M, a = 1, 2, Fraction(1), Fraction(-4), Fraction(1)
    P0, D = p_components(m, n, lam, c_M, a)
    allowable = sup_allowable_c(m, n, lam, c_M, a)
    profile = build_profile(BundleProblem(m, n, lam, c_M, allowable.c0, a), allowable=allowable, at_c0=True)
    tau = np.linspace(1.01, 12.0, points)
    psi = P0.eval_float(tau) / D.eval_float(tau)
    phi = profile.phi.eval_float(tau)
    rows = np.column_stack([tau, psi, phi])
    return FigureTable("psi-example", "psi(tau) and phi(tau) at c0", ("tau", "psi", "phi"), rows, ("psi", "phi"))


def _projective_curve(figure_id: str, profile, points: int, title: str) -> FigureTable:
    tau = default_tau_grid(profile.base, points)
    rows = np.column_stack([tau, profile.base.phi.eval_float(tau)])
    return FigureTable(figure_id, title, ("tau", "phi"), rows, ("phi",))


def phi_extension_lambda_pos(points: int) -> FigureTable:
    profile = build_projective_profile(1, 2, 1, 1, 2)
    return _projective_curve("phi-extension-lambda-pos", profile, points, "phi(tau) on [1, 2], c_M = 610/13")


def _first_solution(lam, a, c_M):
    profiles, scan = solve_projective(1, 2, lam, a, c_M)
    if not profiles:
        raise DocumentError(f"no extending profile for c_M = {c_M}, a = {a}: {scan.describe()}")
    return profiles[0]


def phi_extension_small_a(points: int) -> FigureTable:
    profile = _first_solution(-1, Fraction(1, 1000), 2)
    return _projective_curve(
        "phi-extension-small-a", profile, points, f"phi(tau) with a = 0.001, c_M = 2, b = {float(profile.b):.6g}"
    )


def phi_extension_cM_neg(points: int) -> FigureTable:
    profile = _first_solution(-1, Fraction(1, 10), -2)
    return _projective_curve(
        "phi-extension-cM-neg", profile, points, f"phi(tau) with a = 0.1, c_M = -2, b = {float(profile.b):.6g}"
    )


def cM_of_b_lambda_neg(points: int) -> FigureTable:
    """c_M(b) for m = 1, n = 2, lambda = -1, a = 0.001 on b in (a, 1)."""
    a = Fraction(1, 1000)
    b = np.geomspace(float(a) * 1.05, 0.999, points)
    c_M = [float(cM_of_b(1, 2, -1, a, Fraction(x))) for x in b]
    rows = np.column_stack([b, c_M])
    return FigureTable("cM-of-b-lambda-neg", "c_M(b) with a = 0.001, lambda = -1", ("b", "c_M"), rows, ("c_M",))


FIGURES: dict[str, Callable[[int], FigureTable]] = {
    "phi-c0": phi_c0,
    "detg-surface": detg_surface,
    "phi-cneg": phi_cneg,
    "phi-cpos": phi_cpos,
    "psi-example": psi_example,
    "phi-extension-lambda-pos": phi_extension_lambda_pos,
    "cM-of-b-lambda-neg": cM_of_b_lambda_neg,
    "phi-extension-small-a": phi_extension_small_a,
    "phi-extension-cM-neg": phi_extension_cM_neg,
}


def build_figure(figure_id: str, points: int = DEFAULT_POINTS) -> FigureTable:
    """Data for one figure.

    Raises:
        DocumentError: If the figure id is unknown or points < 2
    """
    if figure_id not in FIGURES:
        raise DocumentError(f"unknown figure {figure_id!r}; choose from {', '.join(FIGURES)}")
    if points < 2:
        raise DocumentError(f"points must be at least 2, got {points}")
    logger.info("building figure %s with %d points", figure_id, points)
    return FIGURES[figure_id](points)


def render_svg(table: FigureTable, path: str | Path) -> Path:
    """Draw the table as polylines.

    The surface table is drawn as one det g line per grid row.
    """
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    try:
        if table.figure_id == "detg-surface":
            side = int(round(np.sqrt(table.rows.shape[0])))
            grid = table.rows.reshape(side, side, 3)
            for row in grid:
                ax.plot(row[:, 0], row[:, 2], linewidth=0.6)
            ax.set_xlabel("x")
            ax.set_ylabel("det_g")
        else:
            x = table.rows[:, 0]
            for name in table.series:
                ax.plot(x, table.column(name), label=name)
            ax.set_xlabel(table.columns[0])
            if len(table.series) > 1:
                ax.legend()
        ax.set_title(table.title)
        fig.savefig(path, format="svg")
    finally:
        plt.close(fig)
    logger.info("wrote %s to %s", table.figure_id, path)
    return path
