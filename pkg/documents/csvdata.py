"""CSV tables of sampled profiles."""

from __future__ import annotations

import csv
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import TextIO

import numpy as np

from flat import EndpointClass, FlatProfile, sample_potential
from momentum import BundleProfile

logger = logging.getLogger(__name__)

POTENTIAL_COLUMNS = ("t", "phi", "u", "det_g")
MOMENTUM_COLUMNS = ("tau", "phi")
DEFAULT_POINTS = 400


def format_value(value) -> str:
    """Numbers with 17 significant digits; strings pass through."""
    if isinstance(value, str):
        return value
    if value is None:
        return ""
    return f"{float(value):.17g}"


def write_rows(stream: TextIO, header: Sequence[str], rows: Iterable[Sequence]) -> int:
    """Write a header row and the formatted rows; returns the number of data rows."""
    writer = csv.writer(stream)
    writer.writerow(header)
    count = 0
    for row in rows:
        writer.writerow([format_value(v) for v in row])
        count += 1
    return count


def write_table(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> int:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as f:
        count = write_rows(f, header, rows)
    logger.info("wrote %d rows to %s", count, path)
    return count


def read_table(path: str | Path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, [])
        return header, list(reader)


def default_t_grid(profile: FlatProfile, points: int = DEFAULT_POINTS) -> np.ndarray:
    """t range of the phi(t) plots: [-5, 5], [-5, -0.05] for c < 0, [-5, 8] for c > 0."""
    if profile.endpoint_class is EndpointClass.INFINITE_POINCARE:
        return np.linspace(-5.0, -0.05, points)
    if profile.endpoint_class is EndpointClass.FINITE_SIMPLE_ROOT:
        return np.linspace(-5.0, 8.0, points)
    return np.linspace(-5.0, 5.0, points)


def default_tau_grid(profile: BundleProfile, points: int = DEFAULT_POINTS) -> np.ndarray:
    """[a, b], or [a, a + 10 max(a, 1)] on an unbounded domain."""
    a = float(profile.problem.a)
    hi = a + 10.0 * max(a, 1.0) if profile.b is None else float(profile.b)
    return np.linspace(a, hi, points)


def potential_rows(profile: FlatProfile, t_grid=None):
    t_grid = default_t_grid(profile) if t_grid is None else t_grid
    return sample_potential(profile, t_grid).rows()


def momentum_rows(profile: BundleProfile, tau_grid=None):
    tau = default_tau_grid(profile) if tau_grid is None else np.asarray(tau_grid, float)
    return zip(tau, profile.phi.eval_float(tau), strict=True)


def write_potential_csv(profile: FlatProfile, path: str | Path, t_grid=None) -> int:
    return write_table(path, POTENTIAL_COLUMNS, potential_rows(profile, t_grid))


def write_momentum_csv(profile: BundleProfile, path: str | Path, tau_grid=None) -> int:
    return write_table(path, MOMENTUM_COLUMNS, momentum_rows(profile, tau_grid))
