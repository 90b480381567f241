"""Parameter sweeps over the solvers, one CSV row per grid point."""

from __future__ import annotations

import itertools
import json
import logging
import os
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from flat import FlatProblem, FlatProblemError, build_F
from momentum import BundleProblemError, sup_allowable_c
from polycore import PolynomialError, format_rational, parse_rational
from projective import DEFAULT_TOL, ProjectiveError, c_of_b, curvature_pair, h_ratio, scan_b

from .csvdata import write_table
from .models import DocumentError

logger = logging.getLogger(__name__)

INTEGER_PARAMETERS = ("m", "n")


def _cM_of_b(p: dict) -> dict:
    c_M, c = curvature_pair(p["m"], p["n"], p["lambda"], p["a"], p["b"])
    return {"c_M": float(c_M), "c": float(c)}


def _h_diagonal(p: dict) -> dict:
    zeta = p["zeta"]
    return {"H": float(h_ratio(p["m"], p["n"], p["lambda"], zeta, 2 * zeta))}


def _h_edge(p: dict) -> dict:
    lam, eps = p["lambda"], p["eps"]
    a = (1 - 2 * eps) / -lam
    b = (1 - eps) / -lam
    return {"a": float(a), "b": float(b), "H": float(h_ratio(p["m"], p["n"], lam, a, b))}


def _sup_c(p: dict) -> dict:
    result = sup_allowable_c(p["m"], p["n"], p["lambda"], p["c_M"], p["a"])
    return {
        "c0": float(result.c0),
        "case": result.case.value,
        "b": "" if result.b is None else float(result.b),
    }


def _flat_kappa(p: dict) -> dict:
    profile = build_F(FlatProblem(p["n"], p["a"], p["c"]))
    if profile.kappa is None:
        raise FlatProblemError(f"c = {p['c']} has no finite end point and no kappa")
    return {"b": float(profile.b), "kappa": float(profile.kappa)}


def _projective_solve(p: dict) -> dict:
    scan = scan_b(p["m"], p["n"], p["lambda"], p["a"], p["c_M"], DEFAULT_TOL)
    cs = [float(c_of_b(p["m"], p["n"], p["lambda"], p["a"], Fraction(b))) for b in scan.roots]
    return {
        "roots": len(scan.roots),
        "b": ";".join(f"{b:.17g}" for b in scan.roots),
        "c": ";".join(f"{c:.17g}" for c in cs),
    }


@dataclass(frozen=True)
class SweepKind:
    parameters: tuple[str, ...]
    outputs: tuple[str, ...]
    run: Callable[[dict], dict]
    # mpmath keeps its working precision in one process-global context
    uses_mpmath: bool = False


SWEEP_KINDS: dict[str, SweepKind] = {
    "cM_of_b": SweepKind(("m", "n", "lambda", "a", "b"), ("c_M", "c"), _cM_of_b),
    "H_diagonal": SweepKind(("m", "n", "lambda", "zeta"), ("H",), _h_diagonal),
    "H_edge": SweepKind(("m", "n", "lambda", "eps"), ("a", "b", "H"), _h_edge),
    "sup_c": SweepKind(("m", "n", "lambda", "c_M", "a"), ("c0", "case", "b"), _sup_c),
    "flat_kappa": SweepKind(("n", "a", "c"), ("b", "kappa"), _flat_kappa, uses_mpmath=True),
    "projective_solve": SweepKind(("m", "n", "lambda", "a", "c_M"), ("roots", "b", "c"), _projective_solve),
}

ROW_ERRORS = (
    PolynomialError,
    FlatProblemError,
    BundleProblemError,
    ProjectiveError,
    ArithmeticError,
    ValueError,
)


def _parse(name: str, value):
    exact, _ = parse_rational(value, name)
    if name in INTEGER_PARAMETERS:
        if exact.denominator != 1:
            raise DocumentError(f"{name} must be an integer, got {value!r}")
        return int(exact)
    return exact


@dataclass
class SweepSpec:
    """``{"kind": ..., "fixed": {...}, "grid": {name: [values]}}``.

    The grid is the cartesian product of its lists, in key order.
    """

    kind: str
    fixed: dict
    grid: dict

    @property
    def definition(self) -> SweepKind:
        return SWEEP_KINDS[self.kind]

    @classmethod
    def from_dict(cls, data) -> SweepSpec:
        """Raises DocumentError for an unknown kind, bad values or missing parameters."""
        if not isinstance(data, dict):
            raise DocumentError("sweep spec must be a JSON object")
        kind = data.get("kind")
        if kind not in SWEEP_KINDS:
            raise DocumentError(f"unknown sweep kind {kind!r}; choose from {', '.join(SWEEP_KINDS)}")
        fixed = data.get("fixed", {})
        grid = data.get("grid", {})
        if not isinstance(fixed, dict) or not isinstance(grid, dict):
            raise DocumentError("'fixed' and 'grid' must be objects")
        for name, values in grid.items():
            if not isinstance(values, list):
                raise DocumentError(f"grid entry {name!r} must be a list")
        overlap = set(fixed) & set(grid)
        if overlap:
            raise DocumentError(f"parameters both fixed and swept: {sorted(overlap)}")
        definition = SWEEP_KINDS[kind]
        missing = [p for p in definition.parameters if p not in fixed and p not in grid]
        if missing:
            raise DocumentError(f"{kind} sweep is missing parameters {missing}")
        try:
            fixed = {name: _parse(name, value) for name, value in fixed.items()}
            grid = {name: [_parse(name, v) for v in values] for name, values in grid.items()}
        except PolynomialError as e:
            raise DocumentError(str(e)) from e
        return cls(kind=kind, fixed=fixed, grid=grid)

    def points(self) -> list[dict]:
        if not self.grid or any(len(values) == 0 for values in self.grid.values()):
            return []
        names = list(self.grid)
        return [
            {**self.fixed, **dict(zip(names, combo, strict=True))}
            for combo in itertools.product(*(self.grid[name] for name in names))
        ]

    @property
    def header(self) -> list[str]:
        definition = self.definition
        return [*definition.parameters, *definition.outputs, "error"]


def load_sweep_spec(path: str | Path) -> SweepSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"sweep spec is not valid JSON: {e}") from e
    return SweepSpec.from_dict(data)


def _row(spec: SweepSpec, point: dict) -> list:
    definition = spec.definition
    params = [format_rational(Fraction(point[p])) for p in definition.parameters]
    try:
        result = definition.run(point)
    except ROW_ERRORS as e:
        logger.warning("%s sweep row %s failed: %s", spec.kind, params, e)
        return [*params, *([""] * len(definition.outputs)), str(e)]
    return [*params, *(result[name] for name in definition.outputs), ""]


def _default_workers() -> int:
    raw = os.getenv("CSCK_SWEEP_WORKERS", "4")
    try:
        workers = int(raw)
    except ValueError as e:
        raise DocumentError(f"CSCK_SWEEP_WORKERS = {raw!r} is not an integer") from e
    if workers < 1:
        raise DocumentError(f"CSCK_SWEEP_WORKERS must be at least 1, got {workers}")
    return workers


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[list]:
    """Evaluate every grid point in a thread pool; rows come back in grid order.

    Kinds that compute with mpmath run on a single worker.

    Raises:
        DocumentError: If ``workers`` is below 1
    """
    workers = _default_workers() if workers is None else workers
    if workers < 1:
        raise DocumentError(f"workers must be at least 1, got {workers}")
    if spec.definition.uses_mpmath and workers > 1:
        logger.info("%s sweep runs on one worker: mpmath precision is process-global", spec.kind)
        workers = 1
    points = spec.points()
    logger.info("%s sweep: %d points on %d workers", spec.kind, len(points), workers)
    if not points:
        return []
    if workers == 1:
        return [_row(spec, point) for point in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda point: _row(spec, point), points))


def write_sweep(spec: SweepSpec, path: str | Path, workers: int | None = None) -> int:
    rows = run_sweep(spec, workers)
    return write_table(path, spec.header, rows)
