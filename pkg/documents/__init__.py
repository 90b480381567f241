"""Documents module - JSON profile documents, CSV tables, figure data and sweeps."""

from .csvdata import (
    MOMENTUM_COLUMNS,
    POTENTIAL_COLUMNS,
    format_value,
    read_table,
    write_momentum_csv,
    write_potential_csv,
    write_rows,
    write_table,
)
from .figures import FIGURES, FigureTable, build_figure, render_svg
from .models import (
    SCHEMA_VERSION,
    DocumentError,
    ProfileDocument,
    bundle_document,
    bundle_problem_of,
    flat_document,
    flat_problem_of,
    load_bundle_profile,
    load_document,
    load_flat_profile,
    load_projective_profile,
    projective_document,
)
from .sweep import SWEEP_KINDS, SweepSpec, load_sweep_spec, run_sweep, write_sweep

__all__ = [
    "SCHEMA_VERSION",
    "DocumentError",
    "ProfileDocument",
    "flat_document",
    "bundle_document",
    "projective_document",
    "load_document",
    "load_flat_profile",
    "load_bundle_profile",
    "load_projective_profile",
    "flat_problem_of",
    "bundle_problem_of",
    "POTENTIAL_COLUMNS",
    "MOMENTUM_COLUMNS",
    "format_value",
    "write_table",
    "write_rows",
    "read_table",
    "write_potential_csv",
    "write_momentum_csv",
    "FIGURES",
    "FigureTable",
    "build_figure",
    "render_svg",
    "SWEEP_KINDS",
    "SweepSpec",
    "load_sweep_spec",
    "run_sweep",
    "write_sweep",
]
