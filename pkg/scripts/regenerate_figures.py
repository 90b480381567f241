#!/usr/bin/env python3
"""
Regenerate the data table of every figure.

Writes one CSV per figure (and optionally an SVG) into the output directory.

Usage:
    python scripts/regenerate_figures.py [--out=figures] [--points=200] [--svg]
"""

import sys
from pathlib import Path

import click
from dotenv import load_dotenv

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

load_dotenv(project_root / ".env")

# ruff: noqa: E402 - imports must come after load_dotenv
from documents import FIGURES, DocumentError, build_figure, render_svg
from momentum import BundleProblemError
from projective import ProjectiveError


@click.command()
@click.option("--out", default="figures", show_default=True, help="Output directory")
@click.option("--points", default=200, show_default=True, help="Samples per curve")
@click.option("--svg", "with_svg", is_flag=True, help="Also draw each figure as SVG")
@click.option("--only", multiple=True, type=click.Choice(list(FIGURES)), help="Restrict to these figures")
def regenerate(out: str, points: int, with_svg: bool, only: tuple[str, ...]):
    """Write the CSV behind every figure."""
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    figure_ids = list(only) or list(FIGURES)
    click.echo(f"🔄 Regenerating {len(figure_ids)} figure(s) into {out_dir}/")

    failed = 0
    for figure_id in figure_ids:
        try:
            table = build_figure(figure_id, points)
        except (DocumentError, BundleProblemError, ProjectiveError) as e:
            click.echo(f"⚠️  {figure_id}: {e}", err=True)
            failed += 1
            continue
        rows = table.write_csv(out_dir / f"{figure_id}.csv")
        click.echo(f"✓ {figure_id}: {rows} rows")
        if with_svg:
            render_svg(table, out_dir / f"{figure_id}.svg")

    click.echo()
    click.echo(f"Done: {len(figure_ids) - failed} written, {failed} failed")
    if failed:
        sys.exit(1)


if __name__ == "__main__":
    regenerate()
