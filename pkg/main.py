import io
import json
import logging
import sys
from fractions import Fraction
from typing import NoReturn

import click
import numpy as np
from dotenv import load_dotenv

from documents import (
    DocumentError,
    FigureTable,
    ProfileDocument,
    build_figure,
    bundle_document,
    bundle_problem_of,
    flat_document,
    load_bundle_profile,
    load_document,
    load_flat_profile,
    load_projective_profile,
    projective_document,
    render_svg,
    write_momentum_csv,
    write_potential_csv,
    write_rows,
)
from documents.csvdata import default_t_grid, default_tau_grid
from documents.figures import FIGURES
from documents.sweep import load_sweep_spec, run_sweep
from flat import FlatProblem, FlatProblemError, build_F, sample_potential
from momentum import (
    BundleProblem,
    BundleProblemError,
    build_profile,
    lambda_negative_profiles,
    sup_allowable_c,
)
from oracle import (
    OracleSettings,
    VerificationError,
    VerificationReport,
    verify_bundle,
    verify_flat,
    verify_projective,
    verify_raw_bundle,
)
from polycore import PolynomialError, parse_rational
from projective import ProjectiveError, build_projective_profile, cM_range, solve_projective

# Load environment variables from .env file
load_dotenv()

EXIT_INPUT = 2
EXIT_VERIFICATION = 3
EXIT_NO_SOLUTION = 4


def _fail(message: str, code: int) -> NoReturn:
    click.echo(f"Error: {message}", err=True)
    sys.exit(code)


class _Inputs:
    """Parses rational options and remembers which ones were snapped."""

    def __init__(self):
        self.snaps: list[str] = []

    def rational(self, text, name: str) -> Fraction:
        try:
            value, snap = parse_rational(text, name)
        except PolynomialError as e:
            _fail(str(e), EXIT_INPUT)
        if snap is not None:
            self.snaps.append(snap.describe())
        return value


def _settings(tol: float | None) -> OracleSettings:
    try:
        return OracleSettings(solver_tol=tol)
    except VerificationError as e:
        _fail(str(e), EXIT_INPUT)


def _emit_document(document: ProfileDocument, json_path: str | None):
    if json_path:
        document.save(json_path)
        click.echo(f"✓ Document written to {json_path}")
    else:
        click.echo(document.to_json())


def _echo_report(report: VerificationReport, label: str = ""):
    prefix = f"{label}: " if label else ""
    if report.passed:
        residual = report.curvature_residual_max
        detail = "" if residual is None else f" (curvature residual {residual:.3g})"
        click.echo(f"✓ {prefix}verification passed{detail}")
        return
    click.echo(f"⚠️  {prefix}verification failed")
    for check in report.failures:
        click.echo(f"  - {check.name}: value {check.value}, threshold {check.threshold} {check.detail}".rstrip())


def _echo_rows(header, rows):
    buffer = io.StringIO()
    write_rows(buffer, header, rows)
    click.echo(buffer.getvalue(), nl=False)


def _svg_table(figure_id: str, title: str, columns: tuple[str, str], x, y) -> FigureTable:
    return FigureTable(figure_id, title, columns, np.column_stack([x, y]), (columns[1],))


common_options = [
    click.option("--json", "json_path", type=click.Path(dir_okay=False), help="Write the document here"),
    click.option("--csv", "csv_path", type=click.Path(dir_okay=False), help="Write sampled profile data here"),
    click.option("--svg", "svg_path", type=click.Path(dir_okay=False), help="Draw the profile as SVG here"),
    click.option("--tol", type=float, default=None, help="Solver tolerance (default CSCK_SOLVER_TOL or 1e-8)"),
    click.option("--no-verify", is_flag=True, help="Skip the verification suite"),
]


def with_common_options(func):
    for option in reversed(common_options):
        func = option(func)
    return func


@click.group()
@click.option("--verbose", is_flag=True, help="Log solver detail at DEBUG level")
def cli(verbose: bool = False):
    """Constant scalar curvature Kähler profiles: solve, verify, sweep and plot."""
    if verbose:
        logging.basicConfig(level=logging.DEBUG, format="%(levelname)s %(name)s: %(message)s")


@cli.command()
@click.option("--n", "n", type=int, required=True, help="Complex dimension n >= 2")
@click.option("--a", "a", required=True, help="Puncture value a > 0 (p/q or decimal)")
@click.option("--c", "c", required=True, help="Scalar curvature c")
@with_common_options
def flat(n, a, c, json_path, csv_path, svg_path, tol, no_verify):
    """Profile on punctured C^n (or D^n when c < 0)."""
    inputs = _Inputs()
    a_value, c_value = inputs.rational(a, "a"), inputs.rational(c, "c")
    settings = _settings(tol)
    try:
        profile = build_F(FlatProblem(n, a_value, c_value))
    except FlatProblemError as e:
        _fail(str(e), EXIT_INPUT)

    click.echo(f"✓ F = {profile.F}")
    click.echo(f"  - Far end: {profile.endpoint_class.value}")
    if profile.b is not None:
        click.echo(f"  - b = {float(profile.b):.12g}, kappa = {profile.kappa}")

    document = flat_document(profile)
    document.snaps = inputs.snaps
    document.tolerances = settings.as_dict()
    report = None
    if not no_verify:
        report = verify_flat(profile, settings)
        document.verification = report.to_dict()
        _echo_report(report)

    if csv_path:
        rows = write_potential_csv(profile, csv_path)
        click.echo(f"✓ {rows} samples written to {csv_path}")
    if svg_path:
        table = sample_potential(profile, default_t_grid(profile))
        render_svg(_svg_table("flat", f"phi(t), n = {n}, a = {a}, c = {c}", ("t", "phi"), table.t, table.phi), svg_path)
        click.echo(f"✓ SVG written to {svg_path}")
    _emit_document(document, json_path)
    if report is not None and not report.passed:
        sys.exit(EXIT_VERIFICATION)


def _bundle_profiles(m, n, lam, c_M, c, a, at_c0, tol):
    if lam < 0:
        if c is not None:
            click.echo("⚠️  lambda < 0: c is solved for together with b; --c is ignored")
        profiles = lambda_negative_profiles(m, n, lam, c_M, a, tol)
        if not profiles:
            _fail(f"no b in (a, {-1 / lam}) gives c_M = {c_M} for a = {a}", EXIT_NO_SOLUTION)
        return profiles
    if lam == 0:
        if at_c0:
            c = c_M
        if c is None:
            _fail("lambda = 0 needs --c (c <= c_M) or --at-c0", EXIT_INPUT)
        return [build_profile(BundleProblem(m, n, lam, c_M, c, a), tol)]
    if c is None and not at_c0:
        _fail("lambda > 0 needs --c (c <= c0) or --at-c0", EXIT_INPUT)
    allowable = sup_allowable_c(m, n, lam, c_M, a, tol)
    click.echo(f"✓ c0 = {float(allowable.c0):.10g} ({allowable.case.value})")
    target = allowable.c0 if at_c0 else c
    return [build_profile(BundleProblem(m, n, lam, c_M, target, a), tol, allowable=allowable, at_c0=at_c0)]


@cli.command()
@click.option("--m", "m", type=int, required=True, help="Base dimension m >= 1")
@click.option("--n", "n", type=int, required=True, help="Fibre rank n >= 2")
@click.option("--lambda", "lam", required=True, help="Bundle curvature lambda")
@click.option("--cM", "c_M", required=True, help="Base scalar curvature c_M")
@click.option("--a", "a", required=True, help="Zero-section value a > 0")
@click.option("--c", "c", default=None, help="Target scalar curvature")
@click.option("--at-c0", is_flag=True, help="Use c = c0 (lambda > 0) or c = c_M (lambda = 0)")
@with_common_options
def bundle(m, n, lam, c_M, a, c, at_c0, json_path, csv_path, svg_path, tol, no_verify):
    """Momentum profile phi = P/Q over a cscK base."""
    inputs = _Inputs()
    lam_value = inputs.rational(lam, "lambda")
    c_M_value = inputs.rational(c_M, "c_M")
    a_value = inputs.rational(a, "a")
    c_value = None if c is None else inputs.rational(c, "c")
    settings = _settings(tol)
    try:
        profiles = _bundle_profiles(m, n, lam_value, c_M_value, c_value, a_value, at_c0, settings.solver_tol)
    except BundleProblemError as e:
        _fail(str(e), EXIT_INPUT)

    for profile in profiles:
        b = "inf" if profile.b is None else f"{float(profile.b):.10g}"
        click.echo(f"✓ {profile.case_tag.value} on {profile.total_space.value}: b = {b}, c = {float(profile.problem.c):.10g}")

    main, others = profiles[0], profiles[1:]
    document = bundle_document(main, others)
    document.snaps = inputs.snaps
    document.tolerances = settings.as_dict()
    failed = False
    if not no_verify:
        for index, profile in enumerate(profiles):
            report = verify_bundle(profile, settings)
            _echo_report(report, f"solution {index + 1}" if others else "")
            failed = failed or not report.passed
            if index == 0:
                document.verification = report.to_dict()

    if csv_path:
        rows = write_momentum_csv(main, csv_path)
        click.echo(f"✓ {rows} samples written to {csv_path}")
    if svg_path:
        tau = default_tau_grid(main)
        render_svg(_svg_table("bundle", f"phi(tau), {main.case_tag.value}", ("tau", "phi"), tau, main.phi.eval_float(tau)), svg_path)
        click.echo(f"✓ SVG written to {svg_path}")
    _emit_document(document, json_path)
    if failed:
        sys.exit(EXIT_VERIFICATION)


@cli.command()
@click.option("--m", "m", type=int, required=True, help="Base dimension m >= 1")
@click.option("--n", "n", type=int, required=True, help="Fibre rank n >= 2")
@click.option("--lambda", "lam", required=True, help="Bundle curvature lambda, nonzero")
@click.option("--a", "a", required=True, help="Zero-section value a > 0")
@click.option("--cM", "c_M", default=None, help="Base scalar curvature; b is solved for")
@click.option("--b", "b", default=None, help="Right end b; c_M and c follow exactly")
@with_common_options
def projective(m, n, lam, a, c_M, b, json_path, csv_path, svg_path, tol, no_verify):
    """Profile that extends across the divisor at infinity."""
    if (c_M is None) == (b is None):
        _fail("give exactly one of --cM and --b", EXIT_INPUT)
    inputs = _Inputs()
    lam_value = inputs.rational(lam, "lambda")
    a_value = inputs.rational(a, "a")
    settings = _settings(tol)
    try:
        admissible = cM_range(m, n, lam_value)
        if b is not None:
            profiles = [build_projective_profile(m, n, lam_value, a_value, inputs.rational(b, "b"))]
        else:
            c_M_value = inputs.rational(c_M, "c_M")
            if c_M_value not in admissible:
                _fail(f"c_M = {c_M} is outside the admissible range {admissible.describe()}", EXIT_INPUT)
            profiles, scan = solve_projective(m, n, lam_value, a_value, c_M_value, settings.solver_tol)
            if not profiles:
                _fail(f"no extending profile: {scan.describe()}", EXIT_NO_SOLUTION)
    except (ProjectiveError, BundleProblemError) as e:
        _fail(str(e), EXIT_INPUT)

    for profile in profiles:
        click.echo(
            f"✓ b = {profile.b} ({float(profile.b):.10g}): c_M = {float(profile.c_M):.10g}, c = {float(profile.c):.10g}"
        )
    main, others = profiles[0], profiles[1:]
    document = projective_document(main, others)
    document.snaps = inputs.snaps
    document.tolerances = settings.as_dict()
    failed = False
    if not no_verify:
        for index, profile in enumerate(profiles):
            report = verify_projective(profile, settings)
            _echo_report(report, f"root {index + 1}" if others else "")
            failed = failed or not report.passed
            if index == 0:
                document.verification = report.to_dict()

    if csv_path:
        rows = write_momentum_csv(main.base, csv_path)
        click.echo(f"✓ {rows} samples written to {csv_path}")
    if svg_path:
        tau = default_tau_grid(main.base)
        render_svg(_svg_table("projective", f"phi(tau) on [{a}, {float(main.b):.6g}]", ("tau", "phi"), tau,
                              main.base.phi.eval_float(tau)), svg_path)
        click.echo(f"✓ SVG written to {svg_path}")
    _emit_document(document, json_path)
    if failed:
        sys.exit(EXIT_VERIFICATION)


def _verify_document(document: ProfileDocument, settings: OracleSettings) -> VerificationReport:
    if document.kind == "flat":
        try:
            profile = load_flat_profile(document)
        except FlatProblemError as e:
            report = VerificationReport(kind="flat", settings=settings.as_dict())
            report.add("profile_assembly", False, detail=str(e))
            return report
        return verify_flat(profile, settings)
    try:
        if document.kind == "projective":
            return verify_projective(load_projective_profile(document), settings)
        return verify_bundle(load_bundle_profile(document), settings)
    except BundleProblemError as e:
        problem, P, b = bundle_problem_of(document)
        return verify_raw_bundle(problem, P, b, str(e), settings)


@cli.command()
@click.argument("document_path", type=click.Path(dir_okay=False))
@click.option("--json", "json_path", type=click.Path(dir_okay=False), help="Write the report here")
@click.option("--tol", type=float, default=None, help="Solver tolerance recorded with the report")
def verify(document_path, json_path, tol):
    """Run the verification suite on a saved profile document."""
    settings = _settings(tol)
    try:
        document = load_document(document_path)
        report = _verify_document(document, settings)
    except DocumentError as e:
        _fail(str(e), EXIT_INPUT)

    _echo_report(report, document.kind)
    text = json.dumps(report.to_dict(), indent=2)
    if json_path:
        with open(json_path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
        click.echo(f"✓ Report written to {json_path}")
    else:
        click.echo(text)
    if not report.passed:
        sys.exit(EXIT_VERIFICATION)


@cli.command()
@click.argument("spec_path", type=click.Path(dir_okay=False))
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), help="Write the rows here instead of stdout")
@click.option("--workers", type=int, default=None, help="Thread pool size (default CSCK_SWEEP_WORKERS or 4)")
def sweep(spec_path, csv_path, workers):
    """Evaluate a solver over a parameter grid."""
    try:
        spec = load_sweep_spec(spec_path)
        rows = run_sweep(spec, workers)
    except DocumentError as e:
        _fail(str(e), EXIT_INPUT)

    failures = sum(1 for row in rows if row[-1])
    if csv_path:
        with open(csv_path, "w", newline="", encoding="utf-8") as f:
            write_rows(f, spec.header, rows)
        click.echo(f"✓ {len(rows)} rows written to {csv_path}")
        if failures:
            click.echo(f"⚠️  {failures} row(s) recorded an error")
    else:
        _echo_rows(spec.header, rows)


@cli.command("plot-data")
@click.argument("figure_id", type=click.Choice(list(FIGURES)))
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), help="Write the table here instead of stdout")
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False), help="Draw the figure as SVG here")
@click.option("--points", type=int, default=200, show_default=True, help="Samples per curve")
def plot_data(figure_id, csv_path, svg_path, points):
    """Emit the data table behind a figure."""
    try:
        table = build_figure(figure_id, points)
    except (DocumentError, FlatProblemError, BundleProblemError, ProjectiveError) as e:
        _fail(str(e), EXIT_INPUT)

    if csv_path:
        table.write_csv(csv_path)
        click.echo(f"✓ {figure_id}: {table.rows.shape[0]} rows written to {csv_path}")
    else:
        _echo_rows(table.columns, table.rows.tolist())
    if svg_path:
        render_svg(table, svg_path)
        click.echo(f"✓ SVG written to {svg_path}")


if __name__ == "__main__":
    cli()
