#!/usr/bin/env python3
"""
gausscap: Gaussian Channel Capacity Toolkit
===========================================
Batch front-end for the capacity, degradability and cross-validation
routines. Every command writes flat records as CSV or JSON and exits with

    0  success
    1  a check failed (crosscheck mismatch, witness did not revalidate)
    2  invalid input
    3  inconclusive (no witness found)

Usage:
    python -m gausscap capacity --q 0.75 --pa 5 --pe 1
    python -m gausscap capacity --q-range 0.51:0.99:0.01 --output out/capacity.csv
    python -m gausscap figures fig1 --outdir out/
    python -m gausscap crosscheck --cutoff 60 --report out/crosscheck.md
    python -m gausscap witness --q 0.72
    python -m gausscap witness --rational 2/1 --eps 1e-3
    python -m gausscap --config run.cfg --jobs 4 capacity
"""

import functools
import logging
import math
import sys
from enum import IntEnum
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, NoReturn, Optional, Sequence, Tuple

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from gausscap import __version__
from gausscap.capacities.classical import (
    classical_capacity_lower_bound,
    conferencing_lower_bound,
    uncertainty_report,
)
from gausscap.capacities.quantum import energy_constrained_q_lower_bound, q_ghx_closed_form
from gausscap.core.channels import canonical_unitary, squeezed_env_cm
from gausscap.core.symplectic import CovarianceMatrix, EnergyBudget, entropy_gaussian
from gausscap.degradability.amplifier import DEFAULT_EPS_GRID, find_violation_near_rational
from gausscap.degradability.gamma import figure1_grid, figure1_row_set, figure2_row, negativity_witness
from gausscap.degradability.witness import DegradabilityWitness
from gausscap.errors import DomainError, FockTruncationError, GausscapError, WitnessNotFound
from gausscap.fock.oracle import (
    beam_splitter_unitary_fock,
    fock_output_entropies,
    squeezed_vacuum_fock_state,
    squeezer_unitary_fock,
    thermal_fock_state,
)
from gausscap.reports.records import Record, render, write_records
from gausscap.reports.report_generator import ReportGenerator
from gausscap.utils.config import (
    Command,
    ConfigError,
    OutputFormat,
    RunConfig,
    build_default_map,
    command_keys,
    load_config_file,
    resolve_jobs,
)
from gausscap.utils.sweep import parse_float_list, parse_q_range, run_pool

logger = logging.getLogger("gausscap")

console = Console(stderr=True)


class ExitCode(IntEnum):
    OK            = 0
    CHECK_FAILED  = 1
    INVALID_INPUT = 2
    INCONCLUSIVE  = 3


CAPACITY_COLUMNS = [
    "q", "P_A", "P_E", "Q_closed", "Q_energy_lb", "C_classical_lb", "chi_h", "chi_a",
    "uncertainty_lb", "class_lb", "conferencing_lb", "conferencing_ideal",
    "conferencing_literal", "channel_class",
]
FIG1_COLUMNS = ["q", "label", "n", "m", "value"]
FIG2_COLUMNS = ["q", "min", "n", "m"]
CROSSCHECK_COLUMNS = [
    "q", "n_bar", "s", "S_B_gauss", "S_B_fock", "S_F_gauss", "S_F_fock", "error", "tail", "ok", "note",
]

DEFAULT_FIGURE_RANGE = "0.5:0.99:0.01"
SMALLEST_EPS = 1e-9


# ── Helpers ────────────────────────────────────────────────────────────────────
def _setup_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.ERROR if quiet else logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False, rich_tracebacks=False)],
        force=True,
    )


def _fail(code: ExitCode, message: str) -> None:
    console.print(f"[bold red]error:[/] {message}")
    sys.exit(int(code))


def handle_errors(func: Callable) -> Callable:
    """Map library exceptions to exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except DomainError as exc:
            _fail(ExitCode.INVALID_INPUT, str(exc))
        except GausscapError as exc:
            _fail(ExitCode.CHECK_FAILED, str(exc))

    return wrapper


def _emit(cfg: RunConfig, records: Sequence[Record], columns: Optional[Sequence[str]] = None) -> None:
    name = cfg.command.value
    if cfg.output is None:
        click.echo(render(records, cfg.fmt.value, name, columns), nl=False)
    else:
        path = write_records(records, cfg.output, cfg.fmt.value, name, columns)
        logger.info("wrote %d records to %s", len(records), path)


def _save_report(cfg: RunConfig, records: Sequence[Record], summary: Optional[Dict[str, Any]] = None) -> None:
    if cfg.report is None:
        return
    settings = {
        "jobs":   cfg.jobs,
        "format": cfg.fmt.value,
    }
    if cfg.qs:
        settings["q points"] = len(cfg.qs)
    if cfg.command is Command.CROSSCHECK:
        settings.update({"cutoff": cfg.cutoff, "tol": cfg.tol})
    path = ReportGenerator(cfg.command.value, records, settings, summary).save_markdown(str(cfg.report))
    console.print(f"[green]report saved:[/] {path}")


def _q_grid(q: Optional[float], q_range: Optional[str]) -> List[float]:
    if q is not None and q_range:
        raise ConfigError("give either --q or --q-range, not both")
    if q is not None:
        return [q]
    if q_range:
        return parse_q_range(q_range)
    return []


def _check_q(q: float) -> None:
    if q == 1:
        raise DomainError("q = 1 is a singular point (identity channel, no capacity formula)")
    if q <= 0:
        raise DomainError(f"q must be > 0, got {q}")


def _eps_grid(eps: Optional[float]) -> Tuple[float, ...]:
    """Largest offset eps, then decades down to 1e-9."""
    if eps is None:
        return DEFAULT_EPS_GRID
    if eps <= 0:
        raise DomainError(f"--eps must be > 0, got {eps}")
    grid = [eps]
    while grid[-1] / 10 >= SMALLEST_EPS * (1 - 1e-12):
        grid.append(grid[-1] / 10)
    return tuple(grid)


def _parse_rational(text: str) -> Tuple[int, int]:
    try:
        x, y = (int(v) for v in text.split("/"))
    except ValueError:
        raise DomainError(f"--rational must look like x/y with integers, got {text!r}")
    return x, y


# ── Grid point workers (module level so they pickle) ──────────────────────────
def capacity_point(args: Tuple[float, float, float]) -> Record:
    q, p_a, p_e = args
    budget = EnergyBudget(p_a, p_e)
    unitary = canonical_unitary(q)
    report = uncertainty_report(unitary, budget)
    conferencing = conferencing_lower_bound(unitary, p_a)
    return {
        "q":                    q,
        "P_A":                  p_a,
        "P_E":                  p_e,
        "Q_closed":             q_ghx_closed_form(q),
        "Q_energy_lb":          max(energy_constrained_q_lower_bound(unitary, budget), 0.0),
        "C_classical_lb":       classical_capacity_lower_bound(q, abs(1 - q), budget),
        "chi_h":                report.chi_h_lower,
        "chi_a":                report.chi_a_lower,
        "uncertainty_lb":       report.generic_bound,
        "class_lb":             report.class_bound,
        "conferencing_lb":      conferencing.value,
        "conferencing_ideal":   conferencing.ideal_channel_value,
        "conferencing_literal": conferencing.literal_value,
        "channel_class":        report.channel_class.tag.value,
    }


def crosscheck_point(args: Tuple[float, float, float, int, float]) -> Record:
    """Gaussian and truncated-Fock entropies of both outputs of U^(q)."""
    q, n_bar, s, cutoff, tol = args
    unitary = canonical_unitary(q)
    out = unitary.dilation.evolve(CovarianceMatrix.thermal(n_bar), squeezed_env_cm(s)).V
    s_b_gauss = entropy_gaussian(CovarianceMatrix(out[:2, :2]))
    s_f_gauss = entropy_gaussian(CovarianceMatrix(out[2:, 2:]))
    record: Record = {
        "q":         q,
        "n_bar":     n_bar,
        "s":         s,
        "S_B_gauss": s_b_gauss,
        "S_B_fock":  None,
        "S_F_gauss": s_f_gauss,
        "S_F_fock":  None,
        "error":     None,
        "tail":      None,
        "ok":        False,
        "note":      "",
    }
    try:
        U = beam_splitter_unitary_fock(q, cutoff) if q < 1 else squeezer_unitary_fock(q, cutoff)
        s_b, s_f, tail = fock_output_entropies(
            U, thermal_fock_state(n_bar, cutoff), squeezed_vacuum_fock_state(s, 0.0, cutoff), leak_tol=tol
        )
    except FockTruncationError as exc:
        record.update({"tail": exc.leaked, "note": f"truncation: {exc}"})
        return record
    error = max(abs(s_b - s_b_gauss), abs(s_f - s_f_gauss))
    record.update({
        "S_B_fock": s_b,
        "S_F_fock": s_f,
        "error":    error,
        "tail":     tail,
        "ok":       error <= tol,
    })
    return record


# ── CLI ────────────────────────────────────────────────────────────────────────
_FORMAT = click.Choice([f.value for f in OutputFormat])


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Flat 'key = value' file with defaults for any command option.")
@click.option("--jobs", "-j", type=click.IntRange(min=1), default=None,
              help="Worker processes (default: CPU count; GAUSSCAP_JOBS overrides).")
@click.option("--verbose", "-v", is_flag=True, help="Debug logging.")
@click.option("--quiet", "-q", is_flag=True, help="Errors only.")
@click.version_option(__version__, prog_name="gausscap")
@click.pass_context
def main(ctx: click.Context, config_path: Optional[Path], jobs: Optional[int], verbose: bool, quiet: bool):
    """Capacities and degradability witnesses of Gaussian channels with a helper."""
    _setup_logging(verbose, quiet)
    settings: Dict[str, str] = {}
    if config_path is not None:
        try:
            settings = load_config_file(config_path)
            if jobs is None and "jobs" in settings:
                jobs = int(settings.pop("jobs"))
            settings.pop("jobs", None)
            ctx.default_map = build_default_map(settings, command_keys(main.commands.items()))
        except (ConfigError, ValueError) as exc:
            raise click.BadParameter(str(exc), param_hint="--config")
    try:
        ctx.obj = {"jobs": resolve_jobs(jobs)}
    except ConfigError as exc:
        raise click.BadParameter(str(exc), param_hint="--jobs")
    logger.debug("running with %d worker(s)", ctx.obj["jobs"])


def _output_options(default_format: str = "csv") -> Callable:
    def decorate(func: Callable) -> Callable:
        func = click.option("--report", type=click.Path(dir_okay=False, path_type=Path),
                            help="Also save a Markdown report here.")(func)
        func = click.option("--format", "fmt", type=_FORMAT, default=default_format, show_default=True)(func)
        func = click.option("--output", "-o", type=click.Path(dir_okay=False, path_type=Path),
                            help="Output file (default: stdout).")(func)
        return func
    return decorate


@main.command()
@click.option("--q", "q", type=float, help="Single q value.")
@click.option("--q-range", help="Inclusive grid start:stop:step.")
@click.option("--pa", type=float, default=1.0, show_default=True, help="Sender energy P_A.")
@click.option("--pe", type=float, default=1.0, show_default=True, help="Helper energy P_E.")
@_output_options()
@click.pass_context
@handle_errors
def capacity(ctx, q, q_range, pa, pe, output, fmt, report):
    """Capacity values and bounds of U^(q) per grid point."""
    cfg = RunConfig(Command.CAPACITY, _q_grid(q, q_range), p_a=pa, p_e=pe, output=output,
                    fmt=OutputFormat(fmt), jobs=ctx.obj["jobs"], report=report)
    for value in cfg.qs:
        _check_q(value)
    records = run_pool(capacity_point, [(value, cfg.p_a, cfg.p_e) for value in cfg.qs], cfg.jobs)
    _emit(cfg, records, CAPACITY_COLUMNS)
    _save_report(cfg, records)


@main.command()
@click.argument("which", type=click.Choice(["fig1", "fig2", "all"]), default="all")
@click.option("--q-range", default=DEFAULT_FIGURE_RANGE, show_default=True)
@click.option("--n-max", type=click.IntRange(min=1), default=50, show_default=True)
@click.option("--outdir", type=click.Path(file_okay=False, path_type=Path), default=Path("."), show_default=True)
@click.option("--format", "fmt", type=_FORMAT, default="csv", show_default=True)
@click.pass_context
@handle_errors
def figures(ctx, which, q_range, n_max, outdir, fmt):
    """Tables behind the c(k_n, k_m) curves (fig1) and the negativity scan (fig2)."""
    qs = [q for q in parse_q_range(q_range) if 0 < q < 1]
    cfg = RunConfig(Command.FIGURES, qs, fmt=OutputFormat(fmt), jobs=ctx.obj["jobs"], n_max=n_max)
    suffix = cfg.fmt.value
    if which in ("fig1", "all"):
        row_sets = run_pool(figure1_row_set, figure1_grid(cfg.qs), cfg.jobs)
        rows = [row for row_set in row_sets for row in row_set]
        path = write_records(rows, outdir / f"fig1.{suffix}", suffix, "fig1", FIG1_COLUMNS)
        console.print(f"[green]fig1:[/] {len(rows)} rows -> {path}")
    if which in ("fig2", "all"):
        rows = run_pool(functools.partial(figure2_row, n_max=cfg.n_max), cfg.qs, cfg.jobs)
        path = write_records(rows, outdir / f"fig2.{suffix}", suffix, "fig2", FIG2_COLUMNS)
        positive = [r["q"] for r in rows if r["min"] is None or r["min"] >= 0]
        if positive:
            logger.warning("no negative combination at %d grid point(s), first q=%s", len(positive), positive[0])
        console.print(f"[green]fig2:[/] {len(rows)} rows -> {path}")


@main.command()
@click.option("--cutoff", "-D", type=int, default=60, show_default=True, help="Fock cutoff per mode.")
@click.option("--tol", type=float, default=1e-6, show_default=True)
@click.option("--q-list", default="0.6,0.75", show_default=True)
@click.option("--n-bar-list", default="0,1,3", show_default=True)
@click.option("--s-list", default="0.0", show_default=True)
@_output_options()
@click.pass_context
@handle_errors
def crosscheck(ctx, cutoff, tol, q_list, n_bar_list, s_list, output, fmt, report):
    """Compare Gaussian and truncated-Fock output entropies."""
    cfg = RunConfig(Command.CROSSCHECK, parse_float_list(q_list), cutoff=cutoff, tol=tol, output=output,
                    fmt=OutputFormat(fmt), jobs=ctx.obj["jobs"], report=report)
    for q in cfg.qs:
        _check_q(q)
    grid = [
        (q, n_bar, s, cfg.cutoff, cfg.tol)
        for q in cfg.qs
        for n_bar in parse_float_list(n_bar_list)
        for s in parse_float_list(s_list)
    ]
    records = run_pool(crosscheck_point, grid, cfg.jobs)

    table = Table(title=f"Gaussian vs Fock entropies (D = {cfg.cutoff}, tol = {cfg.tol:g})")
    for col in ("q", "N̄", "s", "max error", "tail", "status"):
        table.add_column(col, justify="right")
    for r in records:
        error = "-" if r["error"] is None else f"{r['error']:.2e}"
        tail = "-" if r["tail"] is None else f"{r['tail']:.2e}"
        status = "[green]ok[/]" if r["ok"] else "[red]FAIL[/]"
        table.add_row(f"{r['q']:g}", f"{r['n_bar']:g}", f"{r['s']:g}", error, tail, status)
    console.print(table)

    _emit(cfg, records, CROSSCHECK_COLUMNS)
    failures = [r for r in records if not r["ok"]]
    _save_report(cfg, records, {"passed": not failures, "failures": len(failures), "tol": cfg.tol})
    if failures:
        for r in failures:
            console.print(f"[red]mismatch[/] q={r['q']:g} N̄={r['n_bar']:g} s={r['s']:g} {r['note']}")
        sys.exit(int(ExitCode.CHECK_FAILED))


@main.command()
@click.option("--q", "q", type=float, help="q < 1 runs the negativity scan; rational q > 1 the amplifier test.")
@click.option("--rational", help="q = x/y > 1 given as 'x/y'.")
@click.option("--eps", type=float, help="Largest offset q' - q tried (then decades down to 1e-9).")
@click.option("--n-max", type=click.IntRange(min=1), default=50, show_default=True)
@_output_options(default_format="json")
@click.pass_context
@handle_errors
def witness(ctx, q, rational, eps, n_max, output, fmt, report):
    """Certify that U^(q) is not degradable."""
    if q is not None and rational:
        raise ConfigError("give either --q or --rational, not both")
    pair = _parse_rational(rational) if rational else None
    cfg = RunConfig(Command.WITNESS, [q] if q is not None else [], output=output, fmt=OutputFormat(fmt),
                    jobs=ctx.obj["jobs"], n_max=n_max, eps_grid=_eps_grid(eps), rational=pair, report=report)

    if cfg.rational is None:
        _check_q(q)
        if q <= 0.5:
            _inconclusive(cfg, q, "q <= 1/2: the beam splitter is anti-degradable, no degradability to refute")
        if q < 1:
            found = negativity_witness(q, cfg.n_max)
            if found is None:
                _inconclusive(cfg, q, f"no combination below -1e-7 with n, m <= {cfg.n_max}")
        else:
            fraction = Fraction(q).limit_denominator(10 ** 4)
            if not math.isclose(float(fraction), q, rel_tol=0, abs_tol=1e-12):
                _inconclusive(cfg, q, "the amplifier test needs a rational q = x/y; pass --rational")
            found = _amplifier_witness(cfg, fraction.numerator, fraction.denominator)
    else:
        x, y = cfg.rational
        found = _amplifier_witness(cfg, x, y)

    record = found.to_dict()
    if not found.revalidate():
        _emit(cfg, [record])
        _fail(ExitCode.CHECK_FAILED, f"witness at q={found.q} did not revalidate")
    console.print(f"[green]witness:[/] {found.kind.value} at q = {found.q:.12g}, value {found.value:.6g}")
    _emit(cfg, [record])
    _save_report(cfg, [record])


def _amplifier_witness(cfg: RunConfig, x: int, y: int) -> DegradabilityWitness:
    try:
        return find_violation_near_rational(x, y, cfg.eps_grid)
    except WitnessNotFound as exc:
        _inconclusive(cfg, x / y, str(exc), exc.diagnostics)


def _inconclusive(cfg: RunConfig, q: float, reason: str, diagnostics: Optional[Dict[str, Any]] = None) -> NoReturn:
    record = {"q": q, "kind": None, "value": None, "certified": False, "reason": reason, **(diagnostics or {})}
    _emit(cfg, [record])
    _save_report(cfg, [record])
    console.print(f"[yellow]inconclusive:[/] {reason}")
    sys.exit(int(ExitCode.INCONCLUSIVE))


if __name__ == "__main__":
    main()
