from __future__ import annotations

import logging
import sys
from pathlib import Path
from typing import Callable, Optional

import click
from dotenv import load_dotenv
from rich import box
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from app.errors import ConfigMismatchError, ProblemInputError
from app.problem import Problem, load_problem
from app.report import EXIT_INPUT_ERROR, Report, Status
from app.selftest import cmd_selftest
from app.settings import Settings
from app.tasks import cmd_analyze, cmd_commute, cmd_endo, cmd_group, cmd_log, cmd_run, cmd_semiconj


console = Console(stderr=True)  # stdout reste réservé au JSON
load_dotenv()  # charge .env si présent (PADYN_PRECISION, PADYN_CAP, ...)

_STATUS_STYLE = {
    Status.certified: "green",
    Status.certified_negative: "yellow",
    Status.indeterminate: "magenta",
}


def _setup_logging(settings: Settings, verbose: bool, json_only: bool) -> None:
    level = logging.DEBUG if verbose else (logging.ERROR if json_only else settings.log_level.upper())
    logging.basicConfig(level=level, format="%(message)s", force=True,
                        handlers=[RichHandler(console=console, show_path=False)])


def _summary_table(report: Report) -> Table:
    table = Table(title="Rapport padyn", box=box.SIMPLE_HEAVY)
    table.add_column("Commande")
    table.add_column("Série")
    table.add_column("Statut")
    table.add_column("Précision")
    table.add_column("Diagnostic")
    for t in report.tasks:
        style = _STATUS_STYLE[t.status]
        table.add_row(t.command, t.target or "-", f"[{style}]{t.status.value}[/{style}]",
                      str(t.precision if t.precision is not None else "-"), t.diagnosis or "-")
    return table


def _emit(report: Report, output: Optional[str], quiet: bool, json_only: bool) -> None:
    text = report.to_json()
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        click.echo(text)
    if not (quiet or json_only):
        console.print(_summary_table(report))
        if output:
            console.print(f"[green]Rapport écrit :[/green] {output}")
    sys.exit(report.exit_code)


def _input_error(ex: Exception, json_only: bool) -> None:
    if not json_only:
        console.print(f"[red]Entrée invalide :[/red] {ex}")
    sys.exit(EXIT_INPUT_ERROR)


def _execute(opts: dict, runner: Callable[[Problem], Report]) -> None:
    try:
        settings = Settings.from_env()
        _setup_logging(settings, opts["verbose"], opts["json_only"])
        problem = load_problem(opts["input_path"], settings, precision=opts["precision"],
                               cap=opts["cap"], total_cap=opts["total_cap"])
        report = runner(problem)
    except (ProblemInputError, ConfigMismatchError) as ex:
        _input_error(ex, opts["json_only"])
        return
    _emit(report, opts["output"], opts["quiet"], opts["json_only"])


def _output_options(fn):
    fn = click.option("--verbose", is_flag=True, help="Logs DEBUG sur stderr.")(fn)
    fn = click.option("--json-only", is_flag=True, help="Uniquement le JSON (ni tableau ni logs).")(fn)
    fn = click.option("--quiet", is_flag=True, help="Pas de tableau récapitulatif.")(fn)
    fn = click.option("--output", default=None, help="Écrit le rapport JSON dans ce fichier.")(fn)
    return fn


def _problem_options(fn):
    fn = _output_options(fn)
    fn = click.option("--total-cap", type=click.IntRange(min=1), default=None,
                      help="Degré total des séries à deux variables (défaut : cap // 2).")(fn)
    fn = click.option("--cap", type=click.IntRange(min=1), default=None, help="Troncature X-adique D.")(fn)
    fn = click.option("--precision", type=click.IntRange(min=1), default=None,
                      help="Précision p-adique relative r.")(fn)
    fn = click.option("--input", "input_path", required=True, help="Document problème JSON.")(fn)
    return fn


@click.group()
def cli():
    """padyn : dynamique p-adique certifiée (CLI)"""
    pass


@cli.command()
@_problem_options
@click.option("--m", "m", type=click.IntRange(min=2), default=None, help="Teste aussi le critère B pour m.")
def analyze(m, **opts):
    """
    wideg, stabilité, polygone de Newton, critères A et B.
    """
    _execute(opts, lambda problem: cmd_analyze(problem, m))


@cli.command(name="log")
@_problem_options
def log_cmd(**opts):
    """
    Logarithme de Lubin (récursion + limite) et intégralité de L'.
    """
    _execute(opts, cmd_log)


@cli.command()
@_problem_options
def group(**opts):
    """
    Loi de groupe formel : axiomes, intégralité, borne factorielle.
    """
    _execute(opts, cmd_group)


@cli.command()
@_problem_options
@click.option("--a", "a", default=None, help="Scalaire a de l'endomorphisme [a].")
def endo(a, **opts):
    """
    Endomorphisme [a](X) = L^{-1}(a·L(X)).
    """
    _execute(opts, lambda problem: cmd_endo(problem, a))


@cli.command()
@_problem_options
@click.option("--g", "g", default=None, help="Nom de la série à tester contre f.")
@click.option("--a", "a", default=None, help="Dérivée en 0 du commutant à construire.")
def commute(g, a, **opts):
    """
    Teste f∘g = g∘f, ou construit le commutant de dérivée a.
    """
    _execute(opts, lambda problem: cmd_commute(problem, g, a))


@cli.command()
@_problem_options
@click.option("--m", "m", type=click.IntRange(min=2), default=None, help="Exposant de h(X) = X^m.")
def semiconj(m, **opts):
    """
    Construit f₀ avec f(X^m) = f₀(X)^m et vérifie la semi-conjugaison.
    """
    _execute(opts, lambda problem: cmd_semiconj(problem, m))


@cli.command()
@_problem_options
def run(**opts):
    """
    Exécute toutes les tâches du document, dans l'ordre.
    """
    _execute(opts, cmd_run)


@cli.command()
@_output_options
@click.option("--precision", type=click.IntRange(min=1), default=None, help="Précision p-adique relative r.")
@click.option("--cap", type=click.IntRange(min=1), default=None, help="Troncature X-adique D.")
def selftest(precision, cap, output, quiet, json_only, verbose):
    """
    Suite de non-régression sur les exemples de référence.
    """
    try:
        settings = Settings.from_env()
    except ConfigMismatchError as ex:
        _input_error(ex, json_only)
        return
    _setup_logging(settings, verbose, json_only)
    _emit(cmd_selftest(precision, cap), output, quiet, json_only)


if __name__ == "__main__":
    cli()
