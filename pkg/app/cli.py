"""
Command-line front door:

    python -m app laws exc --max-n 3
    python -m app axioms crr:exc --budget 3
    python -m app theorems crrlm:free:two_sorted.sig --samples 300
    python -m app bops crr:vars delta '{"n": 2}' --mode both
    python -m app demo-perm vars

Exit status: 0 when every check passes, 1 on a failed check or a rejected
operation, 2 on usage errors.
"""
import json
import logging
import sys

import click

from app.config import Config
from app.services import bops_service, report_service, suite_service
from app.services.registry import SelectorError


def configure_logging(verbosity):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)


def seed_option(f):
    return click.option("--seed", type=int, default=None, help=f"Random seed (default {Config.SEED}).")(f)


def samples_option(f):
    return click.option("--samples", type=click.IntRange(min=0), default=None,
                        help=f"Sampled cases per check (default {Config.SAMPLES}).")(f)


def output_options(f):
    f = click.option("--timing", is_flag=True, help="Include wall time in the JSON report.")(f)
    f = click.option("--save", is_flag=True, help="Also write the report under the report directory.")(f)
    f = click.option("--max-size", type=click.IntRange(min=1), default=None,
                     help=f"Largest sampled term (default {Config.MAX_TERM_SIZE}).")(f)
    return f


def _run(command, selector, budget, no_lifting, save, timing):
    try:
        report = suite_service.run_suite(command, selector, budget, no_lifting)
    except SelectorError as e:
        raise click.UsageError(str(e))

    click.echo(report.to_json(include_timing=timing))
    click.echo(f"{report.suite}: {len(report.checks)} checks, "
               f"{'passed' if report.passed else 'FAILED'} in {report.wall_time:.2f}s", err=True)
    if save:
        report_id = report_service.create_report_id()
        path = report_service.save_report(report_id, report, {"command": command, "selector": selector}, timing)
        click.echo(f"saved {path}", err=True)
    sys.exit(0 if report.passed else 1)


@click.group()
@click.option("-v", "--verbose", count=True, help="Log INFO (-v) or DEBUG (-vv) to stderr.")
def cli(verbose):
    """Relative monads, the C-systems C(RR) and C(RR, LM), and their checks."""
    configure_logging(verbose)


@cli.command("laws")
@click.argument("selector")
@click.option("--max-n", type=click.IntRange(min=0), default=None,
              help=f"Largest context (default {Config.MAX_CONTEXT}).")
@samples_option
@seed_option
@click.option("--no-lifting", is_flag=True, help="Free instances only: substitute without de Bruijn lifting.")
@output_options
def laws_command(selector, max_n, samples, seed, no_lifting, max_size, save, timing):
    """Relative-monad laws of an instance: vars, unit, exc or free:<file>."""
    budget = suite_service.make_budget(max_len=max_n, samples=samples, seed=seed, max_size=max_size)
    _run("laws", selector, budget, no_lifting, save, timing)


@cli.command("axioms")
@click.argument("selector")
@click.option("--budget", "max_len", type=click.IntRange(min=0), default=None,
              help=f"Largest object length (default {Config.MAX_CONTEXT}).")
@samples_option
@seed_option
@output_options
def axioms_command(selector, max_len, samples, seed, max_size, save, timing):
    """C0 axioms, pullbacks and homomorphisms of crr:<inst> or crrlm:<inst>[:<module>]."""
    budget = suite_service.make_budget(max_len=max_len, samples=samples, seed=seed, max_size=max_size)
    _run("axioms", selector, budget, False, save, timing)


@cli.command("theorems")
@click.argument("selector")
@click.option("--budget", "max_len", type=click.IntRange(min=0), default=None,
              help=f"Largest object length (default {Config.MAX_CONTEXT}).")
@samples_option
@seed_option
@click.option("--no-lifting", is_flag=True, help="Free instances only: substitute without de Bruijn lifting.")
@output_options
def theorems_command(selector, max_len, samples, seed, no_lifting, max_size, save, timing):
    """Explicit against definitional B-operations, and the section bijection."""
    budget = suite_service.make_budget(max_len=max_len, samples=samples, seed=seed, max_size=max_size)
    _run("theorems", selector, budget, no_lifting, save, timing)


@cli.command("demo-perm")
@click.argument("selector")
@samples_option
@seed_option
@output_options
def demo_perm_command(selector, samples, seed, max_size, save, timing):
    """psi on RR(2) against the renaming along the transposition of x_0 and x_1."""
    budget = suite_service.make_budget(samples=samples, seed=seed, max_size=max_size)
    _run("demo-perm", selector, budget, False, save, timing)


@cli.command("bops")
@click.argument("selector")
@click.argument("op")
@click.argument("args")
@click.option("--mode", type=click.Choice(bops_service.MODES), default="both", show_default=True)
def bops_command(selector, op, args, mode):
    """Evaluate one of T, Tt, S, St, delta on JSON arguments."""
    try:
        data = json.loads(args)
    except json.JSONDecodeError as e:
        raise click.UsageError(f"arguments are not valid JSON: {e}")
    try:
        ok, payload = bops_service.evaluate(selector, op, data, mode)
    except ValueError as e:
        raise click.UsageError(str(e))
    click.echo(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    sys.exit(0 if ok else 1)


if __name__ == "__main__":
    cli()
