"""CLI entrypoint for nama."""

from __future__ import annotations

import dataclasses
import logging
import sys

import click

from nama import __version__
from nama.config import Command, OutputFormat, RunConfig, load_config
from nama.errors import DomainError
from nama.runner import EXIT_USAGE, RunOutcome, run


class NamaGroup(click.Group):
    """Click group whose usage errors exit with status 64."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(
                args=args,
                prog_name=prog_name,
                complete_var=complete_var,
                standalone_mode=False,
                **extra,
            )
        except click.UsageError as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.ClickException as e:
            e.show()
            sys.exit(e.exit_code)
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(1)
        except DomainError as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_USAGE)
        sys.exit(rv or 0)


def _common_options(f):
    """Options shared by every numeric command; None keeps the nama.yml value."""
    options = [
        click.option("--n", "n", type=int, default=None, help="Complex dimension n (default: 3)"),
        click.option("--d1", type=int, default=None, help="Degree d1 of the first divisor"),
        click.option("--d2", type=int, default=None, help="Degree d2 of the second divisor"),
        click.option("--tol", type=float, default=None, help="Matching / integration tolerance"),
        click.option("--t-min", "t_min", type=float, default=None, help="Grid is [t_min, 1/t_min]"),
        click.option("--grid-size", "grid_size", type=int, default=None, help="Output rows"),
        click.option("--out", "-o", "out_path", default=None, help="Output file ('-' for stdout)"),
        click.option(
            "--format",
            "-F",
            "output_format",
            type=click.Choice([f.value for f in OutputFormat]),
            default=None,
            help="Output format: csv (default) or json",
        ),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _build_config(ctx: click.Context, command: Command, **overrides) -> RunConfig:
    config = load_config(ctx.obj["config_path"])
    fmt = overrides.pop("output_format", None)
    if fmt is not None:
        overrides["format"] = OutputFormat(fmt)
    changes = {k: v for k, v in overrides.items() if v is not None}
    return dataclasses.replace(config, command=command, **changes)


def _emit(outcome: RunOutcome) -> int:
    if outcome.text and outcome.path is None:
        click.echo(outcome.text, nl=False)
    if outcome.path is not None:
        click.echo(f"Wrote {outcome.path}", err=True)
    if outcome.message:
        prefix = "" if outcome.exit_code == 0 else "Error: "
        click.echo(f"{prefix}{outcome.message}", err=True)
    return outcome.exit_code


@click.group(cls=NamaGroup)
@click.version_option(version=__version__)
@click.option("--config", "-c", "config_path", default=None, help="Path to nama.yml")
@click.option("--verbose", "-v", is_flag=True, help="Log solver progress to stderr")
@click.pass_context
def main(ctx, config_path, verbose):
    """nama: the reduced non-archimedean Monge-Ampere ODE, solved and cross-checked."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path


@main.command()
@_common_options
@click.option("--bracket", type=(float, float), default=None, help="Shooting bracket LO HI for w0")
@click.option("--t-start", "t_start", type=float, default=None, help="Series seed abscissa")
@click.pass_context
def match(ctx, **options):
    """Find w0 by the closed form and by shooting, and compare."""
    return _emit(run(_build_config(ctx, Command.MATCH, **options)))


@main.command()
@_common_options
@click.pass_context
def solve(ctx, **options):
    """Write the matched solution w(t) on [t_min, 1/t_min]."""
    return _emit(run(_build_config(ctx, Command.SOLVE, **options)))


@main.command()
@_common_options
@click.option("--x1", type=float, default=None, help="Base coordinate for the expansion check")
@click.pass_context
def verify(ctx, **options):
    """Run every cross-validation check and report pass/fail."""
    return _emit(run(_build_config(ctx, Command.VERIFY, **options)))


@main.command()
@_common_options
@click.option("--order", type=int, default=None, help="Boundary-expansion order (default: 4)")
@click.option("--x1", type=float, default=None, help="Base coordinate x1 (default: 1000)")
@click.pass_context
def expand(ctx, **options):
    """Compare the boundary expansion of u with the exact potential."""
    return _emit(run(_build_config(ctx, Command.EXPAND, **options)))


@main.command()
@_common_options
@click.option("--ray-t", "ray_t", type=float, default=None, help="Ray t = d1 x2 / (d2 x1)")
@click.pass_context
def scales(ctx, **options):
    """Write length scales along a ray of the base."""
    return _emit(run(_build_config(ctx, Command.SCALES, **options)))


@main.command(context_settings={"ignore_unknown_options": True})
@click.argument("function")
@click.argument("args", nargs=-1, type=click.UNPROCESSED)
@click.option(
    "--format",
    "-F",
    "output_format",
    type=click.Choice([f.value for f in OutputFormat]),
    default=None,
    help="Output format: csv (default) or json",
)
@click.pass_context
def specfun(ctx, function, args, output_format):
    """Evaluate a special function, e.g. `nama specfun hyp2f1 0.5 -0.25 0.75 0.5`."""
    config = _build_config(
        ctx, Command.SPECFUN, function=function, args=list(args), output_format=output_format
    )
    return _emit(run(config))
