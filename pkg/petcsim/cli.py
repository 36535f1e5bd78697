# -*- coding: utf-8 -*-

"""Console script for petcsim."""

from marshmallow import ValidationError
from petcsim import __version__, Scenario
from petcsim.bounds import BOUND_FIELDS, BOUND_UNITS, bound_chain
from petcsim.bounds import validate_monitoring_period
from petcsim.exceptions import ConfigurationException, NumericalException
from petcsim.metrics import compute_run_metrics, format_metrics
from petcsim.sim import parse_sweep_values, run as run_scenario, SWEEP_PARAMETERS
from petcsim.sim import sweep as sweep_scenario
import click
import logging
import os
import sys

EXIT_VALIDATION = 3
EXIT_NUMERICAL = 4

_from_option = click.option(
    "--from",
    "-f",
    "from_",
    type=(click.Choice(["bundled", "yaml_file"]), str),
    help="Format (bundled/yaml_file) and source (name or filename) of scenario",
    nargs=2,
    required=True,
)

_quiet_option = click.option(
    "--quiet", "-q", is_flag=True, help="Only log errors.", default=False
)


@click.group()
@click.version_option(version=__version__)
def main():
    pass


def load_scenario(source):
    """Loads scenario (format, parameter)."""
    format, parameter = source
    if format == "bundled":
        return Scenario.bundled(parameter)
    elif format == "yaml_file":
        return Scenario.from_yaml_file(parameter)


def _set_quiet(quiet):
    logging.getLogger("petcsim").setLevel(logging.ERROR if quiet else logging.NOTSET)


def _fail(ctx, err):
    """Echo ``err`` and exit with the code of its kind."""
    if isinstance(err, NumericalException):
        click.echo("Numerical failure at t = {} s: {}".format(err.t, err), err=True)
        ctx.exit(EXIT_NUMERICAL)
    if isinstance(err, ValidationError):
        click.echo("Invalid scenario: {}".format(err.messages), err=True)
    else:
        click.echo("Invalid configuration: {}".format(err), err=True)
    ctx.exit(EXIT_VALIDATION)


def _loaded(ctx, from_):
    try:
        return load_scenario(from_)
    except OSError as err:
        _fail(ctx, ConfigurationException(str(err)))
    except (ValidationError, ConfigurationException, ValueError) as err:
        _fail(ctx, err)


@click.command()
@_from_option
@click.option(
    "--output-dir",
    "-o",
    default="petcsim-output",
    help="Directory for the run artifacts",
    show_default=True,
)
@_quiet_option
@click.pass_context
def run(ctx, from_, output_dir, quiet):
    """Run a scenario and write its artifacts."""
    from petcsim.export import write_run

    _set_quiet(quiet)
    scenario = _loaded(ctx, from_)
    try:
        result = run_scenario(scenario)
        metrics = compute_run_metrics(result)
    except (ConfigurationException, NumericalException) as err:
        _fail(ctx, err)
    for path in write_run(result, metrics, output_dir):
        click.echo(f"Wrote {path}")
    click.echo(format_metrics(metrics))


def _bound_lines(bound_set, to):
    lines = []
    if to in ("table", "both"):
        lines.append("{:<10} {:>24}  {}".format("bound", "value", "unit"))
        for name in BOUND_FIELDS:
            lines.append(
                "{:<10} {:>24.17g}  {}".format(
                    name, getattr(bound_set, name), BOUND_UNITS[name]
                )
            )
    if to in ("kv", "both"):
        lines += [f"{name} = {getattr(bound_set, name)!r}" for name in BOUND_FIELDS]
    return lines


@click.command()
@_from_option
@click.option("--r", "r", type=float, help="Override of the saturation estimate r")
@click.option(
    "--compare-omega",
    type=float,
    help="Also compute the bounds with omega scaled by this factor",
)
@click.option(
    "--to",
    "-t",
    type=click.Choice(["table", "kv", "both"]),
    default="both",
    help="Output format",
    show_default=True,
)
@_quiet_option
@click.pass_context
def bounds(ctx, from_, r, compare_omega, to, quiet):
    """Print the analytic bounds of a scenario."""
    _set_quiet(quiet)
    scenario = _loaded(ctx, from_)
    try:
        bound_set = bound_chain(scenario.bound_inputs(r=r))
        for line in _bound_lines(bound_set, to):
            click.echo(line)
        h = scenario.trigger.h
        click.echo(f"h = {h!r} s: {validate_monitoring_period(h, bound_set)}")
        if compare_omega is not None:
            omega = scenario.gains.omega * compare_omega
            scaled = bound_chain(scenario.with_param("omega", omega).bound_inputs(r=r))
            click.echo(f"omega {scenario.gains.omega!r} -> {omega!r}")
            click.echo("{:<10} {:>24} {:>24}".format("bound", "base", "scaled"))
            for name in BOUND_FIELDS:
                click.echo(
                    "{:<10} {:>24.17g} {:>24.17g}".format(
                        name, getattr(bound_set, name), getattr(scaled, name)
                    )
                )
            fixed = (1.0 - bound_set.a) * omega / bound_set.l1
            click.echo(f"h_star with a and l1 held fixed = {fixed!r}")
    except (ValidationError, ConfigurationException) as err:
        _fail(ctx, err)


@click.command()
@_from_option
@click.option(
    "--param",
    "-p",
    type=click.Choice(SWEEP_PARAMETERS),
    required=True,
    help="Parameter to sweep",
)
@click.option(
    "--values",
    "-v",
    required=True,
    help='Comma-separated values; "dt" multiples allowed, e.g. "dt,2dt,5dt"',
)
@click.option("--workers", "-w", default=1, show_default=True, help="Worker processes")
@click.option(
    "--output-dir",
    "-o",
    default="petcsim-output",
    help="Directory for sweep.csv",
    show_default=True,
)
@_quiet_option
@click.pass_context
def sweep(ctx, from_, param, values, workers, output_dir, quiet):
    """Run a scenario once per parameter value."""
    from petcsim.export import write_csv

    _set_quiet(quiet)
    scenario = _loaded(ctx, from_)
    try:
        parsed = parse_sweep_values(values, scenario.sim.dt)
    except ConfigurationException as err:
        _fail(ctx, err)
    table = sweep_scenario(scenario, param, parsed, workers=workers)
    os.makedirs(output_dir, exist_ok=True)
    path = os.path.join(output_dir, "sweep.csv")
    write_csv(table, path)
    click.echo(table.to_string(index=False))
    click.echo(f"Wrote {path}")
    if not (table["status"] == "ok").any():
        ctx.exit(EXIT_VALIDATION)


@click.command()
@_from_option
@click.pass_context
def validate(ctx, from_):
    """Validate a scenario without running it."""
    scenario = _loaded(ctx, from_)
    click.echo(f"Scenario {scenario.name} is valid.")


@click.command()
def list_bundled():
    """List bundled scenarios."""
    import petcsim.scenarios as scenarios

    click.echo("Bundled scenarios:")
    for _ in scenarios.iter_names():
        click.echo(f"  {_}")


main.add_command(bounds)
main.add_command(list_bundled)
main.add_command(run)
main.add_command(sweep)
main.add_command(validate)

if __name__ == "__main__":
    sys.exit(main())  # pragma: no cover
