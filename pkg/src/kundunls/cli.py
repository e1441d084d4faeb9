"""Command-line surface: construct / check / evolve / audit / presets."""

import json
import os
import random
import sys
from pathlib import Path

import click

from . import fields, io, scattering, verification
from .errors import (ConfigParseError, ConfigValidationError, Diagnostic,
                     EvaluationAtPole, KunduNLSError)
from .spectrum import derive_orbit
from .verification import EvolutionSetup


def _resolve_threads(threads):
    if threads is not None:
        return max(1, threads)
    env = os.environ.get("NZBC_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise click.UsageError(f"NZBC_THREADS={env!r} is not an integer")
    return 1


def _load(config):
    try:
        return io.load_config(config)
    except FileNotFoundError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except ConfigParseError as exc:
        where = ""
        if exc.line is not None:
            where = f" (line {exc.line}, column {exc.column})"
        click.echo(f"error: invalid JSON{where}: {exc}", err=True)
        sys.exit(1)
    except ConfigValidationError as exc:
        click.echo("error: invalid configuration", err=True)
        for d in exc.diagnostics:
            hint = f" [{d.hint}]" if d.hint else ""
            click.echo(f"  {d.code}: {d.message}{hint}", err=True)
        sys.exit(1)


def _plan_from(run: io.RunConfig, sign_convention: str) -> dict:
    v = dict(run.verification)
    plan = {"convention": sign_convention}
    if "window" in v:
        plan["window"] = tuple(v["window"])
    for key in ("residual_n", "h", "boundary_L", "dps", "gates"):
        if key in v:
            plan[key] = v[key]
    evo = v.get("evolution", True)
    if evo is False:
        plan["evolution"] = None
    elif isinstance(evo, dict):
        plan["evolution"] = EvolutionSetup(**evo)
    return plan


sign_option = click.option(
    "--sign-convention", type=click.Choice(["a", "b", "auto"]), default="auto",
    show_default=True, help="Overall sign convention of the reconstruction.")
threads_option = click.option(
    "--threads", type=int, default=None,
    help="Worker processes for grid evaluation (default: NZBC_THREADS or 1).")
seed_option = click.option(
    "--seed", type=int, default=0, show_default=True,
    help="Seed for randomized spot checks.")


@click.group()
def main():
    """Exact breather/soliton construction on a nonzero background."""


@main.command()
@click.argument("config")
@click.option("--out", type=click.Path(file_okay=False), default=".",
              show_default=True, help="Output directory.")
@click.option("--emit-gnuplot", is_flag=True,
              help="Also write a gnuplot script for the CSV.")
@sign_option
@threads_option
def construct(config, out, emit_gnuplot, sign_convention, threads):
    """Sample the exact solution on the configured grid (CSV + JSON + PGM)."""
    run = _load(config)
    threads = _resolve_threads(threads)
    try:
        orbit = derive_orbit(run.cfg, sign_convention)
    except KunduNLSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    g = run.grid
    xs = fields.linspace(g["x_min"], g["x_max"], int(g["nx"]))
    ts = fields.linspace(g["t_min"], g["t_max"], int(g["nt"]))
    grid = fields.evaluate_grid(run.cfg, orbit, xs, ts, threads=threads)
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    io.write_grid_csv(grid, outdir / f"{run.name}.csv")
    io.write_grid_json(grid, outdir / f"{run.name}.json")
    io.render_pgm(grid, outdir / f"{run.name}.pgm")
    if emit_gnuplot:
        io.emit_gnuplot(f"{run.name}.csv", outdir / f"{run.name}.gp",
                        title=run.name)
    bad = sum(flag != "ok" for row in grid.flags for flag in row)
    if bad:
        click.echo(f"warning: {bad} grid points flagged", err=True)
    click.echo(f"wrote {run.name}.csv/.json/.pgm to {outdir}")


@main.command()
@click.argument("config")
@sign_option
def check(config, sign_convention):
    """Run the verification battery and print the report as JSON."""
    run = _load(config)
    report = verification.verify(run.cfg, plan=_plan_from(run, sign_convention))
    payload = report.to_dict()
    payload["config"] = run.name
    if run.uncertain and not report.passed:
        payload["warnings"].append(
            "config is marked uncertain (garbled source parameters); "
            "failures downgraded to warnings")
        payload["passed"] = True
    click.echo(json.dumps(payload, indent=2))
    sys.exit(0 if payload["passed"] else 1)


@main.command()
@click.argument("config")
@sign_option
def evolve(config, sign_convention):
    """Split-step cross-check: evolve the exact t0 slice and compare at t1."""
    run = _load(config)
    plan = _plan_from(run, sign_convention)
    setup = plan.get("evolution") or EvolutionSetup()
    convention = sign_convention
    payload = {"config": run.name,
               "setup": {"L": setup.L, "M": setup.M, "dt": setup.dt,
                         "t0": setup.t0, "t1": setup.t1}}
    try:
        err = verification.evolution_cross_check(run.cfg, setup, convention)
        payload["linf_error"] = err
        ok = err < verification.DEFAULT_GATES["evolution"]
    except KunduNLSError as exc:
        payload["not_applicable"] = f"{type(exc).__name__}: {exc}"
        ok = True
    click.echo(json.dumps(payload, indent=2))
    sys.exit(0 if ok else 1)


@main.command()
@click.argument("config")
@sign_option
@seed_option
def audit(config, sign_convention, seed):
    """Audit scattering-data identities (symmetries, theta, trace products)."""
    run = _load(config)
    try:
        orbit = derive_orbit(run.cfg, sign_convention)
    except KunduNLSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    diags = [scattering.check_theta_condition(orbit)]
    diags += scattering.check_symmetries(orbit)

    rng = random.Random(seed)
    worst = 0.0
    tried = 0
    while tried < 100:
        z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        if abs(z) < 0.1 or abs(abs(z) - orbit.Q0) < 1e-3 or abs(z.imag) < 1e-3:
            continue
        try:
            prod = scattering.trace_s11(orbit, z) * scattering.trace_s22(orbit, z)
        except EvaluationAtPole:
            continue
        worst = max(worst, abs(prod - 1))
        tried += 1
    diags.append(Diagnostic(
        "TraceProduct",
        f"max |s11*s22 - 1| = {worst:.3e} over {tried} samples",
        ok=worst <= 1e-12, value=worst))
    payload = {"config": run.name, "seed": seed,
               "diagnostics": [d.to_dict() for d in diags],
               "passed": all(d.ok for d in diags)}
    click.echo(json.dumps(payload, indent=2))
    sys.exit(0 if payload["passed"] else 1)


@main.command()
def presets():
    """List the bundled figure configurations."""
    for name in io.preset_names():
        click.echo(name)


if __name__ == "__main__":
    main()
