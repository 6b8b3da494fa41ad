"""Command line entry point: ``toeplitz-trace``.

Every command writes ``<out>/<command>.csv`` and ``<out>/<command>.summary.json``
and exits with status 1 when any check fails.  ``report`` merges the
summaries into ``<out>/acceptance.json``.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import reports, suites

EXIT_FAILED = 1
EXIT_CONFIG = 2


def _common(f):
    f = click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True, help="Worker threads for lambda scans.")(f)
    f = click.option("--lambda-grid", "lambda_grid", default=None, help="Override the lambda grid, 'a:b:n' (geometric).")(f)
    f = click.option("--tol-scale", type=float, default=1.0, show_default=True, help="Multiply every tolerance by this factor.")(f)
    f = click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("out"), show_default=True)(f)
    f = click.option("--seed", type=int, default=0, show_default=True)(f)
    f = click.option("--config", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None, help="JSON config overlaying the defaults.")(f)
    return f


def _prepare(command, defaults, config, tol_scale, lambda_grid, grid_key):
    try:
        if not tol_scale > 0:
            raise reports.ConfigError("--tol-scale must be positive")
        cfg = reports.load_config(config, defaults, command)
        if lambda_grid is not None:
            if grid_key is None:
                raise reports.ConfigError(f"'{command}' has no lambda grid")
            cfg[grid_key] = reports.parse_lambda_grid(lambda_grid)
        reports.validate_config(cfg)
    except reports.ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    return cfg


def _finish(command, rows, extra, cfg, out: Path, seed: int, tol_scale: float):
    name = command.replace(" ", "_")
    reports.write_csv(rows, out / f"{name}.csv")
    summ = reports.summary(command, rows, extra)
    summ.update({"config": cfg, "seed": seed, "tol_scale": tol_scale})
    reports.write_json(summ, out / f"{name}.summary.json")
    for r in sorted(rows, key=lambda r: r.experiment):
        click.echo(f"{'PASS' if r.passed else 'FAIL'}  {r.experiment:<32s} dev={float(r.deviation):<12.4g} tol={float(r.tolerance):.4g}")
    click.echo(f"{command}: {len(rows) - summ['n_failed']}/{len(rows)} passed")
    if summ["n_failed"]:
        sys.exit(EXIT_FAILED)


@click.group()
def main():
    """Numerical checks for the fixed-point trace expansion of Toeplitz operators."""


@main.command()
@_common
def identities(config, seed, out, tol_scale, lambda_grid, threads):
    """Linear-algebra identities, Gaussian closed form and exponent collapse."""
    defaults = {**suites.IDENTITY_DEFAULTS, **suites.GAUSSIAN_DEFAULTS, **suites.EXPONENT_DEFAULTS}
    cfg = _prepare("identities", defaults, config, tol_scale, lambda_grid, None)
    rows, extra = [], {}
    for fn in (suites.identities_suite, suites.gaussian_suite, suites.exponent_suite):
        r, e = fn(cfg, seed, tol_scale)
        rows += r
        extra.update(e)
    _finish("identities", rows, extra, cfg, out, seed, tol_scale)


@main.command()
@_common
def stationary(config, seed, out, tol_scale, lambda_grid, threads):
    """Stationary point, Hessian and its inverse of the reduced phase."""
    cfg = _prepare("stationary", suites.STATIONARY_DEFAULTS, config, tol_scale, lambda_grid, None)
    rows, extra = suites.stationary_suite(cfg, seed, tol_scale)
    _finish("stationary", rows, extra, cfg, out, seed, tol_scale)


@main.command()
@_common
def oscillatory(config, seed, out, tol_scale, lambda_grid, threads):
    """Direct quadrature of the oscillatory integral against the leading term."""
    cfg = _prepare("oscillatory", suites.OSCILLATORY_DEFAULTS, config, tol_scale, lambda_grid, "lambda_grid")
    rows, extra = suites.oscillatory_suite(cfg, seed, tol_scale, threads)
    _finish("oscillatory", rows, extra, cfg, out, seed, tol_scale)


@main.group()
def cp1():
    """Brute-force spectral sums on the projective line."""


def _cp1_command(name, defaults, fn, grid_key):
    @cp1.command(name=name, help=fn.__doc__)
    @_common
    def cmd(config, seed, out, tol_scale, lambda_grid, threads):
        command = f"cp1 {name}"
        cfg = _prepare(command, defaults, config, tol_scale, lambda_grid, grid_key)
        rows, extra = fn(cfg, seed, tol_scale, threads)
        _finish(command, rows, extra, cfg, out, seed, tol_scale)

    return cmd


_cp1_command("profile", suites.CP1_PROFILE_DEFAULTS, suites.cp1_profile_suite, "lambda_parity")
_cp1_command("negative", suites.CP1_NEGATIVE_DEFAULTS, suites.cp1_negative_suite, None)
_cp1_command("decay", suites.CP1_DECAY_DEFAULTS, suites.cp1_decay_suite, "lambda_grid")
_cp1_command("calibrate", suites.CP1_CALIBRATE_DEFAULTS, suites.cp1_calibrate_suite, None)


@main.command()
@click.option("--out", type=click.Path(file_okay=False, path_type=Path), default=Path("out"), show_default=True)
def report(out):
    """Merge every ``*.summary.json`` under OUT into ``acceptance.json``."""
    paths = sorted(out.glob("*.summary.json"))
    if not paths:
        click.echo(f"no summaries found in {out}", err=True)
        sys.exit(EXIT_CONFIG)
    merged = reports.merge_summaries(paths)
    reports.write_json(merged, out / "acceptance.json")
    for name, c in sorted(merged["commands"].items()):
        click.echo(f"{'PASS' if c['passed'] else 'FAIL'}  {name}  ({c['n_rows'] - c['n_failed']}/{c['n_rows']})")
    if not merged["passed"]:
        sys.exit(EXIT_FAILED)


if __name__ == "__main__":
    main()
