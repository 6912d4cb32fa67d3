"""Command-line interface.

Exit codes: 0 success, 2 invalid input, 3 identity violation,
4 numerical nonconvergence or a degenerate step.
"""

from __future__ import annotations

import functools
import sys

import click

from .core import ALPHA_FSC, DiracState, NonrelState, PrecisionCtx, as_fraction
from .errors import (
    DegenerateCombination,
    DegenerateDenominator,
    DivergentIntegral,
    IdentityViolation,
    InvalidState,
    OutOfRange,
    QuadratureNonConvergence,
    SingularMatrix,
)
from .hahn import HahnSpec, hahn_recurrence, hahn_series
from . import tables
from .verify import GridSpec, run_verify

EXIT_OK, EXIT_INPUT, EXIT_IDENTITY, EXIT_NUMERIC = 0, 2, 3, 4

_EXIT_FOR = (
    (IdentityViolation, EXIT_IDENTITY),
    ((QuadratureNonConvergence, DegenerateDenominator, SingularMatrix, DegenerateCombination), EXIT_NUMERIC),
    ((InvalidState, OutOfRange, DivergentIntegral, ValueError, ZeroDivisionError), EXIT_INPUT),
)


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guard(fn):
    """Translate library errors into the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.exceptions.Exit:
            raise
        except Exception as exc:  # noqa: BLE001 - mapped or re-raised below
            for kinds, code in _EXIT_FOR:
                if isinstance(exc, kinds):
                    _fail(f"{type(exc).__name__}: {exc}", code)
            raise

    return wrapper


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _number(ctx, param, value):
    if value is None:
        return None
    try:
        return as_fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(f"not a number: {value!r}") from exc


def _number_list(ctx, param, value):
    if not value:
        return ()
    return tuple(_number(ctx, param, v) for v in value.split(","))


def _int_list(ctx, param, value):
    try:
        return tuple(int(v) for v in value.split(","))
    except ValueError as exc:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}") from exc


def _precision(bits: int) -> PrecisionCtx:
    if bits < 64:
        raise click.BadParameter("bits must be at least 64", param_hint="--bits")
    return PrecisionCtx(bits)


bits_option = click.option("--bits", type=int, default=256, show_default=True, help="Working precision in bits.")
format_option = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
out_option = click.option("--out", type=click.Path(dir_okay=False, writable=True), help="Write here instead of stdout.")


@click.group()
def main():
    """High-precision radial moments of hydrogenlike ions."""


@main.command()
@click.option("--nr", "n_r", type=int, required=True, help="Radial quantum number.")
@click.option("--kappa", type=int, required=True)
@click.option("--mu", callback=_number, help="Coupling alpha*Z (exclusive with --Z).")
@click.option("--Z", "charge", callback=_number, help="Nuclear charge; mu = Z * alpha-fsc.")
@click.option("--alpha-fsc", callback=_number, default=str(ALPHA_FSC), show_default="CODATA 2018")
@click.option("--beta", callback=_number, default="1", show_default=True, help="Inverse length scale.")
@click.option("--pmin", type=int, default=0, show_default=True)
@click.option("--pmax", type=int, default=4, show_default=True)
@click.option("--routes", default="all", show_default=True, help="Comma-separated routes or 'all'.")
@bits_option
@format_option
@out_option
@_guard
def rel(n_r, kappa, mu, charge, alpha_fsc, beta, pmin, pmax, routes, bits, fmt, out):
    """Table of (A_p, B_p, C_p) for one Dirac state along the chosen routes."""
    if (mu is None) == (charge is None):
        _fail("give exactly one of --mu and --Z", EXIT_INPUT)
    if pmin > pmax:
        _fail(f"--pmin {pmin} exceeds --pmax {pmax}", EXIT_INPUT)
    ctx = _precision(bits)
    if charge is not None:
        state = DiracState.from_charge(n_r, kappa, charge, alpha_fsc, beta)
    else:
        state = DiracState(n_r, kappa, mu, beta)
    rows = tables.rel_rows(state, pmin, pmax, tables.parse_routes(routes, tables.REL_ROUTES), ctx)
    text = tables.rel_csv(rows, ctx) if fmt == "csv" else tables.rel_json(state, rows, ctx)
    _emit(text, out)


@main.command()
@click.option("--n", type=int, required=True, help="Principal quantum number.")
@click.option("--l", "l_", type=int, required=True, help="Orbital angular momentum.")
@click.option("--Z", "charge", callback=_number, default="1", show_default=True)
@click.option("--a0", callback=_number, default="1", show_default=True, help="Bohr radius.")
@click.option("--kmin", type=int, default=-1, show_default=True)
@click.option("--kmax", type=int, default=4, show_default=True)
@click.option("--routes", default="all", show_default=True, help="Comma-separated routes or 'all'.")
@bits_option
@format_option
@out_option
@_guard
def nonrel(n, l_, charge, a0, kmin, kmax, routes, bits, fmt, out):
    """Table of <r^k> for one nonrelativistic level; each route where it applies."""
    if kmin > kmax:
        _fail(f"--kmin {kmin} exceeds --kmax {kmax}", EXIT_INPUT)
    ctx = _precision(bits)
    state = NonrelState(n, l_, charge, a0)
    rows = tables.nonrel_rows(state, kmin, kmax, tables.parse_routes(routes, tables.NONREL_ROUTES), ctx)
    text = tables.nonrel_csv(rows, ctx) if fmt == "csv" else tables.nonrel_json(state, rows, ctx)
    _emit(text, out)


@main.command()
@click.option("--nr", "n_r", callback=_int_list, default="0,1,2,3", show_default=True)
@click.option("--kappas", callback=_int_list, default="-2,-1,1,2", show_default=True)
@click.option("--mus", callback=_number_list, default="0.1,0.5", show_default=True, help="Absolute couplings.")
@click.option("--mu-fracs", callback=_number_list, default="", help="Couplings as fractions of |kappa|.")
@click.option("--pmin", type=int, default=1, show_default=True)
@click.option("--pmax", type=int, default=6, show_default=True)
@click.option("--oracle/--no-oracle", default=True, show_default=True, help="Include quadrature comparisons.")
@bits_option
@out_option
@_guard
def verify(n_r, kappas, mus, mu_fracs, pmin, pmax, oracle, bits, out):
    """Run every route and identity over a grid of states; JSON report."""
    if pmin > pmax:
        _fail(f"--pmin {pmin} exceeds --pmax {pmax}", EXIT_INPUT)
    grid = GridSpec(n_r=n_r, kappas=kappas, mus=mus, mu_fracs=mu_fracs, p_min=pmin, p_max=pmax, oracle=oracle)
    report = run_verify(grid, _precision(bits))
    _emit(report.to_json(), out)
    if not report.passed:
        sys.exit(EXIT_IDENTITY)


@main.command()
@click.option("--alpha", callback=_number, default="0", show_default=True)
@click.option("--beta-w", callback=_number, default="0", show_default=True, help="Second weight exponent.")
@click.option("--m", "degree", type=int, required=True, help="Highest degree.")
@click.option("--x", callback=_number, required=True)
@click.option("--N", "lattice", callback=_number, required=True, help="Lattice parameter.")
@bits_option
@out_option
@_guard
def hahn(alpha, beta_w, degree, x, lattice, bits, out):
    """h_m(x, N) for m = 0..M by the series and by the recurrence (CSV)."""
    ctx = _precision(bits)
    lines = ["m,series,recurrence,rel_diff"]
    for m in range(degree + 1):
        spec = HahnSpec(alpha, beta_w, m, x, lattice)
        s, r = hahn_series(spec, ctx), hahn_recurrence(spec, ctx)
        diff = abs(s - r) / abs(s) if s else abs(r)
        lines.append(f"{m},{tables.fmt(s, ctx)},{tables.fmt(r, ctx)},{tables.fmt_residual(diff, ctx)}")
    _emit("\n".join(lines) + "\n", out)


if __name__ == "__main__":
    main()
