"""Moment tables across routes and their CSV/JSON serialization.

Numbers are written as decimal strings with ceil(bits * 0.30103) significant
digits.  CSV and JSON go through the same formatter, so the two encodings of
one run carry identical numeric strings.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .closed_form import Route, indint1_residual
from .core import DiracState, NonrelState, PrecisionCtx
from .nonrel import NonrelRoute, moment
from .nonrel import route_covers as nonrel_covers
from .recurrences import SHABAEV_DOWN_TOP, generate_table

REL_ROUTES = tuple(Route)
NONREL_ROUTES = tuple(NonrelRoute)

RESIDUAL_DIGITS = 6


def fmt(value, ctx: PrecisionCtx, digits: int | None = None) -> str:
    return ctx.mp.nstr(ctx.real(value), digits or ctx.digits)


def fmt_residual(value, ctx: PrecisionCtx) -> str:
    return fmt(value, ctx, RESIDUAL_DIGITS)


def parse_routes(spec: str, allowed) -> list:
    """``"all"`` or a comma-separated list of route names, in canonical order."""
    names = [s.strip() for s in spec.split(",") if s.strip()]
    if not names:
        raise ValueError("at least one route is required")
    if names == ["all"]:
        return list(allowed)
    known = {r.value: r for r in allowed}
    unknown = [n for n in names if n not in known]
    if unknown:
        raise ValueError(f"unknown route(s) {', '.join(unknown)}; choose from {', '.join(known)} or all")
    chosen = {known[n] for n in names}
    return [r for r in allowed if r in chosen]


# ---------------------------------------------------------------------------
# relativistic


@dataclass
class RelRow:
    p: int
    triples: dict = field(default_factory=dict)  # Route -> MomentTriple
    residuals: dict = field(default_factory=dict)  # Route -> indint1 residual

    @property
    def max_residual(self):
        return max(self.residuals.values())


def rel_rows(state: DiracState, p_min: int, p_max: int, routes, ctx: PrecisionCtx) -> list[RelRow]:
    """Tables along every requested route, merged by p.

    The downward two-term route only exists for p <= 1; for wider ranges it
    contributes the rows it can and is left out of the others.
    """
    rows = {p: RelRow(p) for p in range(p_min, p_max + 1)}
    for route in routes:
        top = min(p_max, SHABAEV_DOWN_TOP) if route is Route.shabaev_down else p_max
        if top < p_min:
            continue
        for t in generate_table(state, p_min, top, route, ctx):
            rows[t.p].triples[route] = t
            rows[t.p].residuals[route] = indint1_residual(state, t, ctx)
    return [rows[p] for p in sorted(rows)]


def _state_dict(state) -> dict:
    if isinstance(state, DiracState):
        return {"n_r": state.n_r, "kappa": state.kappa, "mu": str(state.mu), "beta": str(state.beta_scale)}
    return {"n": state.n, "l": state.l, "Z": str(state.Z), "a0": str(state.a0)}


def rel_csv(rows: list[RelRow], ctx: PrecisionCtx) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "route", "A", "B", "C", "indint1_residual"])
    for row in rows:
        for route, t in row.triples.items():
            w.writerow([row.p, route.value, fmt(t.A, ctx), fmt(t.B, ctx), fmt(t.C, ctx),
                        fmt_residual(row.residuals[route], ctx)])
    return buf.getvalue()


def rel_json(state: DiracState, rows: list[RelRow], ctx: PrecisionCtx) -> str:
    out = []
    for row in rows:
        routes = {
            route.value: {
                "A": fmt(t.A, ctx),
                "B": fmt(t.B, ctx),
                "C": fmt(t.C, ctx),
                "indint1_residual": fmt_residual(row.residuals[route], ctx),
            }
            for route, t in row.triples.items()
        }
        out.append({"p": row.p, "routes": routes, "indint1_residual": fmt_residual(row.max_residual, ctx)})
    doc = {"state": _state_dict(state), "bits": ctx.bits, "rows": out}
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# nonrelativistic


@dataclass
class NonrelRow:
    k: int
    values: dict = field(default_factory=dict)  # NonrelRoute -> value


def nonrel_rows(state: NonrelState, k_min: int, k_max: int, routes, ctx: PrecisionCtx) -> list[NonrelRow]:
    """One row per power; a route appears only where it is defined."""
    rows = []
    for k in range(k_min, k_max + 1):
        row = NonrelRow(k)
        for route in routes:
            if nonrel_covers(state, k, route):
                row.values[route] = moment(state, k, route, ctx).value
        rows.append(row)
    return rows


def nonrel_csv(rows: list[NonrelRow], ctx: PrecisionCtx) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "route", "value"])
    for row in rows:
        for route, v in row.values.items():
            w.writerow([row.k, route.value, fmt(v, ctx)])
    return buf.getvalue()


def nonrel_json(state: NonrelState, rows: list[NonrelRow], ctx: PrecisionCtx) -> str:
    out = [{"k": row.k, "routes": {r.value: fmt(v, ctx) for r, v in row.values.items()}} for row in rows]
    return json.dumps({"state": _state_dict(state), "bits": ctx.bits, "rows": out}, indent=2) + "\n"
