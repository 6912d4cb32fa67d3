"""Grid verification: every route, identity and the quadrature oracle at once.

The harness walks a grid of Dirac states, computes each route's table, and
records the worst relative disagreement with the Hahn-form closed form and
the worst residual of each identity.  Divergent powers are recorded as skips
rather than failures.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .closed_form import MomentTriple, Route, indint1_residual, triple_hahn
from .core import DiracState, PrecisionCtx, as_fraction, validate_power_range
from .errors import DivergentIntegral, IdentityViolation, InvalidState, MomentsError
from .oracle import quad_digits, quadrature_triple
from .recurrences import factorization_check, generate_table, shabaev_down, shabaev_up

IDENTITIES = ("indint1", "factorization", "det_S", "det_P", "det_Q", "up_down")


def rel_diff(x: MomentTriple, ref: MomentTriple):
    """Largest component difference relative to the largest reference component."""
    scale = max(abs(v) for v in ref.as_tuple())
    return max(abs(a - b) for a, b in zip(x.as_tuple(), ref.as_tuple())) / scale


@dataclass(frozen=True)
class GridSpec:
    """States to visit: n_r x kappa x coupling, and the range of powers."""

    n_r: tuple = (0, 1, 2, 3)
    kappas: tuple = (-2, -1, 1, 2)
    mus: tuple = (Fraction(1, 10), Fraction(1, 2))
    mu_fracs: tuple = ()  # couplings given as fractions of |kappa|
    p_min: int = 1
    p_max: int = 6
    oracle: bool = True

    def states(self) -> list[DiracState]:
        out = set()
        for n_r, k in itertools.product(self.n_r, self.kappas):
            couplings = list(self.mus) + [as_fraction(f) * abs(k) for f in self.mu_fracs]
            for mu in couplings:
                try:
                    out.add(DiracState(n_r, k, mu))
                except InvalidState:
                    continue  # n_r = 0 with kappa > 0, or mu >= |kappa|
        return sorted(out, key=DiracState.key)

    def describe(self) -> dict:
        return {
            "n_r": list(self.n_r),
            "kappa": list(self.kappas),
            "mu": [str(m) for m in self.mus],
            "mu_over_abs_kappa": [str(f) for f in self.mu_fracs],
            "p_min": self.p_min,
            "p_max": self.p_max,
            "oracle": self.oracle,
        }


@dataclass
class VerifyReport:
    grid: dict
    bits: int
    tolerance: float
    oracle_tolerance: float
    identity_max: dict = field(default_factory=lambda: {name: 0.0 for name in IDENTITIES})
    route_max: dict = field(default_factory=dict)
    skips: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    states: int = 0

    def note(self, table: dict, key: str, value) -> None:
        table[key] = max(table.get(key, 0.0), float(value))

    @property
    def max_route_disagreement(self) -> float:
        return max((v for k, v in self.route_max.items() if k != Route.quadrature.value), default=0.0)

    @property
    def passed(self) -> bool:
        if self.failures:
            return False
        if any(v > self.tolerance for v in self.identity_max.values()):
            return False
        for route, v in self.route_max.items():
            limit = self.oracle_tolerance if route == Route.quadrature.value else self.tolerance
            if v > limit:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "bits": self.bits,
            "tolerance": self.tolerance,
            "oracle_tolerance": self.oracle_tolerance,
            "grid": self.grid,
            "states": self.states,
            "identity_max_residual": {k: f"{v:.3e}" for k, v in self.identity_max.items()},
            "route_max_disagreement": {k: f"{v:.3e}" for k, v in sorted(self.route_max.items())},
            "skips": self.skips,
            "failures": self.failures,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _label(state: DiracState) -> str:
    return f"n_r={state.n_r} kappa={state.kappa} mu={state.mu}"


def _check_state(state: DiracState, grid: GridSpec, ctx: PrecisionCtx, report: VerifyReport) -> None:
    p_lo, p_hi = grid.p_min, grid.p_max
    if not validate_power_range(state, p_lo):
        report.skips.append({"state": _label(state), "p": p_lo, "reason": "DivergentIntegral"})
        p_lo = next((p for p in range(p_lo, p_hi + 1) if validate_power_range(state, p)), None)
        if p_lo is None:
            return

    # Hahn form for p >= 0; below that the exact initial vector and the downward chain
    reference = {p: triple_hahn(state, p, ctx) for p in range(max(p_lo, 0), p_hi + 1)}
    if p_lo < 0:
        for t in generate_table(state, p_lo, -1, Route.recurrence_mat1, ctx):
            reference[t.p] = t
    for route in Route:
        if route is Route.quadrature:
            continue
        top = min(p_hi, 1) if route is Route.shabaev_down else p_hi
        if top < p_lo:
            continue
        try:
            table = generate_table(state, p_lo, top, route, ctx)
        except IdentityViolation as exc:
            report.failures.append({"state": _label(state), "route": route.value, "error": str(exc)})
            continue
        for t in table:
            report.note(report.identity_max, "indint1", indint1_residual(state, t, ctx))
            if t.p in reference:
                report.note(report.route_max, route.value, rel_diff(t, reference[t.p]))

    for p in range(max(p_lo, 1), p_hi + 1):
        try:
            fr = factorization_check(state, p, ctx, tol=float("inf"))
        except MomentsError as exc:  # a singular P_p is a finding, not a crash
            report.failures.append({"state": _label(state), "p": p, "error": f"{type(exc).__name__}: {exc}"})
            continue
        report.note(report.identity_max, "factorization", fr.factor_residual)
        report.note(report.identity_max, "det_S", fr.det_S_residual)
        report.note(report.identity_max, "det_P", fr.det_P_residual)
        report.note(report.identity_max, "det_Q", fr.det_Q_residual)

        # up(down(x)) = x on the closed-form values
        A, B = reference[p].A, reference[p].B
        back = shabaev_up(state, p - 1, *shabaev_down(state, p, A, B, ctx), ctx)
        report.note(report.identity_max, "up_down", max(abs(back[0] - A), abs(back[1] - B)) / max(abs(A), abs(B)))

    if grid.oracle:
        for p in range(p_lo, p_hi + 1):
            report.note(report.route_max, Route.quadrature.value,
                        rel_diff(quadrature_triple(state, p, ctx), reference[p]))


def run_verify(grid: GridSpec, ctx: PrecisionCtx) -> VerifyReport:
    """Check every route and identity over ``grid``; states are visited in sorted order."""
    report = VerifyReport(
        grid=grid.describe(),
        bits=ctx.bits,
        tolerance=ctx.rel_tol,
        oracle_tolerance=10.0 ** (-quad_digits(ctx) + 2),
    )
    for state in grid.states():
        try:
            _check_state(state, grid, ctx, report)
        except DivergentIntegral as exc:
            report.skips.append({"state": _label(state), "reason": f"DivergentIntegral: {exc}"})
        report.states += 1
    return report
