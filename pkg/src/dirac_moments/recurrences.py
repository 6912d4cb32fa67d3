"""Recurrences in the power p for the relativistic moments.

Three-term vector recurrences
    (2 a beta)^2 x_{p+1} = D_p x_p + E_p x_{p-1}
for x = (A, B, C) (``mat1``, ``mat2``) and x = (A, B) (``mat3``, ``mat4``),
Shabaev's two-term maps S_p: (A_{p-1}, B_{p-1}) -> (A_p, B_p) and their
inverses, and the matrices P_p, Q_p obtained by subtracting the ``mat3`` step
from the ``mat4`` step, which factor S_p = P_p^{-1} Q_p.

All matrix entries are rebuilt for each p from the state parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from .closed_form import MomentTriple, Route, indint1_residual, triple_chebyshev, triple_hahn
from .core import DiracState, PrecisionCtx, Spectral, spectral, validate_power_range
from .errors import (
    DegenerateCombination,
    DegenerateDenominator,
    DivergentIntegral,
    IdentityViolation,
    OutOfRange,
    SingularMatrix,
)


class StepKind(str, Enum):
    mat1 = "mat1"
    mat2 = "mat2"
    mat3 = "mat3"
    mat4 = "mat4"
    shabaev_S = "shabaev_S"
    shabaev_Sinv = "shabaev_Sinv"
    P = "P"
    Q = "Q"
    combined = "combined"


@dataclass(frozen=True)
class TransferStep:
    """One step of a recurrence in p.

    For three-term kinds ``prefactor * x_{p+1} = matrix @ x_p + previous @ x_{p-1}``.
    For the single-matrix kinds (``shabaev_S``, ``shabaev_Sinv``, ``P``, ``Q``)
    ``previous`` is None and the step is ``prefactor * y = matrix @ x``.
    """

    p: int
    kind: StepKind
    matrix: object
    prefactor: object
    previous: object = None

    @property
    def dim(self) -> int:
        return self.matrix.rows


@dataclass(frozen=True)
class InitialVectors:
    v_minus1: MomentTriple
    v_0: MomentTriple
    v_1: MomentTriple


def _params(state: DiracState, ctx: PrecisionCtx) -> Spectral:
    return spectral(state, ctx)


def _vec(m, values):
    return m.matrix([[v] for v in values])


def apply_step(step: TransferStep, x_p, x_pm1=None):
    """Propagate column vectors through ``step``; returns a tuple of entries."""
    out = step.matrix * x_p
    if step.previous is not None:
        if x_pm1 is None:
            raise ValueError("a three-term step needs the vector at p-1")
        out = out + step.previous * x_pm1
    return tuple(v / step.prefactor for v in out)


# ---------------------------------------------------------------------------
# initial data and the linear dependence


def initial_vectors(state: DiracState, ctx: PrecisionCtx) -> InitialVectors:
    """Exact (A, B, C) at p = -1, 0, 1."""
    s = _params(state, ctx)
    k, mu, nu, eps, a, beta = s.kappa, s.mu, s.nu, s.eps, s.a, s.beta
    a2 = a**2

    vm1 = MomentTriple(
        -1,
        beta / (mu * nu) * a2 * (eps * nu + mu * a),
        beta * a2 / mu,
        k / (2 * mu * nu) * a**3 * beta,
        Route.recurrence_mat1,
    )
    v0 = MomentTriple(0, ctx.mp.one, eps, k / (2 * mu) * a2, Route.recurrence_mat1)
    den = 2 * beta * mu * a2
    v1 = MomentTriple(
        1,
        (3 * eps * mu**2 - k * a2 * (1 + eps * k)) / den,
        (3 * eps**2 * mu**2 - a2 * (eps * k + nu**2)) / den,
        (2 * eps * k - 1) / (4 * beta),
        Route.recurrence_mat2,
    )
    return InitialVectors(vm1, v0, v1)


def c_from_ab(state: DiracState, p: int, A, B, ctx: PrecisionCtx):
    """C_p recovered from A_p and B_p through the linear dependence."""
    s = _params(state, ctx)
    k, eps, mu = s.kappa, s.eps, s.mu
    return ((2 * k + eps * (p + 1)) * A - (2 * eps * k + p + 1) * B) / (4 * mu)


# ---------------------------------------------------------------------------
# three-term steps


def mat1_step(state: DiracState, p: int, ctx: PrecisionCtx) -> TransferStep:
    if p < 0:
        raise OutOfRange(f"mat1 step is used for p >= 0, got {p}")
    m = ctx.mp
    s = _params(state, ctx)
    k, mu, eps, a, beta = s.kappa, s.mu, s.eps, s.a, s.beta
    four_nu2 = ctx.real(4 * state.nu_squared)
    q = m.mpf((p + 1) * (p + 2))
    r = m.mpf(p + 1) / (p + 2)
    w = p * (p + 2) * (four_nu2 - (p + 1) ** 2)

    coupling = m.matrix([
        [(w + 4 * k**2) / q, 4 * k * r, -8 * k * mu / q],
        [4 * k * r, (four_nu2 - p * (p + 2)) * r, -8 * mu * r],
        [2 * k * mu / q, 2 * mu * r, (w - 4 * mu**2) / q],
    ])
    d = 4 * beta * eps * mu * m.mpf(2 * p + 3) / (p + 2)
    return TransferStep(p, StepKind.mat1, d * m.eye(3), (2 * a * beta) ** 2, -coupling)


def mat2_step(state: DiracState, p: int, ctx: PrecisionCtx) -> TransferStep:
    if p < 1:
        raise OutOfRange(f"mat2 step needs p >= 1, got {p}")
    m = ctx.mp
    s = _params(state, ctx)
    mu, eps, a, beta = s.mu, s.eps, s.a, s.beta
    four_nu2 = ctx.real(4 * state.nu_squared)
    a2 = a**2
    lo = a2 * p * (p + 2)
    up = a2 * (p + 1) ** 2

    g = m.matrix([
        [4 * eps * mu * (up - 1) / lo, 4 * eps**2 * mu / lo, -4],
        [-4 * eps**2 * mu / lo, 4 * eps * mu * (up + eps**2) / lo, -4 * eps],
        [-1, eps, 4 * eps * mu],
    ])
    h = m.matrix([
        [(up - 1) / (a2 * (p + 2)), eps / (a2 * (p + 2)), 0],
        [-eps / (a2 * (p + 2)), (up + eps**2) / (a2 * (p + 2)), 0],
        [0, 0, p],
    ])
    current = beta * m.mpf(2 * p + 1) / (p + 1) * g
    previous = -(four_nu2 - p**2) / (p + 1) * h
    return TransferStep(p, StepKind.mat2, current, (2 * a * beta) ** 2, previous)


def mat3_step(state: DiracState, p: int, ctx: PrecisionCtx) -> TransferStep:
    if p < 1:
        raise OutOfRange(f"mat3 step needs p >= 1, got {p}")
    m = ctx.mp
    s = _params(state, ctx)
    k, mu, eps, a, beta = s.kappa, s.mu, s.eps, s.a, s.beta
    four_nu2 = ctx.real(4 * state.nu_squared)
    a2 = a**2
    pp = p * (p + 2)
    up = a2 * (p + 1) ** 2
    den = a2 * mu * pp
    u = 2 * k + eps * (p + 1)
    v = 2 * eps * k + p + 1

    g = m.matrix([
        [(4 * eps * mu**2 * (up - 1) - a2 * pp * u) / den, (4 * eps**2 * mu**2 + a2 * pp * v) / den],
        [-eps * (4 * eps * mu**2 + a2 * pp * u) / den, eps * (4 * mu**2 * (up + eps**2) + a2 * pp * v) / den],
    ])
    h = m.matrix([[up - 1, eps], [-eps, up + eps**2]])
    current = beta * m.mpf(2 * p + 1) / (p + 1) * g
    previous = -(four_nu2 - p**2) / (a2 * (p + 1) * (p + 2)) * h
    return TransferStep(p, StepKind.mat3, current, (2 * a * beta) ** 2, previous)


def mat4_step(state: DiracState, p: int, ctx: PrecisionCtx) -> TransferStep:
    if p < 0:
        raise OutOfRange(f"mat4 step is used for p >= 0, got {p}")
    m = ctx.mp
    s = _params(state, ctx)
    k, mu, eps, a, beta = s.kappa, s.mu, s.eps, s.a, s.beta
    four_nu2 = ctx.real(4 * state.nu_squared)
    q = m.mpf((p + 1) * (p + 2))
    r = m.mpf(p + 1) / (p + 2)

    coupling = m.matrix([
        [-p * (2 * eps * k - (p + 2) * (four_nu2 - (p + 1) ** 2)) / q,
         2 * k * (2 * eps * k - 1 + (p + 1) * (2 * p + 3)) / q],
        [-2 * eps * p * r, (4 * eps * k + four_nu2 - p**2) * r],
    ])
    d = 4 * beta * eps * mu * m.mpf(2 * p + 3) / (p + 2)
    return TransferStep(p, StepKind.mat4, d * m.eye(2), (2 * a * beta) ** 2, -coupling)


def _triple_vec(ctx, t: MomentTriple, dim: int):
    values = (t.A, t.B, t.C)[:dim]
    return _vec(ctx.mp, values)


def step_mat1(state: DiracState, p: int, t_p: MomentTriple, t_pm1: MomentTriple, ctx: PrecisionCtx) -> MomentTriple:
    """(A, B, C) at p+1 from p and p-1; seeded with the p = -1, 0 vectors."""
    step = mat1_step(state, p, ctx)
    A, B, C = apply_step(step, _triple_vec(ctx, t_p, 3), _triple_vec(ctx, t_pm1, 3))
    return MomentTriple(p + 1, A, B, C, Route.recurrence_mat1)


def step_mat2(state: DiracState, p: int, t_p: MomentTriple, t_pm1: MomentTriple, ctx: PrecisionCtx) -> MomentTriple:
    """(A, B, C) at p+1 from p and p-1; seeded with the p = 0, 1 vectors."""
    step = mat2_step(state, p, ctx)
    A, B, C = apply_step(step, _triple_vec(ctx, t_p, 3), _triple_vec(ctx, t_pm1, 3))
    return MomentTriple(p + 1, A, B, C, Route.recurrence_mat2)


def step_mat3(state: DiracState, p: int, ab_p, ab_pm1, ctx: PrecisionCtx):
    step = mat3_step(state, p, ctx)
    return apply_step(step, _vec(ctx.mp, ab_p), _vec(ctx.mp, ab_pm1))


def step_mat4(state: DiracState, p: int, ab_p, ab_pm1, ctx: PrecisionCtx):
    step = mat4_step(state, p, ctx)
    return apply_step(step, _vec(ctx.mp, ab_p), _vec(ctx.mp, ab_pm1))


# ---------------------------------------------------------------------------
# two-term maps


def shabaev_S(state: DiracState, p: int, ctx: PrecisionCtx) -> TransferStep:
    """S_p with (A_p, B_p) = S_p (A_{p-1}, B_{p-1}); needs p >= 0."""
    if p + 1 == 0:
        raise DegenerateDenominator("S_p is undefined at p = -1")
    m = ctx.mp
    s = _params(state, ctx)
    k, mu, eps, a, beta = s.kappa, s.mu, s.eps, s.a, s.beta
    four_nu2 = ctx.real(4 * state.nu_squared)
    q = p - 1  # the map is written with index q = p - 1
    ke = 2 * k * eps
    den = 4 * a**2 * (q + 2) * beta * mu

    mat = m.matrix([
        [-(q + 1) * (four_nu2 * eps + 2 * k * (q + 2) + eps * (q + 1) * (ke + q + 2)),
         4 * mu**2 * (q + 2) + (q + 1) * (ke + q + 1) * (ke + q + 2)],
        [-(q + 1) * (four_nu2 + 2 * k * eps * (2 * q + 3) + eps**2 * (q + 1) * (q + 2)),
         4 * mu**2 * eps * (q + 2) + (q + 1) * (ke + q + 1) * (2 * k + eps * (q + 2))],
    ])
    return TransferStep(p, StepKind.shabaev_S, mat / den, m.one)


def _gap(state: DiracState, p: int, ctx: PrecisionCtx):
    # 4 nu^2 - p^2 is rational, so it is formed before rounding
    return ctx.real(4 * state.nu_squared - p * p)


def shabaev_Sinv(state: DiracState, p: int, ctx: PrecisionCtx) -> TransferStep:
    """S_p^{-1} with (A_{p-1}, B_{p-1}) = S_p^{-1} (A_p, B_p)."""
    if p == 0:
        raise DegenerateDenominator("S_0 is singular; (A_-1, B_-1) cannot be reached from p = 0")
    gap = _gap(state, p, ctx)
    if gap == 0:
        raise DegenerateDenominator(f"4 nu^2 - p^2 vanishes at p={p}")
    m = ctx.mp
    s = _params(state, ctx)
    k, mu, eps, beta = s.kappa, s.mu, s.eps, s.beta
    four_nu2 = ctx.real(4 * state.nu_squared)
    ke = 2 * k * eps
    den = mu * gap

    mat = m.matrix([
        [(4 * mu**2 * eps * (p + 1) + p * (ke + p) * (2 * k + eps * (p + 1))) / p,
         -(4 * mu**2 * (p + 1) + p * (ke + p) * (ke + p + 1)) / p],
        [four_nu2 + 2 * k * eps * (2 * p + 1) + eps**2 * p * (p + 1),
         -(four_nu2 * eps + 2 * k * (p + 1) + eps * p * (ke + p + 1))],
    ])
    return TransferStep(p, StepKind.shabaev_Sinv, beta * mat / den, m.one)


def shabaev_up(state: DiracState, p: int, A_p, B_p, ctx: PrecisionCtx):
    """(A_{p+1}, B_{p+1}) from (A_p, B_p)."""
    if p < -1:
        raise OutOfRange(f"upward map is used for p >= -1, got {p}")
    return apply_step(shabaev_S(state, p + 1, ctx), _vec(ctx.mp, (A_p, B_p)))


def degeneracy_tol(ctx: PrecisionCtx):
    return ctx.mp.mpf(2) ** (-ctx.bits // 2)


def shabaev_down(state: DiracState, p: int, A_p, B_p, ctx: PrecisionCtx, *, _retry: bool = True):
    """(A_{p-1}, B_{p-1}) from (A_p, B_p).

    Near a resonance 4 nu^2 = p^2 the step is retried once at doubled
    precision before giving up.
    """
    if not validate_power_range(state, p - 1):
        raise DivergentIntegral(f"integrals diverge at p={p - 1} for {state}")
    if p == 0:
        raise DegenerateDenominator("S_0 is singular; (A_-1, B_-1) cannot be reached from p = 0")
    gap = _gap(state, p, ctx)
    if abs(gap) <= degeneracy_tol(ctx):
        if gap != 0 and _retry:
            wide = ctx.doubled()
            out = shabaev_down(state, p, wide.real(A_p), wide.real(B_p), wide, _retry=False)
            return tuple(ctx.real(v) for v in out)
        raise DegenerateDenominator(f"|4 nu^2 - p^2| = {ctx.mp.nstr(abs(gap), 5)} too small at p={p}")
    return apply_step(shabaev_Sinv(state, p, ctx), _vec(ctx.mp, (A_p, B_p)))


def det_S_formula(state: DiracState, p: int, ctx: PrecisionCtx):
    s = _params(state, ctx)
    return _gap(state, p, ctx) * p / (4 * (s.a * s.beta) ** 2 * (p + 1))


# ---------------------------------------------------------------------------
# P, Q and the factorization of S_p


class PQPair(NamedTuple):
    P: object
    Q: object
    detP: object
    detQ: object


def _core_factor(s: Spectral, p: int):
    return s.kappa * s.a**2 * (p + 2) * (2 * p + 1) + 2 * s.eps * s.mu**2


def det_P_formula(state: DiracState, p: int, ctx: PrecisionCtx):
    s = _params(state, ctx)
    return -8 * s.beta**2 * s.eps * _core_factor(s, p) / (ctx.mp.mpf(p * (p + 1)) * (p + 2) ** 2)


def det_Q_formula(state: DiracState, p: int, ctx: PrecisionCtx):
    s = _params(state, ctx)
    return -2 * s.eps * _gap(state, p, ctx) * _core_factor(s, p) / (s.a**2 * (p + 2) ** 2 * (p + 1) ** 2)


def _det2(mat):
    return mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]


def _max_abs(mat):
    return max(abs(v) for v in mat)


def build_PQ(state: DiracState, p: int, ctx: PrecisionCtx) -> PQPair:
    """P_p, Q_p with P_p (A_p, B_p) = Q_p (A_{p-1}, B_{p-1}).

    Both reduced steps share the left-hand side (2 a beta)^2 x_{p+1}, so their
    difference eliminates level p+1.
    """
    if p < 1:
        raise OutOfRange(f"P_p, Q_p need p >= 1, got {p}")
    s3, s4 = mat3_step(state, p, ctx), mat4_step(state, p, ctx)
    P = s4.matrix - s3.matrix
    Q = s3.previous - s4.previous
    detP, detQ = _det2(P), _det2(Q)
    # judged against rounding in the 2x2 determinant, not against rel_tol
    if abs(detP) <= degeneracy_tol(ctx) * _max_abs(P) ** 2:
        raise SingularMatrix(f"det P_{p} = {ctx.mp.nstr(detP, 5)} is numerically zero")
    return PQPair(P, Q, detP, detQ)


@dataclass(frozen=True)
class FactorizationReport:
    p: int
    factor_residual: object
    det_S_residual: object
    det_P_residual: object
    det_Q_residual: object
    inverse_residual: object

    def max_residual(self):
        return max(self.factor_residual, self.det_S_residual, self.det_P_residual,
                   self.det_Q_residual, self.inverse_residual)


def factorization_check(state: DiracState, p: int, ctx: PrecisionCtx, tol=None) -> FactorizationReport:
    """Check S_p = P_p^{-1} Q_p, S_p S_p^{-1} = 1 and the three determinant formulas.

    Raises :class:`IdentityViolation` if any relative residual exceeds ``tol``
    (default ``ctx.rel_tol``).
    """
    m = ctx.mp
    tol = ctx.rel_tol if tol is None else tol
    pq = build_PQ(state, p, ctx)
    S = shabaev_S(state, p, ctx).matrix
    S_inv = shabaev_Sinv(state, p, ctx).matrix

    factor = _max_abs(m.inverse(pq.P) * pq.Q - S) / _max_abs(S)
    inverse = _max_abs(S * S_inv - m.eye(2))
    det_s = _det2(S)
    report = FactorizationReport(
        p,
        factor,
        abs(det_s - det_S_formula(state, p, ctx)) / abs(det_s),
        abs(pq.detP - det_P_formula(state, p, ctx)) / abs(pq.detP),
        abs(pq.detQ - det_Q_formula(state, p, ctx)) / abs(pq.detQ),
        inverse,
    )
    worst = report.max_residual()
    if worst > tol:
        raise IdentityViolation(f"factorization identities fail at p={p} for {state}: residual {m.nstr(worst, 5)}",
                                residual=worst)
    return report


def combine_recurrences(alpha_p, beta_p, step1: TransferStep, step2: TransferStep) -> TransferStep:
    """Weighted mix of two three-term recurrences valid at the same p.

    Each parent is normalized to unit prefactor, so the result is
    x_{p+1} = D x_p + E x_{p-1} with D, E the (alpha_p, beta_p)-weighted
    averages of the parents' matrices.
    """
    if step1.p != step2.p:
        raise ValueError(f"steps are at different powers: {step1.p} vs {step2.p}")
    if step1.dim != step2.dim or step1.previous is None or step2.previous is None:
        raise ValueError("both parents must be three-term steps of the same dimension")
    total = alpha_p + beta_p
    if total == 0:
        raise DegenerateCombination(
            "alpha_p + beta_p = 0 removes the p+1 level; this is the P/Q construction (see build_PQ)"
        )
    d = (alpha_p * step1.matrix / step1.prefactor + beta_p * step2.matrix / step2.prefactor) / total
    e = (alpha_p * step1.previous / step1.prefactor + beta_p * step2.previous / step2.prefactor) / total
    return TransferStep(step1.p, StepKind.combined, d, 1, e)


# ---------------------------------------------------------------------------
# tables

# lowest power each route produces on its own; lower powers come from the
# downward two-term chain
ROUTE_START = {
    Route.hahn_form: 0,
    Route.chebyshev_form: 1,
    Route.recurrence_mat1: -1,
    Route.recurrence_mat2: 0,
    Route.reduced_mat3: 0,
    Route.reduced_mat4: -1,
    Route.shabaev_up: 0,
}
SHABAEV_DOWN_TOP = 1


def route_covers(state: DiracState, route: Route | str, p: int) -> bool:
    """Whether ``route`` evaluates power ``p`` natively (no downward fill)."""
    route = Route(route)
    if not validate_power_range(state, p):
        return False
    if route is Route.quadrature:
        return True
    if route is Route.shabaev_down:
        return p <= SHABAEV_DOWN_TOP
    return p >= ROUTE_START[route]


def _upward(state: DiracState, route: Route, p_max: int, ctx: PrecisionCtx) -> dict[int, MomentTriple]:
    out: dict[int, MomentTriple] = {}
    start = ROUTE_START[route]
    if p_max < start:
        return out
    if route is Route.hahn_form:
        return {p: triple_hahn(state, p, ctx) for p in range(start, p_max + 1)}
    if route is Route.chebyshev_form:
        return {p: triple_chebyshev(state, p, ctx) for p in range(start, p_max + 1)}

    iv = initial_vectors(state, ctx)

    def tag(t: MomentTriple) -> MomentTriple:
        return MomentTriple(t.p, t.A, t.B, t.C, route)

    if route in (Route.recurrence_mat1, Route.recurrence_mat2):
        lo, hi = (iv.v_minus1, iv.v_0) if route is Route.recurrence_mat1 else (iv.v_0, iv.v_1)
        stepper = step_mat1 if route is Route.recurrence_mat1 else step_mat2
        out[lo.p], out[hi.p] = tag(lo), tag(hi)
        prev, cur = lo, hi
        for p in range(hi.p, p_max):
            prev, cur = cur, stepper(state, p, cur, prev, ctx)
            out[cur.p] = cur
    elif route in (Route.reduced_mat3, Route.reduced_mat4, Route.shabaev_up):
        if route is Route.reduced_mat4:
            seeds = [iv.v_minus1, iv.v_0]
        elif route is Route.reduced_mat3:
            seeds = [iv.v_0, iv.v_1]
        else:
            seeds = [iv.v_0]
        ab = {t.p: (t.A, t.B) for t in seeds}
        top = seeds[-1].p
        for p in range(top, p_max):
            if route is Route.shabaev_up:
                ab[p + 1] = shabaev_up(state, p, *ab[p], ctx)
            elif route is Route.reduced_mat3:
                ab[p + 1] = step_mat3(state, p, ab[p], ab[p - 1], ctx)
            else:
                ab[p + 1] = step_mat4(state, p, ab[p], ab[p - 1], ctx)
        for p, (A, B) in ab.items():
            out[p] = MomentTriple(p, A, B, c_from_ab(state, p, A, B, ctx), route)
    else:
        raise ValueError(f"{route} is not an upward route")
    return {p: t for p, t in out.items() if p <= p_max}


def _downward(state: DiracState, p_min: int, top: MomentTriple | None, ctx: PrecisionCtx) -> dict[int, MomentTriple]:
    """Shabaev downward chain: p = 1, 0 from the p = 1 value, p = -1 from the
    initial vector, then down to ``p_min``."""
    iv = initial_vectors(state, ctx)
    out: dict[int, MomentTriple] = {}

    def emit(p, A, B):
        out[p] = MomentTriple(p, A, B, c_from_ab(state, p, A, B, ctx), Route.shabaev_down)

    v1 = top if top is not None else iv.v_1
    emit(1, v1.A, v1.B)
    emit(0, *shabaev_down(state, 1, v1.A, v1.B, ctx))
    emit(-1, iv.v_minus1.A, iv.v_minus1.B)
    for p in range(-1, p_min, -1):
        emit(p - 1, *shabaev_down(state, p, out[p].A, out[p].B, ctx))
    return out


def guard_bits(state: DiracState) -> int:
    """Extra working bits for chains in p.

    The recurrence maps amplify rounding by roughly mu^-4 (measured: about
    4 log2(1/mu) + 8 bits lost, independent of the working precision).
    """
    mu = state.mu / abs(state.kappa)
    return 16 + (4 * math.ceil(math.log2(1 / mu)) if mu < 1 else 0)


def generate_table(state: DiracState, p_min: int, p_max: int, route: Route | str,
                   ctx: PrecisionCtx) -> list[MomentTriple]:
    """Triples for p_min <= p <= p_max along ``route``.

    Upward routes start from their seeds; powers below a route's first native
    power are filled by the downward two-term chain.  Every triple must
    satisfy the linear dependence to ``ctx.rel_tol`` or the table is rejected.
    """
    route = Route(route)
    if p_min > p_max:
        raise ValueError(f"p_min={p_min} exceeds p_max={p_max}")
    if not validate_power_range(state, p_min):
        raise DivergentIntegral(f"integrals diverge at p={p_min} for {state}: need p > -1 - 2 nu")

    values: dict[int, MomentTriple] = {}
    if route is Route.quadrature:
        from .oracle import quadrature_triple

        values = {p: quadrature_triple(state, p, ctx) for p in range(p_min, p_max + 1)}
    else:
        work = PrecisionCtx(ctx.bits + guard_bits(state), rel_tol=ctx.rel_tol)
        if route is Route.shabaev_down:
            if p_max > SHABAEV_DOWN_TOP:
                raise OutOfRange(f"the downward chain starts at p={SHABAEV_DOWN_TOP}; got p_max={p_max}")
            values = _downward(state, min(p_min, 0), None, work)
        else:
            values = _upward(state, route, p_max, work)
            if p_min < ROUTE_START[route]:
                top = values.get(1)
                for p, t in _downward(state, min(p_min, 0), top, work).items():
                    values.setdefault(p, t)
        values = {p: MomentTriple(p, ctx.real(t.A), ctx.real(t.B), ctx.real(t.C), t.route)
                  for p, t in values.items()}

    table = [values[p] for p in range(p_min, p_max + 1)]
    for t in table:
        res = indint1_residual(state, t, ctx)
        if res > ctx.rel_tol:
            raise IdentityViolation(f"linear dependence fails at p={t.p} on route {route.value}", residual=res)
    return table
