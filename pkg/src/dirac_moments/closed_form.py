"""Relativistic moments (A_p, B_p, C_p) from closed forms in Hahn polynomials.

A_p = int r^(p+2) (F^2 + G^2) dr,  B_p = int r^(p+2) (F^2 - G^2) dr,
C_p = int r^(p+2) F G dr

for the bound-state Dirac-Coulomb radial functions F (large) and G (small).
Two representations are available: one in h_{p+1}^(0,0), h_p^(1,1) valid for
p >= 0, and one in h_p^(0,0), h_{p-1}^(1,1) valid for p >= 1.  The radial
quantum number n_r plays the role of n in the polynomial arguments.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

from .core import DiracState, PrecisionCtx, spectral
from .errors import OutOfRange
from .hahn import hahn

log = logging.getLogger(__name__)


class Route(str, Enum):
    hahn_form = "hahn_form"
    chebyshev_form = "chebyshev_form"
    recurrence_mat1 = "recurrence_mat1"
    recurrence_mat2 = "recurrence_mat2"
    reduced_mat3 = "reduced_mat3"
    reduced_mat4 = "reduced_mat4"
    shabaev_up = "shabaev_up"
    shabaev_down = "shabaev_down"
    quadrature = "quadrature"


@dataclass(frozen=True)
class MomentTriple:
    p: int
    A: object
    B: object
    C: object
    route: Route

    def as_tuple(self):
        return (self.A, self.B, self.C)


def indint1_terms(state: DiracState, p: int, A, B, C, ctx: PrecisionCtx):
    """The three terms of (2k + e(p+1)) A - (2ek + p + 1) B - 4 mu C = 0."""
    s = spectral(state, ctx)
    k, eps, mu = s.kappa, s.eps, s.mu
    return ((2 * k + eps * (p + 1)) * A, -(2 * eps * k + p + 1) * B, -4 * mu * C)


def indint1_residual(state: DiracState, triple: MomentTriple, ctx: PrecisionCtx):
    """Relative residual of the linear dependence among A_p, B_p and C_p."""
    terms = indint1_terms(state, triple.p, ctx.real(triple.A), ctx.real(triple.B), ctx.real(triple.C), ctx)
    scale = max(abs(t) for t in terms)
    if scale == 0:
        return ctx.mp.zero
    return abs(sum(terms)) / scale


def _bits_lost(m, terms, total):
    big = max(abs(t) for t in terms)
    if big == 0:
        return 0
    if total == 0:
        return float("inf")
    return float(m.log(big / abs(total), 2))


def _guarded(fn, state: DiracState, p: int, ctx: PrecisionCtx, retry: bool):
    sums, lost = fn(state, p, ctx)
    if retry and lost > ctx.bits / 2:
        log.warning(
            "closed form at p=%d for %s lost %.0f of %d bits; re-evaluating at %d bits",
            p, state, lost, ctx.bits, 2 * ctx.bits,
        )
        sums, _ = fn(state, p, ctx.doubled())
        sums = tuple(ctx.real(v) for v in sums)
    return sums


def _split(d, big, small_is_plus: bool):
    """(plus, minus) with plus * minus = d, taking the small factor as d / big."""
    return (d / big, big) if small_is_plus else (big, d / big)


def _gap(s):
    # eps^2 kappa^2 - nu^2 = mu^2 - a^2 kappa^2 = a^2 n_r (n_r + 2 nu), free of cancellation
    return s.a**2 * s.n_r * (s.n_r + 2 * s.nu)


def _hahn_form(state: DiracState, p: int, ctx: PrecisionCtx):
    m = ctx.mp
    s = spectral(state, ctx)
    n, k, mu, nu, eps, a = s.n_r, s.kappa, s.mu, s.nu, s.eps, s.a

    h1 = hahn(0, 0, p + 1, n - 1, -1 - 2 * nu, ctx)
    h2 = hahn(1, 1, p, n - 1, -1 - 2 * nu, ctx)
    h3 = hahn(0, 0, p + 1, n, 1 - 2 * nu, ctx)

    ratio = m.mpf(p + 2) / (p + 1)
    d = _gap(s)
    # eps k + nu is O(mu^2) for kappa < 0, eps k - nu for kappa > 0
    plus, minus = _split(d, eps * k - nu, True) if k < 0 else _split(d, eps * k + nu, False)
    scale = (2 * a * s.beta) ** p

    a_terms = (a * k * plus * h1, -2 * ratio * mu * d * h2, a * k * minus * h3)
    b_terms = (a * plus * h1, -a * minus * h3)
    c_terms = (a * mu * plus * h1, -2 * ratio * k * d * h2, a * mu * minus * h3)

    sums = [sum(t) for t in (a_terms, b_terms, c_terms)]
    lost = max(_bits_lost(m, t, v) for t, v in zip((a_terms, b_terms, c_terms), sums))
    A = sums[0] / (4 * mu * nu**2 * scale)
    B = sums[1] / (4 * mu * nu * scale)
    C = sums[2] / (8 * mu * nu**2 * scale)
    return (A, B, C), lost


def _chebyshev_form(state: DiracState, p: int, ctx: PrecisionCtx):
    m = ctx.mp
    s = spectral(state, ctx)
    n, k, mu, nu, eps, a = s.n_r, s.kappa, s.mu, s.nu, s.eps, s.a

    g1 = hahn(0, 0, p, n - 1, -2 * nu, ctx)
    g2 = hahn(1, 1, p - 1, n - 1, -1 - 2 * nu, ctx)
    g3 = hahn(0, 0, p, n, -2 * nu, ctx)

    d = _gap(s)
    plus, minus = _split(d, mu - a * k, True) if k < 0 else _split(d, mu + a * k, False)
    scale = (2 * a * s.beta) ** p

    a_terms = (a * plus * g1, 2 * eps * d * g2, a * minus * g3)
    b_terms = (a * eps * plus * g1, 2 * d * g2, a * eps * minus * g3)
    # no factor eps here: with it C_p comes out too small by exactly eps
    c_terms = (a * plus * g1, -a * minus * g3)

    sums = [sum(t) for t in (a_terms, b_terms, c_terms)]
    lost = max(_bits_lost(m, t, v) for t, v in zip((a_terms, b_terms, c_terms), sums))
    A = sums[0] / (2 * a * mu * scale)
    B = sums[1] / (2 * a * mu * scale)
    C = sums[2] / (4 * mu * scale)
    return (A, B, C), lost


def triple_hahn(state: DiracState, p: int, ctx: PrecisionCtx, *, retry: bool = True) -> MomentTriple:
    """(A_p, B_p, C_p) from the representation in h_{p+1}^(0,0) and h_p^(1,1); p >= 0."""
    if p < 0:
        raise OutOfRange(f"this representation holds for p >= 0, got p={p}")
    A, B, C = _guarded(_hahn_form, state, p, ctx, retry)
    return MomentTriple(p, A, B, C, Route.hahn_form)


def triple_chebyshev(state: DiracState, p: int, ctx: PrecisionCtx, *, retry: bool = True) -> MomentTriple:
    """(A_p, B_p, C_p) from the representation in h_p^(0,0) and h_{p-1}^(1,1); p >= 1."""
    if p < 1:
        raise OutOfRange(f"this representation holds for p >= 1, got p={p}")
    A, B, C = _guarded(_chebyshev_form, state, p, ctx, retry)
    return MomentTriple(p, A, B, C, Route.chebyshev_form)
