"""Nonrelativistic hydrogenic moments <r^k> by three independent routes.

* closed form through discrete Chebyshev polynomials t_k(n-l-1, -2l-1),
* the Kramers-Pasternack three-term recurrence in k,
* the Pasternack inversion relation mapping <r^(k-1)> to <r^(-k-2)>.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core import NonrelState, PrecisionCtx
from .errors import OutOfRange
from .hahn import chebyshev_t


class NonrelRoute(str, Enum):
    closed_form = "closed_form"
    inversion = "inversion"
    kp_recurrence = "kp_recurrence"
    quadrature = "quadrature"


@dataclass(frozen=True)
class NonrelMoment:
    """Value of <r^k>; ``k`` is the power of r, not the polynomial degree."""

    k: int
    value: object
    route: NonrelRoute


def _scale(state: NonrelState, ctx: PrecisionCtx):
    """n*a0/(2Z), the natural length of level n."""
    return state.n * ctx.real(state.a0) / (2 * ctx.real(state.Z))


def moment_closed(state: NonrelState, k: int, ctx: PrecisionCtx, branch: str = "positive") -> NonrelMoment:
    """Closed form through t_k(n-l-1, -2l-1).

    ``branch="positive"`` gives <r^(k-1)> for k >= 0; ``branch="negative"``
    gives <r^(-k-2)> for 0 <= k <= 2l and carries the extra factor
    (2l-k)!/(2l+k+1)!.
    """
    n, l = state.n, state.l
    if branch == "positive":
        if k < 0:
            raise OutOfRange(f"positive branch needs k >= 0, got {k}")
        t = chebyshev_t(k, n - l - 1, -2 * l - 1, ctx)
        value = t * _scale(state, ctx) ** (k - 1) / (2 * n)
        return NonrelMoment(k - 1, value, NonrelRoute.closed_form)
    if branch == "negative":
        if not 0 <= k <= 2 * l:
            raise OutOfRange(f"negative branch needs 0 <= k <= 2l = {2 * l}, got {k}")
        t = chebyshev_t(k, n - l - 1, -2 * l - 1, ctx)
        # the factorial ratio is what makes this branch consistent with inversion_map
        value = _factorial_ratio(l, k, ctx) * t / _scale(state, ctx) ** (k + 2) / (2 * n)
        return NonrelMoment(-k - 2, value, NonrelRoute.closed_form)
    raise ValueError(f"unknown branch {branch!r}")


def _factorial_ratio(l: int, k: int, ctx: PrecisionCtx):
    """(2l-k)!/(2l+k+1)! as the reciprocal of a short product."""
    ratio = ctx.mp.one
    for j in range(2 * l - k + 1, 2 * l + k + 2):
        ratio /= j
    return ratio


def closed_moment(state: NonrelState, power: int, ctx: PrecisionCtx) -> NonrelMoment:
    """<r^power> from whichever closed-form branch covers ``power``."""
    if power >= -1:
        return moment_closed(state, power + 1, ctx, "positive")
    return moment_closed(state, -power - 2, ctx, "negative")


def initial_moments(state: NonrelState, ctx: PrecisionCtx):
    """(<1/r>, <1>) = (Z / (a0 n^2), 1)."""
    inv_r = ctx.real(state.Z) / (ctx.real(state.a0) * state.n**2)
    return inv_r, ctx.mp.one


def kp_step(state: NonrelState, k: int, prev, prev2, ctx: PrecisionCtx):
    """One Kramers-Pasternack step: <r^k> from <r^(k-1)> and <r^(k-2)>."""
    if k < 1:
        raise OutOfRange(f"recurrence is stated for k >= 1, got {k}")
    n, l = state.n, state.l
    s = _scale(state, ctx)
    c1 = ctx.mp.mpf(2 * n * (2 * k + 1)) / (k + 1)
    c2 = ctx.mp.mpf(k * ((2 * l + 1) ** 2 - k**2)) / (k + 1)
    return c1 * s * prev - c2 * s**2 * prev2


def kp_chain(state: NonrelState, k_max: int, ctx: PrecisionCtx) -> dict[int, object]:
    """Moments <r^k> for k = -1..k_max by upward recursion."""
    inv_r, one = initial_moments(state, ctx)
    values = {-1: inv_r, 0: one}
    for k in range(1, k_max + 1):
        values[k] = kp_step(state, k, values[k - 1], values[k - 2], ctx)
    return {k: v for k, v in values.items() if k <= k_max}


def inversion_map(state: NonrelState, k: int, pos, ctx: PrecisionCtx):
    """<r^(-k-2)> from <r^(k-1)> via the Pasternack inversion, 0 <= k <= 2l."""
    l = state.l
    if not 0 <= k <= 2 * l:
        raise OutOfRange(f"inversion needs 0 <= k <= 2l = {2 * l}, got {k}")
    return (1 / _scale(state, ctx)) ** (2 * k + 1) * _factorial_ratio(l, k, ctx) * pos


def moment(state: NonrelState, power: int, route: NonrelRoute | str, ctx: PrecisionCtx) -> NonrelMoment:
    """<r^power> along ``route`` (quadrature lives in :mod:`dirac_moments.oracle`)."""
    route = NonrelRoute(route)
    if route is NonrelRoute.closed_form:
        return closed_moment(state, power, ctx)
    if route is NonrelRoute.kp_recurrence:
        if power < -1:
            raise OutOfRange("the recurrence starts from <1/r>; power must be >= -1")
        return NonrelMoment(power, kp_chain(state, power, ctx)[power], route)
    if route is NonrelRoute.inversion:
        k = -power - 2
        if not 0 <= k <= 2 * state.l:
            raise OutOfRange(f"inversion covers powers -2-2l..-2, got {power}")
        pos = kp_chain(state, max(k - 1, 0), ctx)[k - 1]
        return NonrelMoment(power, inversion_map(state, k, pos, ctx), route)
    if route is NonrelRoute.quadrature:
        from .oracle import quadrature_nonrel

        return NonrelMoment(power, quadrature_nonrel(state, power, ctx), route)
    raise ValueError(route)


def route_covers(state: NonrelState, power: int, route: NonrelRoute | str) -> bool:
    route = NonrelRoute(route)
    if route is NonrelRoute.closed_form:
        return power >= -2 - 2 * state.l
    if route is NonrelRoute.kp_recurrence:
        return power >= -1
    if route is NonrelRoute.inversion:
        return -2 - 2 * state.l <= power <= -2
    return power > -2 * state.l - 3
