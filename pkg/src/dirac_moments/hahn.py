"""Hahn polynomials h_m^(alpha,beta)(x, N) of a discrete variable.

h_m = (1-N)_m (beta+1)_m / m! * 3F2(-m, alpha+beta+m+1, -x; beta+1, 1-N; 1)

The lattice parameter N may be any real number (the relativistic moments
need N = -1 - 2*nu with irrational nu), and x need not be a lattice point.
Two evaluation paths are provided: the terminating series, which is the
reference, and upward recursion in the degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import PrecisionCtx
from .errors import DegenerateDenominator


@dataclass(frozen=True)
class HahnSpec:
    """Parameters of a single evaluation of h_m^(alpha, beta_w)(x, N).

    ``beta_w`` is the second weight exponent; it is unrelated to the physical
    inverse length carried by :class:`~dirac_moments.core.DiracState`.
    """

    alpha: object
    beta_w: object
    m: int
    x: object
    N: object

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 0:
            raise ValueError(f"degree must be a nonnegative integer, got {self.m!r}")


@dataclass(frozen=True)
class RecurrenceCoeffs:
    """Coefficients of x h_m = alpha_m h_{m+1} + beta_m h_m + gamma_m h_{m-1}."""

    alpha_m: object
    beta_m: object
    gamma_m: object

    def __post_init__(self):
        if self.alpha_m == 0:
            raise DegenerateDenominator("alpha_m vanishes; h_{m+1} is not determined by the recurrence")


def _num(value, ctx: PrecisionCtx | None):
    if ctx is not None:
        return ctx.real(value)
    if isinstance(value, int):
        return Fraction(value)
    return value


def hahn_series(spec: HahnSpec, ctx: PrecisionCtx):
    """Evaluate h_m by summing the terminating 3F2 series term by term."""
    al, be = ctx.real(spec.alpha), ctx.real(spec.beta_w)
    x, N = ctx.real(spec.x), ctx.real(spec.N)
    m = spec.m

    term = ctx.mp.mpf(1)
    total = term
    for k in range(m):
        num = (k - m) * (al + be + m + 1 + k) * (k - x)
        if num == 0:
            break
        d1, d2 = be + 1 + k, 1 - N + k
        if d1 == 0 or d2 == 0:
            raise DegenerateDenominator(
                f"Pochhammer denominator vanishes at k={k} before the series terminates"
            )
        term = term * num / (d1 * d2 * (k + 1))
        total += term

    prefactor = ctx.mp.mpf(1)
    for k in range(m):
        prefactor = prefactor * (1 - N + k) * (be + 1 + k) / (k + 1)
    return prefactor * total


def coeffs(spec: HahnSpec, ctx: PrecisionCtx | None = None) -> RecurrenceCoeffs:
    """Three-term recurrence coefficients at degree ``spec.m``.

    Without ``ctx`` the arithmetic follows the input types, so integer or
    Fraction parameters give exact rational coefficients.
    """
    al, be, N = _num(spec.alpha, ctx), _num(spec.beta_w, ctx), _num(spec.N, ctx)
    m = spec.m
    s = al + be

    den_a = (s + 2 * m + 1) * (s + 2 * m + 2)
    if den_a == 0:
        raise DegenerateDenominator(f"alpha_m denominator vanishes at m={m}")
    alpha_m = (m + 1) * (s + m + 1) / den_a

    beta_m = (al - be + 2 * N - 2) / 4
    skew = (be**2 - al**2) * (s + 2 * N)
    if skew != 0:
        den_b = 4 * (s + 2 * m) * (s + 2 * m + 2)
        if den_b == 0:
            raise DegenerateDenominator(f"beta_m denominator vanishes at m={m}")
        beta_m = beta_m + skew / den_b

    num_c = (al + m) * (be + m) * (s + N + m) * (N - m)
    den_c = (s + 2 * m) * (s + 2 * m + 1)
    if num_c == 0:
        gamma_m = num_c * 0
    elif den_c == 0:
        if m == 0:
            # gamma_0 multiplies h_{-1} = 0
            gamma_m = num_c * 0
        else:
            raise DegenerateDenominator(f"gamma_m denominator vanishes at m={m}")
    else:
        gamma_m = num_c / den_c

    return RecurrenceCoeffs(alpha_m, beta_m, gamma_m)


def hahn_recurrence(spec: HahnSpec, ctx: PrecisionCtx):
    """Evaluate h_m by upward recursion in the degree from h_0 = 1, h_{-1} = 0."""
    x = ctx.real(spec.x)
    prev, cur = ctx.mp.zero, ctx.mp.one
    for k in range(spec.m):
        c = coeffs(HahnSpec(spec.alpha, spec.beta_w, k, spec.x, spec.N), ctx)
        prev, cur = cur, ((x - c.beta_m) * cur - c.gamma_m * prev) / c.alpha_m
    return cur


def hahn(alpha, beta_w, m: int, x, N, ctx: PrecisionCtx):
    """Shorthand for :func:`hahn_series` with positional parameters."""
    return hahn_series(HahnSpec(alpha, beta_w, m, x, N), ctx)


def chebyshev_t(m: int, x, N, ctx: PrecisionCtx):
    """Chebyshev polynomial of a discrete variable, t_m(x, N) = h_m^(0,0)(x, N)."""
    return hahn_series(HahnSpec(0, 0, m, x, N), ctx)
