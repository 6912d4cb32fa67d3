"""Brute-force oracle: explicit radial wavefunctions integrated numerically.

The Dirac-Coulomb radial functions are built from their terminating series

    F(r) = c r^(nu-1) e^(-a beta r) sum_k P_k (beta r)^k
    G(r) = c r^(nu-1) e^(-a beta r) sum_k Q_k (beta r)^k

whose coefficients follow from substituting the ansatz into the radial
Dirac equations (m = c = hbar = 1, V = -mu/r, lengths in units of 1/beta)

    (rF)' = -kappa F + (1 + eps + mu/r) (rG)
    (rG)' = +kappa G + (1 - eps - mu/r) (rF)

so nothing here depends on the Hahn-polynomial machinery it is used to
check.  The normalization is fixed analytically by a Gamma-function sum;
moments are then obtained by tanh-sinh quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import comb

from .closed_form import MomentTriple, Route
from .core import DiracState, NonrelState, PrecisionCtx, _mp_context, spectral, validate_power_range
from .errors import DivergentIntegral, QuadratureNonConvergence


class WavefunctionKind(str, Enum):
    dirac_FG = "dirac_FG"
    schroedinger_R = "schroedinger_R"


@dataclass(frozen=True)
class RadialWavefunction:
    """Polynomial-times-exponential radial function(s).

    Components are ``norm * r^power * exp(-decay * r) * sum_k coeffs[k] (scale r)^k``;
    ``small`` is None for the Schroedinger case.
    """

    state: object
    kind: WavefunctionKind
    normalization: object
    power: object
    decay: object
    scale: object
    large: tuple
    small: tuple | None

    def __call__(self, r):
        """Return (F, G) at r (G is None for the nonrelativistic case)."""
        x = self.scale * r
        x_ = -self.decay * r
        env = self.normalization * r**self.power * x_.context.exp(x_)
        f = env * _horner(self.large, x)
        if self.small is None:
            return f, None
        return f, env * _horner(self.small, x)


def _horner(coeffs, x):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def _frobenius(state: DiracState, ctx: PrecisionCtx):
    s = spectral(state, ctx)
    k, mu, nu, eps, a = s.kappa, s.mu, s.nu, s.eps, s.a
    P = [ctx.mp.one]
    # (nu + kappa) P_0 = mu Q_0; for kappa < 0 use the equivalent form without cancellation
    Q = [-mu / (nu - k)] if k < 0 else [(nu + k) / mu]
    for j in range(1, state.n_r + 1):
        r1 = a * P[-1] + (1 + eps) * Q[-1]
        r2 = a * Q[-1] + (1 - eps) * P[-1]
        m11, m12, m21, m22 = nu + j + k, -mu, mu, nu + j - k
        det = m11 * m22 - m12 * m21
        P.append((r1 * m22 - m12 * r2) / det)
        Q.append((m11 * r2 - m21 * r1) / det)
    return P, Q


def _gamma_norm(ctx: PrecisionCtx, power2: object, decay2: object, series: list[tuple]):
    """sum_{i,j} c_i c_j Gamma(power2 + i + j + 1) / decay2^(power2 + i + j + 1)
    for the products in ``series`` (each entry a coefficient list)."""
    m = ctx.mp
    total = m.zero
    for coeffs in series:
        for i, ci in enumerate(coeffs):
            for j, cj in enumerate(coeffs):
                e = power2 + i + j + 1
                total += ci * cj * m.gamma(e) / decay2**e
    return total


def dirac_wavefunction(state: DiracState, ctx: PrecisionCtx) -> RadialWavefunction:
    s = spectral(state, ctx)
    P, Q = _frobenius(state, ctx)
    # normalize in units beta = 1, then F(r) = beta^(3/2) f(beta r)
    integral = _gamma_norm(ctx, 2 * s.nu, 2 * s.a, [P, Q])
    beta = s.beta
    norm = beta ** (s.nu + ctx.mp.mpf(1) / 2) / ctx.mp.sqrt(integral)
    return RadialWavefunction(state, WavefunctionKind.dirac_FG, norm, s.nu - 1, s.a * beta, beta,
                              tuple(P), tuple(Q))


def schroedinger_wavefunction(state: NonrelState, ctx: PrecisionCtx) -> RadialWavefunction:
    n, l = state.n, state.l
    rho = 2 * ctx.real(state.Z) / (n * ctx.real(state.a0))
    deg = n - l - 1
    # generalized Laguerre L_deg^(2l+1) in powers of rho r
    lag = [ctx.real(Fraction((-1) ** i * comb(deg + 2 * l + 1, deg - i), math.factorial(i))) for i in range(deg + 1)]
    integral = _gamma_norm(ctx, 2 * l + 2, ctx.mp.one, [lag])  # in units of 1/rho
    norm = rho ** (l + ctx.mp.mpf(3) / 2) / ctx.mp.sqrt(integral)
    return RadialWavefunction(state, WavefunctionKind.schroedinger_R, norm, l, rho / 2, rho, tuple(lag), None)


def radial_FG(state: DiracState, r, ctx: PrecisionCtx):
    """Normalized (F, G) at radius r > 0."""
    r = ctx.real(r)
    if r <= 0:
        raise ValueError("r must be positive")
    return dirac_wavefunction(state, ctx)(r)


# ---------------------------------------------------------------------------
# tanh-sinh quadrature for vector integrands


@lru_cache(maxsize=256)
def _nodes(bits: int, t_max: float, level: int):
    """(1 - tanh(u), weight) pairs for the new abscissae of ``level``.

    1 - tanh(u) is evaluated directly so abscissae next to an endpoint keep
    full relative accuracy.
    """
    m = _mp_context(bits)
    h = m.mpf(2) ** -level
    pi2 = m.pi / 2
    out = []
    k, step = (1, 1) if level == 0 else (1, 2)
    while k * h <= t_max:
        t = k * h
        u = pi2 * m.sinh(t)
        out.append((2 / (m.exp(2 * u) + 1), pi2 * m.cosh(t) / m.cosh(u) ** 2))
        k += step
    return tuple(out)


def _tanh_sinh(f, lo, hi, ctx: PrecisionCtx, tol, t_max: float, min_level=3, max_level=12):
    """Integrate the vector-valued ``f`` over [lo, hi].

    Stops once two successive levels agree to ``tol`` relative to the
    largest component; the error of the returned level is then roughly the
    square of that change.  Returns (values, last change).
    """
    m = ctx.mp
    half = (hi - lo) / 2
    total = [m.pi / 2 * v for v in f(lo + half)]
    estimate, err = None, None
    for level in range(max_level + 1):
        for d, w in _nodes(ctx.bits, t_max, level):
            left, right = f(lo + half * d), f(hi - half * d)
            total = [s + w * (x + y) for s, x, y in zip(total, left, right)]
        new = [half * v / 2**level for v in total]
        if estimate is not None:
            err = max(abs(x - y) for x, y in zip(new, estimate))
            scale = max(abs(x) for x in new)
            if level >= min_level and err <= tol * scale:
                return new, err
        estimate = new
    raise QuadratureNonConvergence(
        f"tanh-sinh did not reach relative tolerance {m.nstr(tol, 3)} (last change {m.nstr(err, 3)})"
    )


def quad_digits(ctx: PrecisionCtx) -> int:
    """Advertised relative accuracy of the oracle in decimal digits: 30 at 256 bits."""
    return max(8, (30 * ctx.bits) // 256)


def _level_tol(ctx: PrecisionCtx):
    # convergence is quadratic in the level, so a change of 10^-d between
    # levels leaves an error near 10^-2d
    return ctx.mp.mpf(10) ** (-(quad_digits(ctx) // 2 + 3))


def _integrate_moments(wf: RadialWavefunction, p: int, combine, ctx: PrecisionCtx):
    """Integrate r^(p+2) x combine(F, G) on (0, infinity), truncated where negligible."""
    m = ctx.mp
    tol = _level_tol(ctx)
    lam2 = 2 * wf.decay
    exponent = p + 2 + 2 * wf.power  # behaviour r^exponent at the origin
    if exponent <= -1:
        raise DivergentIntegral(f"integrand ~ r^{m.nstr(exponent, 5)} at the origin")
    norm2 = wf.normalization**2
    large, small = wf.large, wf.small

    def f(r):
        x = wf.scale * r
        env = norm2 * r**exponent * m.exp(-lam2 * r)
        return combine(env, _horner(large, x), _horner(small, x) if small else None)

    def log_abs_env(r):
        x = wf.scale * r
        poly = _horner([abs(c) for c in large], x) + (_horner([abs(c) for c in small], x) if small else 0)
        return exponent * m.log(r) - lam2 * r + 2 * m.log(poly)

    # peak scale of r^exponent e^(-lam2 r) x r^2; the polynomial shifts it outward
    peak = (exponent + 2) / lam2
    ref = log_abs_env(peak)
    drop = (ctx.bits + 20) * math.log(2)
    r_cut = peak
    while True:
        r_cut *= 2
        if log_abs_env(r_cut) < ref - drop:
            break

    # tanh-sinh step range: the weight has to beat r^exponent near the origin
    gamma_ = min(float(exponent) + 1, 1.0)
    u_max = (ctx.bits * math.log(2) + 40) / (2 * gamma_)
    t_max = round(math.asinh(2 * u_max / math.pi), 2)

    total = None
    for lo, hi in ((m.zero, peak), (peak, 4 * peak), (4 * peak, max(r_cut, 8 * peak))):
        vals, _ = _tanh_sinh(f, lo, hi, ctx, tol, t_max)
        total = vals if total is None else [a + b for a, b in zip(total, vals)]
    return total


def quadrature_triple(state: DiracState, p: int, ctx: PrecisionCtx) -> MomentTriple:
    """(A_p, B_p, C_p) by numerical integration of the explicit wavefunctions."""
    if not validate_power_range(state, p):
        raise DivergentIntegral(f"integrals diverge at p={p} for {state}: need p > -1 - 2 nu")
    wf = dirac_wavefunction(state, ctx)

    def combine(env, F, G):
        FF, GG = F * F, G * G
        return (env * (FF + GG), env * (FF - GG), env * F * G)

    A, B, C = _integrate_moments(wf, p, combine, ctx)
    return MomentTriple(p, A, B, C, Route.quadrature)


def quadrature_nonrel(state: NonrelState, k: int, ctx: PrecisionCtx):
    """<r^k> = int r^(k+2) R_nl(r)^2 dr by numerical integration."""
    if k <= -2 * state.l - 3:
        raise DivergentIntegral(f"<r^{k}> diverges for l={state.l}")
    wf = schroedinger_wavefunction(state, ctx)
    (value,) = _integrate_moments(wf, k, lambda env, R, _: (env * R * R,), ctx)
    return value
