"""State objects, spectral parameters and the shared precision context.

Couplings are stored as exact rationals (:class:`fractions.Fraction`) so a
state means the same thing at every working precision; conversion to
binary floating point happens only inside a :class:`PrecisionCtx`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Union

from mpmath import MPContext

from .errors import InvalidState

Number = Union[int, float, str, Fraction]

#: CODATA 2018 fine-structure constant.
ALPHA_FSC = Fraction("7.2973525693e-3")


def as_fraction(value) -> Fraction:
    """Exact rational from an int, decimal string, float or Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(value)
    # mpf and friends: go through their exact binary representation
    man, exp = value.man_exp
    return Fraction(man) * Fraction(2) ** exp


@lru_cache(maxsize=None)
def _mp_context(bits: int) -> MPContext:
    ctx = MPContext()
    ctx.prec = bits
    return ctx


@dataclass(frozen=True)
class PrecisionCtx:
    """Working precision in bits and a relative comparison tolerance.

    Each instance owns an independent mpmath context, so evaluations at
    different precisions never touch the global ``mpmath.mp`` state.
    """

    bits: int = 256
    rel_tol: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if not isinstance(self.bits, int) or self.bits < 64:
            raise ValueError(f"bits must be an integer >= 64, got {self.bits!r}")
        if self.rel_tol is None:
            object.__setattr__(self, "rel_tol", 2.0 ** (-self.bits / 4))
        if not 0 < self.rel_tol < 1:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol!r}")

    @property
    def mp(self) -> MPContext:
        return _mp_context(self.bits)

    def real(self, value):
        """Convert ``value`` to an mpf of this context (exact for rationals)."""
        if isinstance(value, Fraction):
            return self.mp.mpf(value.numerator) / value.denominator
        return self.mp.mpf(value)

    def doubled(self) -> "PrecisionCtx":
        return PrecisionCtx(bits=2 * self.bits, rel_tol=self.rel_tol)

    @property
    def digits(self) -> int:
        """Decimal digits used when serializing numbers at this precision."""
        return math.ceil(self.bits * 0.30103)


@dataclass(frozen=True)
class DiracState:
    """Bound state of the Dirac-Coulomb problem.

    ``n_r`` is the radial quantum number, ``kappa`` the relativistic angular
    quantum number, ``mu`` the coupling alpha*Z and ``beta_scale`` the inverse
    length m*c/hbar (1 in natural units).
    """

    n_r: int
    kappa: int
    mu: Fraction
    beta_scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "mu", as_fraction(self.mu))
        object.__setattr__(self, "beta_scale", as_fraction(self.beta_scale))
        if not isinstance(self.n_r, int) or self.n_r < 0:
            raise InvalidState(f"n_r must be a nonnegative integer, got {self.n_r!r}")
        if not isinstance(self.kappa, int) or self.kappa == 0:
            raise InvalidState(f"kappa must be a nonzero integer, got {self.kappa!r}")
        if self.n_r == 0 and self.kappa > 0:
            raise InvalidState(f"no n_r=0 state exists for kappa={self.kappa} > 0")
        if not 0 < self.mu < abs(self.kappa):
            raise InvalidState(f"need 0 < mu < |kappa|, got mu={float(self.mu)!r}, kappa={self.kappa}")
        if self.beta_scale <= 0:
            raise InvalidState("beta_scale must be positive")

    @classmethod
    def from_charge(cls, n_r: int, kappa: int, Z: Number, alpha_fsc: Number = ALPHA_FSC,
                    beta_scale: Number = 1) -> "DiracState":
        """State with mu = Z * alpha_fsc."""
        return cls(n_r, kappa, as_fraction(Z) * as_fraction(alpha_fsc), as_fraction(beta_scale))

    @property
    def j(self) -> Fraction:
        return Fraction(2 * abs(self.kappa) - 1, 2)

    @property
    def nu_squared(self) -> Fraction:
        return self.kappa**2 - self.mu**2

    def key(self) -> tuple:
        return (self.n_r, self.kappa, self.mu, self.beta_scale)


@dataclass(frozen=True)
class NonrelState:
    """Nonrelativistic hydrogenic level (n, l) with nuclear charge Z and Bohr radius a0."""

    n: int
    l: int
    Z: Fraction = Fraction(1)
    a0: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "Z", as_fraction(self.Z))
        object.__setattr__(self, "a0", as_fraction(self.a0))
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidState(f"n must be a positive integer, got {self.n!r}")
        if not isinstance(self.l, int) or not 0 <= self.l < self.n:
            raise InvalidState(f"need 0 <= l < n, got l={self.l!r}, n={self.n}")
        if self.Z <= 0 or self.a0 <= 0:
            raise InvalidState("Z and a0 must be positive")


class Spectral(NamedTuple):
    """All numeric parameters of a Dirac state at one working precision."""

    n_r: int
    kappa: int
    mu: object
    nu: object
    eps: object
    a: object
    beta: object


def spectral(state: DiracState, ctx: PrecisionCtx) -> Spectral:
    m = ctx.mp
    mu = ctx.real(state.mu)
    nu = m.sqrt(ctx.real(state.nu_squared))
    big_n = m.sqrt((state.n_r + nu) ** 2 + mu**2)
    eps = (state.n_r + nu) / big_n
    # a = mu / N avoids the cancellation in sqrt(1 - eps^2) for small mu
    a = mu / big_n
    return Spectral(state.n_r, state.kappa, mu, nu, eps, a, ctx.real(state.beta_scale))


def derive_parameters(state: DiracState, ctx: PrecisionCtx):
    """Return ``(nu, eps, a)`` for ``state`` at ``ctx`` precision.

    nu = sqrt(kappa^2 - mu^2), eps = (n_r + nu) / sqrt((n_r + nu)^2 + mu^2)
    and a = sqrt(1 - eps^2).
    """
    s = spectral(state, ctx)
    return s.nu, s.eps, s.a


def validate_power_range(state: DiracState, p: int) -> bool:
    """True iff the radial integrals with weight r^(p+2) converge at the origin.

    The condition p > -1 - 2*nu is checked in exact arithmetic.
    """
    if p >= -1:
        return True
    return 4 * state.nu_squared > (p + 1) ** 2
