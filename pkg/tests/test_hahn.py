from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirac_moments import (
    DegenerateDenominator,
    HahnSpec,
    PrecisionCtx,
    chebyshev_t,
    coeffs,
    hahn_recurrence,
    hahn_series,
)


def _poch(a, k):
    out = Fraction(1)
    for i in range(k):
        out *= a + i
    return out


def exact_hahn(alpha, beta, m, x, N):
    """Independent rational evaluation straight from the Pochhammer definition."""
    alpha, beta, x, N = map(Fraction, (alpha, beta, x, N))
    total = Fraction(0)
    for k in range(m + 1):
        total += (_poch(-m, k) * _poch(alpha + beta + m + 1, k) * _poch(-x, k)
                  / (_poch(beta + 1, k) * _poch(1 - N, k) * factorial(k)))
    return _poch(1 - N, m) * _poch(beta + 1, m) / factorial(m) * total


def test_degree_zero_is_one(ctx):
    assert hahn_series(HahnSpec(1, 1, 0, "0.3", "-2.7"), ctx) == 1
    assert hahn_recurrence(HahnSpec(1, 1, 0, "0.3", "-2.7"), ctx) == 1


def test_linear_chebyshev(ctx):
    assert chebyshev_t(1, 3, 5, ctx) == 2
    for n, l in [(1, 0), (4, 2), (6, 5)]:
        assert chebyshev_t(1, n - l - 1, -2 * l - 1, ctx) == 2 * n


def test_frozen_values(ctx):
    # t_3(2, -7) = 3480 and h_2^(1,1)(3, -5) = 531, both checked against exact_hahn
    assert chebyshev_t(3, 2, -7, ctx) == 3480
    assert exact_hahn(0, 0, 3, 2, -7) == 3480
    assert hahn_series(HahnSpec(1, 1, 2, 3, -5), ctx) == exact_hahn(1, 1, 2, 3, -5) == 531


def test_exact_recurrence_coefficients():
    c = coeffs(HahnSpec(0, 0, 1, 0, Fraction(7, 3)))
    assert c.alpha_m == Fraction(1, 3)
    assert c.gamma_m == (Fraction(7, 3) ** 2 - 1) / 6
    assert coeffs(HahnSpec(1, 1, 0, 0, 5)).alpha_m == Fraction(1, 4)
    # h_{-1} = 0, so gamma_0 is irrelevant and reported as zero
    assert coeffs(HahnSpec(0, 0, 0, 0, 5)).gamma_m == 0


def test_recurrence_at_irrational_lattice(ctx):
    nu = ctx.mp.sqrt(ctx.real("0.75"))
    spec = HahnSpec(0, 0, 4, 2, -1 - 2 * nu)
    assert abs(hahn_series(spec, ctx) - hahn_recurrence(spec, ctx)) < 1e-70 * abs(hahn_series(spec, ctx))


def test_series_terminates_at_lattice_point(ctx):
    # x = 1 kills every term beyond k = 1, even for large m
    assert hahn_series(HahnSpec(0, 0, 9, 1, -3), ctx) == exact_hahn(0, 0, 9, 1, -3)


def test_second_difference_of_degree_two_is_constant(ctx):
    N = ctx.real("-4.3")
    vals = [chebyshev_t(2, x, N, ctx) for x in range(6)]
    second = [vals[i + 2] - 2 * vals[i + 1] + vals[i] for i in range(4)]
    assert max(abs(d - second[0]) for d in second) < 1e-60


def test_zero_pochhammer_denominator(ctx):
    with pytest.raises(DegenerateDenominator):
        hahn_series(HahnSpec(0, 0, 3, "0.5", 2), ctx)  # 1 - N + 1 = 0 at k = 1
    with pytest.raises(ValueError):
        HahnSpec(0, 0, -1, 0, -3)


@settings(max_examples=80, deadline=None)
@given(m=st.integers(0, 12), x=st.integers(0, 8), ab=st.sampled_from([0, 1]),
       N=st.fractions(min_value=-40, max_value=Fraction(-1, 3), max_denominator=97))
def test_series_matches_exact_rational(m, x, ab, N):
    ctx = PrecisionCtx(256)
    if N.denominator == 1:
        N -= Fraction(1, 7)  # keep 1 - N + k away from zero
    value = hahn_series(HahnSpec(ab, ab, m, x, N), ctx)
    exact = exact_hahn(ab, ab, m, x, N)
    assert abs(value - ctx.real(exact)) <= 1e-65 * max(1, abs(value))
    assert abs(hahn_recurrence(HahnSpec(ab, ab, m, x, N), ctx) - value) <= 1e-60 * max(1, abs(value))
