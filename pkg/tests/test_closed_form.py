from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirac_moments import (
    DiracState,
    OutOfRange,
    PrecisionCtx,
    derive_parameters,
    indint1_residual,
    triple_chebyshev,
    triple_hahn,
)
from dirac_moments.closed_form import MomentTriple, Route

# (state, p) -> (A, B, C); computed by the Hahn form and matched to 40 digits by quadrature
FROZEN = {
    ((2, 1, "0.5"), 3): ("18128.22863095670002172299046295672022898",
                         "18089.81506377771152009339334807457607834",
                         "-155.0597723027850526100683420617739821716"),
    ((3, -1, "0.1"), 2): ("64526.42937764033815678199230229819961137",
                          "64521.18896703047170593230045375435863765",
                          "-239.4613634673474443153065580807921467927"),
}


def _close(x, y, tol):
    return abs(x - y) <= tol * max(abs(y), 1e-300)


@pytest.mark.parametrize("key", list(FROZEN))
def test_frozen_triples(ctx, key):
    (args, p), expected = key, FROZEN[key]
    state = DiracState(*args)
    for fn in (triple_hahn, triple_chebyshev):
        got = fn(state, p, ctx)
        for value, text in zip(got.as_tuple(), expected):
            assert _close(value, ctx.real(text), 1e-38)


def test_initial_vector_at_p0(ctx):
    state = DiracState(2, -3, "0.7")
    _, eps, a = derive_parameters(state, ctx)
    t = triple_hahn(state, 0, ctx)
    mu = ctx.real(state.mu)
    assert _close(t.A, 1, 1e-70)
    assert _close(t.B, eps, 1e-70)
    assert _close(t.C, -3 * a**2 / (2 * mu), 1e-70)


def test_ground_state_first_moment(ctx):
    # A_1 = (1 + 2 eps) / (2 beta mu) for n_r = 0, kappa = -1
    state = DiracState(0, -1, "0.3", beta_scale=Fraction(5, 2))
    _, eps, _ = derive_parameters(state, ctx)
    for fn in (triple_hahn, triple_chebyshev):
        assert _close(fn(state, 1, ctx).A, (1 + 2 * eps) / (2 * ctx.real(Fraction(5, 2)) * ctx.real("0.3")), 1e-70)


@settings(max_examples=40, deadline=None)
@given(k=st.integers(1, 4), frac=st.fractions(Fraction(1, 100), Fraction(99, 100)), p=st.integers(0, 7))
def test_nodeless_states_have_explicit_moments(k, frac, p):
    # with n_r = 0 the radial functions are a single power times an exponential:
    # A_p = (2 nu + 1)_p / (2 a beta)^p, B_p = eps A_p, C_p = C_0 A_p
    ctx = PrecisionCtx(256)
    state = DiracState(0, -k, frac * k)
    nu, eps, a = derive_parameters(state, ctx)
    A = ctx.mp.rf(2 * nu + 1, p) / (2 * a) ** p
    c0 = -k * a**2 / (2 * ctx.real(state.mu))
    fns = (triple_hahn, triple_chebyshev) if p >= 1 else (triple_hahn,)
    for fn in fns:
        t = fn(state, p, ctx)
        assert _close(t.A, A, 1e-55)
        assert _close(t.B, eps * A, 1e-55)
        assert _close(t.C, c0 * A, 1e-55)


def test_moments_scale_with_inverse_length(ctx):
    one = triple_hahn(DiracState(1, 2, "0.4"), 4, ctx)
    three = triple_hahn(DiracState(1, 2, "0.4", beta_scale=3), 4, ctx)
    for x, y in zip(one.as_tuple(), three.as_tuple()):
        assert _close(y * 3**4, x, 1e-70)


def test_representations_cover_their_ranges(ctx):
    state = DiracState(1, -1, "0.5")
    with pytest.raises(OutOfRange):
        triple_hahn(state, -1, ctx)
    with pytest.raises(OutOfRange):
        triple_chebyshev(state, 0, ctx)


def test_linear_dependence_residual(ctx):
    state = DiracState(4, 3, "2.2")
    t = triple_hahn(state, 5, ctx)
    assert indint1_residual(state, t, ctx) < 1e-65
    broken = MomentTriple(5, t.A, t.B, t.C * (1 + ctx.real("1e-6")), Route.hahn_form)
    assert indint1_residual(state, broken, ctx) > 1e-12


def test_heavy_cancellation_triggers_wider_evaluation(ctx, caplog):
    from dirac_moments.closed_form import _guarded

    seen = []

    def fake(state, p, c):
        seen.append(c.bits)
        return (c.real(1), c.real(2), c.real(3)), (c.bits * 0.75 if c.bits == 128 else 0)

    with caplog.at_level("WARNING"):
        out = _guarded(fake, DiracState(1, -1, "0.5"), 2, PrecisionCtx(128), retry=True)
    assert seen == [128, 256]
    assert out == (1, 2, 3)
    assert any("re-evaluating" in r.message for r in caplog.records)


def test_small_coupling_keeps_precision(ctx):
    # the closed-form sums do not cancel as mu -> 0, so 64 bits stay accurate
    state = DiracState(3, -2, "0.00001")
    low = triple_hahn(state, 3, PrecisionCtx(64))
    ref = triple_hahn(state, 3, ctx)
    for x, y in zip(low.as_tuple(), ref.as_tuple()):
        assert _close(x, y, 1e-15)
