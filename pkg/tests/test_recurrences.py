from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dirac_moments import (
    DegenerateCombination,
    DegenerateDenominator,
    DiracState,
    DivergentIntegral,
    IdentityViolation,
    OutOfRange,
    PrecisionCtx,
    generate_table,
    initial_vectors,
    triple_hahn,
)
from dirac_moments.closed_form import Route
from dirac_moments.recurrences import (
    apply_step,
    build_PQ,
    combine_recurrences,
    det_S_formula,
    factorization_check,
    guard_bits,
    mat3_step,
    mat4_step,
    route_covers,
    shabaev_down,
    shabaev_S,
    shabaev_up,
)
from dirac_moments.verify import rel_diff

UPWARD = [Route.recurrence_mat1, Route.recurrence_mat2, Route.reduced_mat3, Route.reduced_mat4,
          Route.shabaev_up, Route.chebyshev_form]

states = st.builds(
    lambda n_r, k, sign, frac: DiracState(n_r, (-1 if n_r == 0 else sign) * k, frac * k),
    st.integers(0, 5), st.integers(1, 3), st.sampled_from([-1, 1]),
    st.fractions(Fraction(1, 100), Fraction(95, 100), max_denominator=1000),
)


def test_initial_vectors_match_closed_form(ctx):
    state = DiracState(2, 2, "1.3")
    iv = initial_vectors(state, ctx)
    for t in (iv.v_0, iv.v_1):
        assert rel_diff(t, triple_hahn(state, t.p, ctx)) < 1e-70


@pytest.mark.parametrize("route", UPWARD)
def test_routes_reproduce_closed_form(ctx, route):
    state = DiracState(3, -2, "0.7")
    for t in generate_table(state, 0, 8, route, ctx):
        assert t.route is route or t.p < 1
        assert rel_diff(t, triple_hahn(state, t.p, ctx)) < 1e-65


@settings(max_examples=25, deadline=None)
@given(state=states, route=st.sampled_from(UPWARD))
def test_routes_agree_on_random_states(state, route):
    ctx = PrecisionCtx(256)
    for t in generate_table(state, 1, 6, route, ctx):
        assert rel_diff(t, triple_hahn(state, t.p, ctx)) < 1e-60


def test_downward_chain_matches_nodeless_formula(ctx):
    # n_r = 0: A_p = Gamma(2 nu + p + 1) / (Gamma(2 nu + 1) (2 a)^p) also for negative p
    state = DiracState(0, -3, "1.1")
    m = ctx.mp
    nu = m.sqrt(ctx.real(state.nu_squared))
    a = ctx.real(state.mu) / m.sqrt(nu**2 + ctx.real(state.mu) ** 2)
    for t in generate_table(state, -5, 1, Route.shabaev_down, ctx):
        expected = m.gamma(2 * nu + t.p + 1) / m.gamma(2 * nu + 1) / (2 * a) ** t.p
        assert abs(t.A - expected) < 1e-65 * expected


def test_up_then_down_is_identity(ctx):
    state = DiracState(1, 1, "0.4")
    for p in range(1, 7):
        t = triple_hahn(state, p, ctx)
        A, B = shabaev_up(state, p - 1, *shabaev_down(state, p, t.A, t.B, ctx), ctx)
        assert abs(A - t.A) < 1e-65 * abs(t.A)
        assert abs(B - t.B) < 1e-65 * abs(t.A)


@settings(max_examples=20, deadline=None)
@given(state=states, p=st.integers(1, 8))
def test_factorization_identities(state, p):
    report = factorization_check(state, p, PrecisionCtx(256), tol=1e-50)
    assert report.max_residual() < 1e-50


def test_det_S_matches_known_case(ctx):
    # ground state kappa = -1, mu = 1/2: a = 1/2, nu^2 = 3/4, so det S_2 = (3 - 4) 2 / (4 / 4 * 3)
    state = DiracState(0, -1, "0.5")
    S = shabaev_S(state, 2, ctx).matrix
    det = S[0, 0] * S[1, 1] - S[0, 1] * S[1, 0]
    assert abs(det - ctx.real(Fraction(-2, 3))) < 1e-70
    assert abs(det_S_formula(state, 2, ctx) - ctx.real(Fraction(-2, 3))) < 1e-70


def test_P_Q_relate_consecutive_levels(ctx):
    state = DiracState(2, -1, "0.6")
    pq = build_PQ(state, 3, ctx)
    t2, t3 = triple_hahn(state, 2, ctx), triple_hahn(state, 3, ctx)
    lhs = pq.P * ctx.mp.matrix([[t3.A], [t3.B]])
    rhs = pq.Q * ctx.mp.matrix([[t2.A], [t2.B]])
    assert max(abs(x - y) for x, y in zip(lhs, rhs)) < 1e-65 * abs(t3.A)


def test_combined_recurrence(ctx):
    state = DiracState(1, -2, "0.5")
    s3, s4 = mat3_step(state, 2, ctx), mat4_step(state, 2, ctx)
    mixed = combine_recurrences(ctx.real(3), ctx.real(-1), s3, s4)
    t1, t2, t3 = (triple_hahn(state, p, ctx) for p in (1, 2, 3))
    A, B = apply_step(mixed, ctx.mp.matrix([[t2.A], [t2.B]]), ctx.mp.matrix([[t1.A], [t1.B]]))
    assert abs(A - t3.A) < 1e-65 * abs(t3.A) and abs(B - t3.B) < 1e-65 * abs(t3.A)
    with pytest.raises(DegenerateCombination):
        combine_recurrences(ctx.real(1), ctx.real(-1), s3, s4)


def test_guards(ctx):
    near = DiracState(0, -1, "0.99")
    with pytest.raises(DivergentIntegral):
        generate_table(near, -2, 3, Route.recurrence_mat1, ctx)
    with pytest.raises(OutOfRange):
        generate_table(near, -1, 3, Route.shabaev_down, ctx)
    with pytest.raises(DegenerateDenominator):
        shabaev_down(near, 0, 1, 1, ctx)
    with pytest.raises(ValueError):
        generate_table(near, 3, 1, Route.hahn_form, ctx)
    assert not route_covers(near, Route.quadrature, -2)
    assert route_covers(near, Route.shabaev_down, 1) and not route_covers(near, Route.shabaev_down, 2)


def test_exact_resonance_blocks_down_step(ctx):
    # kappa = -5, mu = 3: 4 nu^2 = 64 = p^2 at p = 8
    state = DiracState(1, -5, 3)
    t = triple_hahn(state, 8, ctx)
    with pytest.raises(DegenerateDenominator):
        shabaev_down(state, 8, t.A, t.B, ctx)


def test_near_resonance_retries_at_double_precision(ctx):
    # 4 nu^2 - 1 is about 1e-18, below 2^-32 but resolvable at 128 bits.  The map
    # amplifies input error by 1/gap, so the inputs carry 256-bit accuracy here.
    state = DiracState(1, -1, Fraction(866025403784438647, 10**18))
    assert 0 < abs(4 * state.nu_squared - 1) < Fraction(1, 10**17)
    low = PrecisionCtx(64)
    t = triple_hahn(state, 1, ctx)
    A, B = shabaev_down(state, 1, t.A, t.B, low)
    assert A.context.prec == 64
    ref = triple_hahn(state, 0, ctx)
    assert abs(A - ref.A) < 1e-12 and abs(B - ref.B) < 1e-12


def test_table_rejects_broken_linear_dependence(monkeypatch, ctx):
    import dirac_moments.recurrences as rec

    original = rec.c_from_ab

    def skewed(state, p, A, B, c):
        return original(state, p, A, B, c) * (1 + c.real("1e-9"))

    monkeypatch.setattr(rec, "c_from_ab", skewed)
    with pytest.raises(IdentityViolation) as info:
        generate_table(DiracState(1, -1, "0.5"), 0, 3, Route.reduced_mat3, ctx)
    assert info.value.residual > ctx.rel_tol


def test_guard_bits_grow_as_coupling_shrinks():
    assert guard_bits(DiracState(1, -1, "0.5")) == 20
    assert guard_bits(DiracState(1, -1, "0.001")) > guard_bits(DiracState(1, -1, "0.01"))


def test_small_coupling_tables_are_fully_accurate():
    state = DiracState(2, 1, "0.00001")
    low, ref = PrecisionCtx(64), PrecisionCtx(512)
    for route in UPWARD:
        for t in generate_table(state, -1, 8, route, low):
            exact = generate_table(state, t.p, t.p, Route.recurrence_mat1, ref)[0]
            assert rel_diff(t, exact) < 1e-17
