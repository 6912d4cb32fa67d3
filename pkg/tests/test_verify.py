from fractions import Fraction

from dirac_moments import PrecisionCtx
from dirac_moments.verify import IDENTITIES, GridSpec, run_verify


def test_default_grid_passes_without_oracle():
    report = run_verify(GridSpec(oracle=False), PrecisionCtx(256))
    assert report.passed
    assert report.states == 28  # n_r = 0 admits only negative kappa
    assert set(report.identity_max) == set(IDENTITIES)
    assert max(report.identity_max.values()) < 1e-60
    assert report.max_route_disagreement < 1e-60


def test_low_precision_uses_looser_tolerance():
    grid = GridSpec(n_r=(0, 2), kappas=(-1, 2), p_max=4)
    report = run_verify(grid, PrecisionCtx(64))
    assert report.passed
    assert report.tolerance == 2.0**-16
    assert max(report.identity_max.values()) > 1e-40


def test_near_critical_coupling_is_skipped_not_failed():
    grid = GridSpec(n_r=(0,), kappas=(-1,), mus=(), mu_fracs=(Fraction(99, 100),), p_min=-2, p_max=2)
    report = run_verify(grid, PrecisionCtx(128))
    assert report.passed
    assert report.skips[0]["reason"] == "DivergentIntegral"
    assert "quadrature" in report.route_max


def test_report_json_round_trip():
    import json

    report = run_verify(GridSpec(n_r=(1,), kappas=(1,), p_max=2, oracle=False), PrecisionCtx(128))
    doc = json.loads(report.to_json())
    assert doc["passed"] is True
    assert doc["grid"]["kappa"] == [1]
    assert set(doc["identity_max_residual"]) == set(IDENTITIES)
