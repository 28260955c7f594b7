import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.background import delta_inequality_margin
from app.bounds import (
    bounds_report,
    expected_Y_rate,
    large_noise_bound,
    mean_bound,
    mean_bound_general,
    second_moment_bound,
    second_moment_polynomial,
)
from app.core.errors import ConfigurationError, HypothesisViolationError
from app.diagnostics.energy import y_integrand, y_noise_rate
from app.models import BackgroundParams, FlowConfig, Geometry, OUParams
from app.ou import generator, stationary_sample


def _flow(u=1.0, theta=1.0, sigma=1.0, nu=0.5, h=1.0, length=1.0, background=None) -> FlowConfig:
    return FlowConfig(
        geometry=Geometry(length=length, height=h),
        viscosity=nu,
        ou=OUParams(mean_speed=u, reversion_rate=theta, noise_amplitude=sigma),
        background=background,
    )


def test_worked_point(worked_flow):
    assert mean_bound(worked_flow) == pytest.approx(124.0, rel=1e-14)
    assert mean_bound_general(worked_flow) == pytest.approx(124.0, rel=1e-12)
    assert second_moment_bound(worked_flow) == pytest.approx(1_643_690.0, rel=1e-12)


@pytest.mark.parametrize("u,h", [(1.0, 1.0), (2.0, 1.0), (0.5, 3.0)])
def test_deterministic_limits(u, h):
    cfg = _flow(u=u, h=h, sigma=0.0, nu=0.1 * u * h)
    assert mean_bound(cfg) == pytest.approx(32.0 * u**3 / h, rel=1e-12)
    assert mean_bound_general(cfg) == pytest.approx(32.0 * u**3 / h, rel=1e-12)
    assert second_moment_bound(cfg) == pytest.approx(24640.0 * u**6 / h**2, rel=1e-12)
    assert second_moment_polynomial(cfg) == pytest.approx(24640.0 * u**6 / h**2, rel=1e-12)


@given(
    u=st.floats(min_value=0.1, max_value=10.0),
    theta=st.floats(min_value=0.05, max_value=20.0),
    sigma=st.floats(min_value=0.0, max_value=5.0),
    re=st.floats(min_value=1.01, max_value=1e4),
    h=st.floats(min_value=0.1, max_value=10.0),
)
@settings(max_examples=200, deadline=None)
def test_two_forms_agree_for_default_background(u, theta, sigma, re, h):
    cfg = _flow(u=u, theta=theta, sigma=sigma, nu=u * h / re, h=h)
    assert mean_bound(cfg) == pytest.approx(mean_bound_general(cfg), rel=1e-12)
    assert second_moment_bound(cfg) == pytest.approx(second_moment_polynomial(cfg), rel=1e-12)


@pytest.mark.parametrize("nu", [1.0, 2.0])
def test_reynolds_at_most_one_is_rejected(nu):
    cfg = _flow(nu=nu)
    for evaluator in (mean_bound, mean_bound_general, second_moment_bound, second_moment_polynomial):
        with pytest.raises(HypothesisViolationError, match="Re"):
            evaluator(cfg)


def test_inadmissible_background_is_rejected():
    wide = BackgroundParams(a=0.9, b=1.0, length=1.0, height=1.0)
    with pytest.raises(HypothesisViolationError, match="nu\\*sqrt"):
        mean_bound(_flow(nu=0.5, background=wide))


def test_driftless_wall_is_rejected():
    with pytest.raises(ConfigurationError):
        mean_bound(_flow(theta=0.0))


def test_bounds_grow_with_noise():
    sigmas = np.linspace(0.0, 3.0, 13)
    means = [mean_bound(_flow(sigma=s)) for s in sigmas]
    seconds = [second_moment_bound(_flow(sigma=s)) for s in sigmas]
    assert np.all(np.diff(means) > 0.0)
    assert np.all(np.diff(seconds) > 0.0)


def test_second_moment_dominates_squared_mean_bound_at_zero_noise():
    cfg = _flow(sigma=0.0, nu=0.1)
    assert second_moment_bound(cfg) >= mean_bound(cfg) ** 2


def test_large_noise_bound():
    cfg = _flow(u=2.0, theta=4.0, sigma=4.0, h=2.0)
    # Ut^2 = sigma^2 / theta = 4
    assert large_noise_bound(cfg) == pytest.approx((8.0 + 8.0 + 8.0) / 2.0)
    with pytest.raises(ConfigurationError):
        large_noise_bound(_flow(u=-1.0))


def test_expected_y_rate_deterministic_wall():
    cfg = _flow(sigma=0.0, nu=0.1, length=2.0)
    # 4 L^2 (nu / A)(U^4 + B U^2) with A = nu U, B = U^2
    assert expected_Y_rate(cfg) == pytest.approx(4.0 * 4.0 * 2.0)


def test_bounds_report_collects_everything(worked_flow):
    report = bounds_report(worked_flow)
    assert report.reynolds == pytest.approx(2.0)
    assert report.mean_bound == pytest.approx(124.0)
    assert report.mean_bound_general == pytest.approx(report.mean_bound)
    assert report.kolmogorov_scale_U3_over_h == pytest.approx(1.0)
    assert report.large_noise_bound == pytest.approx(3.0)
    assert all(v > 0.0 for v in report.model_dump().values())


def test_mean_bound_diverges_as_reversion_vanishes():
    thetas = [1e-1, 1e-2, 1e-3, 1e-4]
    means = [mean_bound(_flow(theta=t)) for t in thetas]
    assert np.all(np.diff(means) > 0.0)
    # the sigma^4 / theta^2 term takes over: 2 * 6 sigma^4 / (h U theta^2)
    assert means[-1] * thetas[-1] ** 2 == pytest.approx(12.0, rel=1e-3)


@pytest.mark.parametrize("lam,mu", [(2.0, 1.0), (1.0, 3.0), (0.5, 4.0), (3.0, 0.25)])
def test_bounds_scale_with_velocity_and_length_units(lam, mu):
    base = _flow(u=1.3, theta=0.8, sigma=0.9, nu=0.2, h=1.1, length=0.7)
    scaled = _flow(
        u=lam * 1.3,
        theta=lam * 0.8 / mu,
        sigma=lam * np.sqrt(lam / mu) * 0.9,
        nu=lam * mu * 0.2,
        h=mu * 1.1,
        length=mu * 0.7,
    )
    factor = lam**3 / mu
    assert mean_bound(scaled) == pytest.approx(factor * mean_bound(base), rel=1e-10)
    assert mean_bound_general(scaled) == pytest.approx(factor * mean_bound_general(base), rel=1e-10)
    second = second_moment_bound(base)
    assert second_moment_bound(scaled) == pytest.approx(factor**2 * second, rel=1e-10)


@given(
    z=st.floats(min_value=-20.0, max_value=20.0),
    lam=st.floats(min_value=0.1, max_value=10.0),
    mu=st.floats(min_value=0.1, max_value=10.0),
)
@settings(max_examples=200, deadline=None)
def test_delta_margin_is_dimensionless(z, lam, mu):
    nu = 0.3
    bp = BackgroundParams.default(nu, 1.5, 1.0, 1.0)
    scaled = BackgroundParams.default(lam * mu * nu, lam * 1.5, mu, mu)
    margin = delta_inequality_margin(z, bp, nu)
    assert delta_inequality_margin(lam * z, scaled, lam * mu * nu) == pytest.approx(margin, abs=1e-12)
    assert 0.25 - 1e-12 <= margin <= 0.5


def test_expected_y_rate_matches_monte_carlo(worked_flow):
    x = stationary_sample(worked_flow.ou, generator(4242), 1_000_000)
    length = worked_flow.geometry.length
    estimate = y_noise_rate(worked_flow) + 4.0 * length**2 * float(np.mean(y_integrand(x, worked_flow)))
    assert estimate == pytest.approx(expected_Y_rate(worked_flow), rel=0.01)


def test_expected_y_rate_grows_with_noise():
    rates = [expected_Y_rate(_flow(sigma=s)) for s in np.linspace(0.0, 3.0, 13)]
    assert np.all(np.diff(rates) > 0.0)
