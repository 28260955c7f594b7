import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import ks_2samp, kstest, norm

from app.core.errors import ConfigurationError
from app.models import OUParams
from app.ou import (
    derive_seed,
    exact_step,
    generator,
    quadratic_variation,
    sample_path,
    sample_paths,
    stationary_sample,
    time_average_square,
    uniform_times,
)
from app.ou.process import OUPath, transition_coefficients, transition_moments


def test_exact_step_zero_dt_is_identity(ou_params):
    assert exact_step(0.3, 0.0, ou_params, 1.7) == 0.3
    x = np.array([0.1, -2.0])
    out = exact_step(x, 0.0, ou_params, np.array([5.0, 5.0]))
    np.testing.assert_array_equal(out, x)
    assert out is not x


def test_exact_step_without_noise_relaxes_to_mean():
    p = OUParams(mean_speed=2.0, reversion_rate=3.0, noise_amplitude=0.0)
    out = exact_step(5.0, 0.25, p, 0.9)
    assert out == pytest.approx(2.0 + 3.0 * math.exp(-0.75), rel=1e-15)


def test_exact_step_rejects_bad_input(ou_params):
    with pytest.raises(ValueError):
        exact_step(0.0, -1e-3, ou_params, 0.0)
    with pytest.raises(ValueError):
        exact_step(float("nan"), 1e-3, ou_params, 0.0)


@given(
    theta=st.floats(min_value=1e-6, max_value=100.0),
    dt=st.floats(min_value=1e-8, max_value=1.0),
)
@settings(max_examples=200, deadline=None)
def test_transition_coefficients_are_consistent(theta, dt):
    decay, var_factor, cov_factor = transition_coefficients(dt, theta)
    assert 0.0 < decay <= 1.0
    assert 0.0 < var_factor <= dt * (1.0 + 1e-12)
    assert 0.0 < cov_factor <= dt * (1.0 + 1e-12)
    # Cauchy-Schwarz for (I, dW)
    assert cov_factor * cov_factor <= var_factor * dt * (1.0 + 1e-9)


def test_exact_step_matches_transition_moments(ou_params):
    rng = generator(123)
    n = 200_000
    x0, dt = -0.4, 0.3
    samples = exact_step(np.full(n, x0), dt, ou_params, rng.standard_normal(n))
    mean, var = transition_moments(x0, dt, ou_params)
    se_mean = math.sqrt(var / n)
    assert abs(samples.mean() - mean) < 4.0 * se_mean
    se_var = var * math.sqrt(2.0 / (n - 1))
    assert abs(samples.var(ddof=1) - var) < 4.0 * se_var


def test_stationary_law_is_invariant_under_exact_steps(ou_params):
    rng = generator(7)
    x = stationary_sample(ou_params, rng, 100_000)
    for _ in range(20):
        x = exact_step(x, 0.1, ou_params, rng.standard_normal(x.size))
    s = ou_params.stationary_variance
    assert abs(x.mean() - ou_params.mean_speed) < 4.0 * math.sqrt(s / x.size)
    assert x.var() == pytest.approx(s, rel=0.02)


def test_stationary_sample_requires_reversion():
    p = OUParams(mean_speed=1.0, reversion_rate=0.0, noise_amplitude=1.0)
    with pytest.raises(ConfigurationError):
        stationary_sample(p, generator(0))


def test_sample_path_is_reproducible(ou_params):
    times = uniform_times(1.0, 0.01)
    a = sample_path(ou_params, times, seed=42)
    b = sample_path(ou_params, times, seed=42)
    c = sample_path(ou_params, times, seed=43)
    np.testing.assert_array_equal(a.values, b.values)
    np.testing.assert_array_equal(a.increments, b.increments)
    assert not np.array_equal(a.values, c.values)
    assert a.increments.shape == (times.size - 1,)
    assert a.horizon == pytest.approx(1.0)


def test_sample_path_arrays_are_read_only(ou_params):
    path = sample_path(ou_params, uniform_times(0.1, 0.01), seed=1)
    with pytest.raises(ValueError):
        path.values[0] = 0.0


def test_sample_paths_rows_match_single_paths(ou_params):
    times = uniform_times(0.5, 0.01)
    seeds = [derive_seed(9, i) for i in range(4)]
    ensemble = sample_paths(ou_params, times, seeds)
    for i, seed in enumerate(seeds):
        single = sample_path(ou_params, times, seed)
        np.testing.assert_allclose(ensemble.values[i], single.values, rtol=0, atol=1e-15)
        np.testing.assert_array_equal(ensemble.path(i).increments, single.increments)
    assert len(ensemble) == 4


def test_fixed_initial_value_and_nonuniform_grid(ou_params):
    times = np.array([0.0, 0.1, 0.15, 0.4, 1.0])
    path = sample_path(ou_params, times, seed=3, initial=2.5)
    assert path.values[0] == 2.5
    assert path.increments.shape == (4,)


def test_frozen_path_without_drift_or_noise():
    p = OUParams(mean_speed=1.0, reversion_rate=0.0, noise_amplitude=0.0)
    path = sample_path(p, uniform_times(1.0, 0.01), seed=0, initial=0.7)
    np.testing.assert_allclose(path.values, 0.7, rtol=0, atol=1e-12)


def test_wiener_mode_accumulates_increments():
    p = OUParams(mean_speed=5.0, reversion_rate=2.0, noise_amplitude=0.5)
    path = sample_path(p, uniform_times(1.0, 0.01), seed=11, initial="wiener")
    assert path.mode == "wiener"
    assert path.values[0] == 0.0
    np.testing.assert_allclose(path.values[1:], 0.5 * np.cumsum(path.increments), atol=1e-12)


def test_unit_noise_wiener_mode_is_the_brownian_path():
    p = OUParams(mean_speed=5.0, reversion_rate=2.0, noise_amplitude=1.0)
    path = sample_path(p, uniform_times(1.0, 0.01), seed=12, initial="wiener")
    np.testing.assert_array_equal(np.diff(path.values), path.increments)
    np.testing.assert_array_equal(path.values[1:], np.cumsum(path.increments))


def test_bad_time_grids_are_rejected(ou_params):
    with pytest.raises(ValueError):
        sample_path(ou_params, [0.1, 0.2], seed=0)
    with pytest.raises(ValueError):
        sample_path(ou_params, [0.0, 0.2, 0.2], seed=0)
    with pytest.raises(ValueError):
        uniform_times(1.0, 0.3)


def test_quadratic_variation_matches_sigma_squared(ou_params):
    """100 paths, dt = 1e-4, T = 1: within 2% of sigma^2 T."""
    times = uniform_times(1.0, 1e-4)
    seeds = [derive_seed(2024, i) for i in range(100)]
    ensemble = sample_paths(ou_params, times, seeds)
    qv = np.mean([quadratic_variation(ensemble.path(i)) for i in range(len(ensemble))])
    assert qv == pytest.approx(ou_params.noise_amplitude**2, rel=0.02)


def test_quadratic_variation_needs_two_points(ou_params):
    path = OUPath(times=[0.0], values=[1.0], increments=[], seed=0, params=ou_params)
    with pytest.raises(ValueError):
        quadratic_variation(path)


def test_wiener_time_average_grows_like_half_t():
    """(1/T) E int_0^T X^2 dt = sigma^2 T / 2 for X = sigma W."""
    p = OUParams(mean_speed=1.0, reversion_rate=1.0, noise_amplitude=1.0)
    horizons = np.array([1.0, 2.0, 4.0, 8.0])
    means = []
    for k, T in enumerate(horizons):
        seeds = [derive_seed(77 + k, i) for i in range(4000)]
        ensemble = sample_paths(p, uniform_times(T, 0.01), seeds, initial="wiener")
        means.append(np.mean([time_average_square(ensemble.path(i)) for i in range(len(ensemble))]))
    means = np.asarray(means)
    slope = float(np.dot(horizons, means) / np.dot(horizons, horizons))
    assert slope == pytest.approx(0.5, rel=0.05)


def test_derive_seed_is_stable_and_distinct():
    seeds = {derive_seed(1, i) for i in range(1000)}
    assert len(seeds) == 1000
    assert derive_seed(1, 5) == derive_seed(1, 5)
    assert derive_seed(1, 5) != derive_seed(2, 5)
    assert all(0 <= s < 2**64 for s in seeds)
    with pytest.raises(ValueError):
        derive_seed(-1, 0)


@given(
    x=st.floats(min_value=-5.0, max_value=5.0),
    theta=st.floats(min_value=1e-3, max_value=50.0),
    sigma=st.floats(min_value=0.0, max_value=3.0),
    dt1=st.floats(min_value=1e-4, max_value=2.0),
    dt2=st.floats(min_value=1e-4, max_value=2.0),
)
@settings(max_examples=200, deadline=None)
def test_two_exact_steps_compose_to_one(x, theta, sigma, dt1, dt2):
    p = OUParams(mean_speed=0.7, reversion_rate=theta, noise_amplitude=sigma)
    m1, v1 = transition_moments(x, dt1, p)
    m2, v2 = transition_moments(m1, dt2, p)
    decay2 = transition_coefficients(dt2, theta)[0]
    mean, var = transition_moments(x, dt1 + dt2, p)
    assert m2 == pytest.approx(mean, rel=1e-9, abs=1e-12)
    assert v1 * decay2**2 + v2 == pytest.approx(var, rel=1e-9, abs=1e-14)


def test_stationary_start_keeps_its_law_over_time(ou_params):
    seeds = [derive_seed(515, i) for i in range(4000)]
    ensemble = sample_paths(ou_params, uniform_times(5.0, 0.05), seeds)
    start, end = ensemble.values[:, 0], ensemble.values[:, -1]
    assert ks_2samp(start, end).pvalue > 1e-3
    law = norm(loc=ou_params.mean_speed, scale=math.sqrt(ou_params.stationary_variance))
    assert kstest(end, law.cdf).pvalue > 1e-3


def test_quadratic_variation_does_not_depend_on_the_mesh(ou_params):
    seeds = [derive_seed(606, i) for i in range(200)]
    means = []
    for dt in (1e-3, 5e-4):
        ensemble = sample_paths(ou_params, uniform_times(1.0, dt), seeds)
        means.append(np.mean([quadratic_variation(ensemble.path(i)) for i in range(len(ensemble))]))
    target = ou_params.noise_amplitude**2
    assert means[0] == pytest.approx(target, rel=0.02)
    assert means[1] == pytest.approx(target, rel=0.02)
    assert means[0] == pytest.approx(means[1], rel=0.02)
