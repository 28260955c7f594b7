import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.core.errors import ConfigurationError
from app.models import OUParams
from app.ou import generator, stationary_sample
from app.ou.moments import centered_moment, double_factorial, raw_moment, stationary_moment


def test_double_factorial():
    assert [double_factorial(n) for n in (-1, 0, 1, 2, 3, 5, 7)] == [1, 1, 1, 2, 3, 15, 105]
    with pytest.raises(ValueError):
        double_factorial(-2)


def test_closed_forms_at_unit_parameters(ou_params):
    # s = 1/2, U = 1
    assert stationary_moment(ou_params, 2) == pytest.approx(1.5, rel=1e-15)
    assert stationary_moment(ou_params, 4) == pytest.approx(4.75, rel=1e-15)
    assert stationary_moment(ou_params, 8) == pytest.approx(126.5625, rel=1e-15)
    assert stationary_moment(ou_params, 4, centered=True) == pytest.approx(0.75, rel=1e-15)
    assert stationary_moment(ou_params, 3, centered=True) == 0.0


def test_closed_forms_at_unit_stationary_variance():
    # s = sigma^2 / (2 theta) = 1, U = 1
    p = OUParams(mean_speed=1.0, reversion_rate=1.0, noise_amplitude=math.sqrt(2.0))
    assert stationary_moment(p, 4) == pytest.approx(10.0, rel=1e-14)
    assert stationary_moment(p, 8) == pytest.approx(764.0, rel=1e-14)
    assert stationary_moment(p, 8, centered=True) == pytest.approx(105.0, rel=1e-14)


def test_moment_order_and_reversion_are_checked(ou_params):
    with pytest.raises(ValueError):
        raw_moment(ou_params, 0)
    with pytest.raises(ValueError):
        centered_moment(ou_params, 0)
    frozen = OUParams(mean_speed=1.0, reversion_rate=0.0, noise_amplitude=1.0)
    with pytest.raises(ConfigurationError):
        stationary_moment(frozen, 2)


@given(
    u=st.floats(min_value=-3.0, max_value=3.0),
    theta=st.floats(min_value=0.1, max_value=10.0),
    sigma=st.floats(min_value=0.0, max_value=3.0),
    k=st.integers(min_value=1, max_value=10),
)
@settings(max_examples=100, deadline=None)
def test_raw_moment_matches_gauss_hermite(u, theta, sigma, k):
    p = OUParams(mean_speed=u, reversion_rate=theta, noise_amplitude=sigma)
    nodes, weights = np.polynomial.hermite_e.hermegauss(20)
    x = u + math.sqrt(p.stationary_variance) * nodes
    expected = float(np.dot(weights, x**k) / math.sqrt(2.0 * math.pi))
    scale = float(np.dot(weights, np.abs(x) ** k) / math.sqrt(2.0 * math.pi))
    assert abs(raw_moment(p, k) - expected) <= 1e-10 * scale + 1e-12


@pytest.mark.parametrize(
    "order, centered",
    [(2, False), (4, False), (6, False), (8, False), (2, True), (4, True)],
)
def test_monte_carlo_agrees_within_four_standard_errors(ou_params, order, centered):
    x = stationary_sample(ou_params, generator(31337), 1_000_000)
    values = (ou_params.mean_speed - x) ** order if centered else x**order
    se = values.std(ddof=1) / math.sqrt(values.size)
    assert abs(values.mean() - stationary_moment(ou_params, order, centered)) < 4.0 * se
