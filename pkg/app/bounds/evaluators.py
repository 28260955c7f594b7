# Copyright 2025 Cisco Systems, Inc. and its affiliates
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
# SPDX-License-Identifier: Apache-2.0

"""
Closed-form dissipation bounds.

Every evaluator checks the theorem hypotheses (Re > 1, admissible
background) and never clamps: out-of-hypothesis calls raise
``HypothesisViolationError``.
"""

from __future__ import annotations

import logging
import math

from app.core.errors import ConfigurationError
from app.models import BoundsReport, FlowConfig
from app.ou.moments import centered_moment, raw_moment

logger = logging.getLogger(__name__)

MEAN_LEADING = 32.0
SECOND_MOMENT_LEADING = 24640.0


def _checked(cfg: FlowConfig) -> None:
    cfg.require_theorem_hypotheses()
    cfg.ou.require_stationary()


def mean_bound(cfg: FlowConfig) -> float:
    """
    Upper bound on the expected time-averaged dissipation, in Reynolds form.

    32 U^3/h + 2 (6/Re + 28 U/(h theta) + 12 Re^-2 h theta/U
    + 24 Re^-2 h sigma^2/U^3 + 6 sigma^2/(h U theta^2)) sigma^2

    Raises:
        HypothesisViolationError: If Re <= 1 or the background is inadmissible.
    """
    _checked(cfg)
    u = cfg.ou.mean_speed
    theta = cfg.ou.reversion_rate
    sigma2 = cfg.ou.noise_amplitude**2
    h = cfg.geometry.height
    re = cfg.reynolds
    bracket = (
        6.0 / re
        + 28.0 * u / (h * theta)
        + 12.0 / re**2 * (h * theta / u)
        + 24.0 / re**2 * (h * sigma2 / u**3)
        + 6.0 * sigma2 / (h * u * theta**2)
    )
    return MEAN_LEADING * u**3 / h + 2.0 * bracket * sigma2


def mean_bound_general(cfg: FlowConfig) -> float:
    """
    The mean bound before substituting A = nu U, B = U^2.

    (8/h)[(3/2)(A/B) + (6/nu)(sigma^2/B)(A/B)^3] sigma^2
    + (8/h){(2 nu/A)[E X^4 + B E X^2] + (6/nu)(A/B)^3 sigma^2 theta / 2}
    """
    _checked(cfg)
    a, b = cfg.background.a, cfg.background.b
    nu = cfg.viscosity
    h = cfg.geometry.height
    theta = cfg.ou.reversion_rate
    sigma2 = cfg.ou.noise_amplitude**2
    r = a / b
    noise_part = (1.5 * r + (6.0 / nu) * (sigma2 / b) * r**3) * sigma2
    moment_part = (2.0 * nu / a) * (raw_moment(cfg.ou, 4) + b * raw_moment(cfg.ou, 2))
    drift_part = (6.0 / nu) * r**3 * sigma2 * theta / 2.0
    return (8.0 / h) * noise_part + (8.0 / h) * (moment_part + drift_part)


def second_moment_bound(cfg: FlowConfig) -> float:
    """
    Upper bound on E[<eps>_T^2] for the configured (A, B).

    (3072/h^2){[(3/2)(A/B) + (6/nu)(A/B)^3 sigma^2/B]^2 sigma^4
    + (72/nu^2)(A/B)^6 theta^4 E[(U-X)^4]} + (12320 nu^2/(h^2 A^2)) E[X^8 + B^2 X^4]
    """
    _checked(cfg)
    a, b = cfg.background.a, cfg.background.b
    nu = cfg.viscosity
    h = cfg.geometry.height
    theta = cfg.ou.reversion_rate
    sigma2 = cfg.ou.noise_amplitude**2
    r = a / b
    noise = (1.5 * r + (6.0 / nu) * r**3 * sigma2 / b) ** 2 * sigma2**2
    drift = (72.0 / nu**2) * r**6 * theta**4 * centered_moment(cfg.ou, 4)
    moments = raw_moment(cfg.ou, 8) + b * b * raw_moment(cfg.ou, 4)
    return (3072.0 / h**2) * (noise + drift) + (12320.0 * nu**2 / (h**2 * a**2)) * moments


def second_moment_polynomial(cfg: FlowConfig) -> float:
    """
    Second-moment bound written out as a polynomial in s = sigma^2/(2 theta).

    Uses A = nu U, B = U^2 regardless of ``cfg.background``; at sigma = 0 it
    equals 24640 U^6/h^2.
    """
    _checked(cfg)
    u = cfg.ou.mean_speed
    nu = cfg.viscosity
    h = cfg.geometry.height
    theta = cfg.ou.reversion_rate
    sigma2 = cfg.ou.noise_amplitude**2
    s = sigma2 / (2.0 * theta)
    noise = (1.5 * nu / u + 6.0 * sigma2 * nu**2 / u**5) ** 2 * sigma2**2
    drift = (216.0 * nu**4 / u**6) * theta**4 * s * s
    poly = 2.0 * u**8 + 34.0 * u**6 * s + 213.0 * u**4 * s**2 + 420.0 * u**2 * s**3 + 105.0 * s**4
    return (3072.0 / h**2) * (noise + drift) + (12320.0 / (h**2 * u**2)) * poly


def large_noise_bound(cfg: FlowConfig) -> float:
    """(1/h)(U^3 + U Ut^2 + Ut^4/U) with Ut = sigma / sqrt(theta)."""
    u = cfg.ou.mean_speed
    if not u > 0.0:
        raise ConfigurationError("large-noise bound needs U > 0")
    ut2 = cfg.ou.velocity_scale**2
    return (u**3 + u * ut2 + ut2 * ut2 / u) / cfg.geometry.height


def expected_Y_rate(cfg: FlowConfig) -> float:
    """
    E[Y_T] / T under the stationary wall law.

    4L^2[(3/2)(A/B) + (6/nu)(A/B)^3 sigma^2/B] sigma^2
    + 4L^2{(nu/A)(E X^4 + B E X^2) + (6/nu)(A/B)^3 theta^2 sigma^2/(2 theta)}
    """
    cfg.ou.require_stationary()
    a, b = cfg.background.a, cfg.background.b
    nu = cfg.viscosity
    length = cfg.geometry.length
    theta = cfg.ou.reversion_rate
    sigma2 = cfg.ou.noise_amplitude**2
    r = a / b
    noise = (1.5 * r + (6.0 / nu) * r**3 * sigma2 / b) * sigma2
    moments = (nu / a) * (raw_moment(cfg.ou, 4) + b * raw_moment(cfg.ou, 2))
    drift = (6.0 / nu) * r**3 * theta**2 * cfg.ou.stationary_variance
    return 4.0 * length**2 * (noise + moments + drift)


def bounds_report(cfg: FlowConfig) -> BoundsReport:
    """Evaluate every bound for ``cfg``."""
    u = cfg.ou.mean_speed
    report = BoundsReport(
        reynolds=cfg.reynolds,
        mean_bound=mean_bound(cfg),
        mean_bound_general=mean_bound_general(cfg),
        second_moment_bound=second_moment_bound(cfg),
        large_noise_bound=large_noise_bound(cfg),
        expected_y_rate=expected_Y_rate(cfg),
        kolmogorov_scale_U3_over_h=u**3 / cfg.geometry.height,
    )
    for name, value in report.model_dump().items():
        if not (math.isfinite(value) and value > 0.0):
            raise ConfigurationError(f"bound {name} is not finite and positive: {value!r}")
    logger.debug("Bounds evaluated", extra=report.model_dump())
    return report
