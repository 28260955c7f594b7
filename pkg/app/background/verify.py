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
Numeric oracles for the background calculus and the inequality scan behind
``shearlab verify background``.
"""

from __future__ import annotations

import logging
import math
from typing import Dict, Optional

import numpy as np
from scipy.integrate import quad, tplquad

from app.background.profile import (
    Lf_sq_cap,
    delta,
    delta_inequality_margin,
    f_derivatives,
    generator_Lf,
    grad_phi_norm_sq,
    int_fprime_sq,
    int_Lf_sq,
    phi,
)
from app.models import BackgroundParams, BackgroundReport, CheckSummary, OUParams
from app.ou.process import stationary_sample
from app.ou.rng import generator

logger = logging.getLogger(__name__)

QUAD_EPSREL = 1e-12
ROUNDING = 1e-12


def quad_fprime_sq(z: float, bp: BackgroundParams, epsrel: float = QUAD_EPSREL) -> float:
    """Adaptive quadrature of (f')^2 over the layer."""
    d = delta(z, bp)
    value, _ = quad(
        lambda x3: f_derivatives(z, x3, bp)[1] ** 2, 0.0, d, epsabs=0.0, epsrel=epsrel, limit=200
    )
    return value


def quad_Lf_sq(z: float, bp: BackgroundParams, p: OUParams, epsrel: float = QUAD_EPSREL) -> float:
    d = delta(z, bp)
    value, _ = quad(
        lambda x3: generator_Lf(z, x3, bp, p) ** 2, 0.0, d, epsabs=0.0, epsrel=epsrel, limit=200
    )
    return value


def quad_grad_phi_norm_sq(z: float, bp: BackgroundParams, epsrel: float = 1e-9) -> float:
    """
    Volume quadrature of |d phi / d x3|^2 over the layer (0, L)^2 x (0, delta).

    The slope is a difference quotient of ``phi`` kept inside the layer.
    """
    d = delta(z, bp)
    eta = 1e-3 * d

    def slope_sq(x3, x2, x1):
        a = max(0.0, x3 - eta)
        b = min(d * (1.0 - 1e-12), x3 + eta)
        return ((phi(b, z, bp) - phi(a, z, bp)) / (b - a)) ** 2

    value, _ = tplquad(
        slope_sq, 0.0, bp.length, 0.0, bp.length, 0.0, d, epsabs=0.0, epsrel=epsrel
    )
    return value


def _summary(margins: np.ndarray) -> CheckSummary:
    margins = np.asarray(margins, dtype=float)
    return CheckSummary(
        samples=int(margins.size),
        min_margin=float(margins.min()),
        max_margin=float(margins.max()),
        violations=int(np.count_nonzero(~(margins >= 0.0))),
    )


def _tol(*magnitudes: np.ndarray) -> np.ndarray:
    scale = np.maximum.reduce([np.abs(np.asarray(m, dtype=float)) for m in magnitudes])
    return ROUNDING * np.maximum(scale, 1.0)


def verify_background(
    ou: OUParams,
    nu: float,
    h: float,
    L: float,
    samples: int,
    seed: int = 0,
    bp: Optional[BackgroundParams] = None,
    oracle_points: int = 64,
) -> BackgroundReport:
    """
    Scan the background inequalities over random wall speeds.

    Wall speeds are drawn from the stationary law, together with the
    extremal points z = 0 and z = +/- sqrt(B). Each check reports margins
    (non-negative means satisfied); exact inequalities get a rounding
    allowance of 1e-12 times their magnitude.

    Args:
        ou (OUParams): Wall-speed parameters (theta > 0).
        nu (float): Viscosity.
        h (float): Channel height.
        L (float): Horizontal period.
        samples (int): Number of random wall speeds.
        seed (int): Stream seed.
        bp (BackgroundParams, optional): Defaults to A = nu U, B = U^2.
        oracle_points (int): Leading samples also checked against quadrature.

    Returns:
        BackgroundReport: One summary per named check.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    bp = bp or BackgroundParams.default(nu, ou.mean_speed, L, h)
    rng = generator(seed)
    z = np.concatenate(
        [[0.0, math.sqrt(bp.b), -math.sqrt(bp.b)], np.atleast_1d(stationary_sample(ou, rng, samples))]
    )

    d = delta(z, bp)
    margin = delta_inequality_margin(z, bp, nu)
    slope = (3.0 * z * z + bp.b) / bp.a
    fp_sq = int_fprime_sq(z, bp)
    lf_sq = int_Lf_sq(z, bp, ou)
    lf_cap = Lf_sq_cap(z, bp, ou)

    checks: Dict[str, CheckSummary] = {
        "delta_margin_range": _summary(
            np.minimum(margin - 0.25, 0.5 - margin) + ROUNDING
        ),
        "delta_below_height": _summary(h - d),
        "delta_below_max": _summary(bp.a / bp.b - d + _tol(d)),
        "slope_bound": _summary(3.0 / d - slope + _tol(slope)),
        "speed_bound": _summary(bp.a / d - z * z + _tol(z * z)),
        "fprime_sq_cap": _summary(3.0 * bp.a / bp.b - fp_sq + _tol(fp_sq)),
        "lf_sq_cap": _summary(lf_cap - lf_sq + _tol(lf_cap)),
    }

    subset = z[: min(z.size, oracle_points)]
    rel_fp = np.array(
        [abs(int_fprime_sq(v, bp) - quad_fprime_sq(v, bp)) / max(int_fprime_sq(v, bp), 1e-300) for v in subset]
    )
    checks["fprime_sq_quadrature"] = _summary(1e-10 - rel_fp)
    nonzero = [v for v in subset[:4] if v != 0.0]
    rel_grad = np.array(
        [abs(grad_phi_norm_sq(v, bp) - quad_grad_phi_norm_sq(v, bp)) / grad_phi_norm_sq(v, bp) for v in nonzero]
    )
    checks["grad_phi_quadrature"] = _summary(1e-8 - rel_grad)

    passed = all(c.passed for c in checks.values())
    log = logger.info if passed else logger.warning
    log(
        "Background inequality scan finished",
        extra={"samples": int(z.size), "passed": passed, "reynolds": ou.mean_speed * h / nu},
    )
    return BackgroundReport(
        reynolds=ou.mean_speed * h / nu, a=bp.a, b=bp.b, checks=checks, passed=passed
    )
