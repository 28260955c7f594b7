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
Pathwise audits of the energy inequality

    int_0^T nu |grad v|^2 dt + 4 M_T <= 2 |v(0)|^2 - 2 |v(T)|^2 + Y_T,

with M_T = sigma int_0^T (int_{D_delta} v1 f') dW discretized by left-endpoint
sums against the recorded Brownian increments.
"""

from __future__ import annotations

import logging
import math
from typing import Iterable, Optional

import numpy as np
from scipy.integrate import trapezoid

from app.background.profile import delta
from app.core.errors import AuditInputError
from app.core.utils import require_finite_all
from app.models import FlowConfig, Geometry, GridSpec, InequalityLedger, MartingaleSummary
from app.solver.trajectory import TrajectoryRecord

logger = logging.getLogger(__name__)

REQUIRED_PROBES = ("grad_v_sq", "v_norm_sq", "layer_flux")
MARTINGALE_Z_LIMIT = 4.0


def y_integrand(x: np.ndarray, cfg: FlowConfig) -> np.ndarray:
    """Pathwise part of Y_T: nu X^2 / delta(X) + (6/nu)(A/B)^3 theta^2 (U - X)^2."""
    bp = cfg.background
    nu = cfg.viscosity
    r = bp.a / bp.b
    theta = cfg.ou.reversion_rate
    return nu * x * x / delta(x, bp) + (6.0 / nu) * r**3 * theta**2 * (cfg.ou.mean_speed - x) ** 2


def y_noise_rate(cfg: FlowConfig) -> float:
    """Deterministic rate of Y_T: 4L^2[(3/2)(A/B) + (6/nu)(A/B)^3 sigma^2/B] sigma^2."""
    bp = cfg.background
    r = bp.a / bp.b
    sigma2 = cfg.ou.noise_amplitude**2
    return 4.0 * bp.length**2 * (1.5 * r + (6.0 / cfg.viscosity) * r**3 * sigma2 / bp.b) * sigma2


def y_total(times: np.ndarray, wall_speed: np.ndarray, cfg: FlowConfig) -> float:
    """Y_T along one wall path."""
    horizon = float(times[-1] - times[0])
    pathwise = trapezoid(y_integrand(np.asarray(wall_speed), cfg), times)
    return y_noise_rate(cfg) * horizon + 4.0 * cfg.background.length**2 * float(pathwise)


def audit_tolerance(cfg: FlowConfig, grid: GridSpec, scale: float, c: float) -> float:
    """
    C (sqrt(dt / tau) + (dz / h)^2) scale with tau = h / U.

    Time and mesh steps enter relative to the channel's own scales.
    """
    h = cfg.geometry.height
    u = max(abs(cfg.ou.mean_speed), 1e-300)
    tau = h / u
    dz = h / grid.n3
    return c * (math.sqrt(grid.dt / tau) + (dz / h) ** 2) * abs(scale)


def energy_inequality_audit(
    record: TrajectoryRecord,
    cfg: FlowConfig,
    grid: GridSpec,
    tolerance_c: float = 1.0,
) -> InequalityLedger:
    """
    Evaluate the discrete energy inequality on one trajectory.

    Args:
        record (TrajectoryRecord): Trajectory recorded with a ``FluctuationProbe``.
        cfg (FlowConfig): Flow the trajectory was run with.
        grid (GridSpec): Its discretization, for the tolerance.
        tolerance_c (float): Tolerance constant C.

    Returns:
        InequalityLedger: All terms, the slack and the pass flags.

    Raises:
        AuditInputError: If increments or probe series are missing.
    """
    if record.increments is None or len(record.increments) != len(record.times) - 1:
        raise AuditInputError("trajectory carries no Brownian increments")
    require_finite_all("Brownian increments", record.increments, error=AuditInputError)
    missing = [name for name in REQUIRED_PROBES if name not in record.probes]
    if missing:
        raise AuditInputError(f"trajectory lacks probe series: {', '.join(missing)}")

    t = record.times
    dt = np.diff(t)
    sigma = cfg.ou.noise_amplitude
    bp = cfg.background
    grad_v = record.probes["grad_v_sq"]
    flux = record.probes["layer_flux"]
    v_norm = record.probes["v_norm_sq"]

    dissipation_integral = cfg.viscosity * float(trapezoid(grad_v, t))
    m_t = sigma * float(np.sum(flux[:-1] * record.increments))
    qv = sigma**2 * float(np.sum(flux[:-1] ** 2 * dt))
    qv_cap = 3.0 * sigma**2 * bp.length**2 * (bp.a / bp.b) ** 3 * float(np.sum(grad_v[:-1] * dt))
    y_t = y_total(t, record.wall_speed, cfg)
    initial_term = 2.0 * float(v_norm[0])
    final_term = 2.0 * float(v_norm[-1])

    slack = initial_term - final_term + y_t - (dissipation_integral + 4.0 * m_t)
    tolerance = audit_tolerance(cfg, grid, y_t, tolerance_c)
    dz_rel = 1.0 / grid.n3
    qv_tolerance = tolerance_c * dz_rel * qv_cap

    trace_ok: Optional[bool] = None
    worst: Optional[float] = None
    pairs = [
        (record.probes[f"trace_lhs_{g}"], record.probes[f"trace_rhs_{g}"])
        for g in ("fprime", "lf")
        if f"trace_lhs_{g}" in record.probes
    ]
    if pairs:
        ratios = [lhs / np.maximum(rhs, 1e-300) for lhs, rhs in pairs]
        worst = float(max(np.max(r) for r in ratios))
        trace_ok = all(
            bool(np.all(lhs <= rhs * (1.0 + tolerance_c * dz_rel) + 1e-12)) for lhs, rhs in pairs
        )

    ledger = InequalityLedger(
        dissipation_integral=dissipation_integral,
        initial_term=initial_term,
        final_term=final_term,
        y_t=y_t,
        m_t=m_t,
        quadratic_variation=qv,
        quadratic_variation_cap=qv_cap,
        slack=slack,
        tolerance=tolerance,
        passed=slack >= -tolerance,
        quadratic_variation_ok=qv <= qv_cap + qv_tolerance,
        trace_ok=trace_ok,
        trace_worst_ratio=worst,
    )
    values = ledger.model_dump(exclude={"trace_ok", "trace_worst_ratio"})
    require_finite_all(
        "energy ledger", (v for v in values.values() if isinstance(v, float)), error=AuditInputError
    )
    log = logger.info if ledger.passed else logger.warning
    log(
        "Energy inequality audited",
        extra={"seed": record.seed, "slack": slack, "tolerance": tolerance, "passed": ledger.passed},
    )
    return ledger


def energy_budget_residual(record: TrajectoryRecord, nu: float, geometry: Geometry) -> np.ndarray:
    """
    d/dt (1/2)|u|^2 + nu |grad u|^2 - (wall work) along the record.

    The time derivative is a second-order difference on the record's grid;
    nu |grad u|^2 is recovered from the stored dissipation per unit volume.
    """
    dedt = np.gradient(record.energy, record.times)
    grad_term = record.dissipation * geometry.volume
    work = -nu * record.wall_speed * geometry.length**2 * record.wall_stress
    return dedt + grad_term - work


def martingale_summary(ledgers: Iterable[InequalityLedger]) -> MartingaleSummary:
    """
    Ensemble mean of M_T against zero.

    Raises:
        ValueError: With fewer than two ledgers.
    """
    values = np.array([ledger.m_t for ledger in ledgers], dtype=float)
    if values.size < 2:
        raise ValueError("martingale summary needs at least two ledgers")
    mean = float(values.mean())
    se = float(values.std(ddof=1) / math.sqrt(values.size))
    z = mean / se if se > 0.0 else (0.0 if mean == 0.0 else math.inf)
    return MartingaleSummary(
        count=int(values.size),
        mean=mean,
        standard_error=se,
        z_score=z,
        passed=abs(z) <= MARTINGALE_Z_LIMIT,
    )
