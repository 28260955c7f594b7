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
Time stepping and instantaneous dissipation.

One step is Heun's two-stage scheme with a projection after each stage; the
wall speed is held at its end-of-step value for both stages.
"""

from __future__ import annotations

import numpy as np

from app.core.errors import BlowUpError
from app.core.utils import require_finite
from app.solver.field import VelocityField, face_weights
from app.solver.operators import momentum_rhs, project


def step(field: VelocityField, wall_speed_next: float, dt: float, nu: float) -> VelocityField:
    """
    Advance ``field`` by ``dt`` with the wall moving at ``wall_speed_next``.

    Args:
        field (VelocityField): Current state.
        wall_speed_next (float): Wall speed on [t, t + dt].
        dt (float): Step; the caller enforces the stability rule.
        nu (float): Viscosity.

    Returns:
        VelocityField: Divergence-free state at t + dt.

    Raises:
        ValueError: If the wall speed is not finite.
        BlowUpError: If the new state is not finite.
    """
    require_finite(wall_speed=wall_speed_next)
    mesh = field.mesh
    x = wall_speed_next
    u = (field.u1, field.u2, field.u3)

    r = momentum_rhs(*u, x, nu, mesh)
    stage, _ = project(*(a + dt * b for a, b in zip(u, r)), mesh, dt)

    r = momentum_rhs(*stage, x, nu, mesh)
    combined = tuple(0.5 * a + 0.5 * (s + dt * b) for a, s, b in zip(u, stage, r))
    (u1, u2, u3), p = project(*combined, mesh, 0.5 * dt)
    u3[:, :, 0] = u3[:, :, -1] = 0.0

    new = VelocityField(mesh=mesh, u1=u1, u2=u2, u3=u3, p=p, t=field.t + dt, wall_speed=x)
    if not new.is_finite():
        raise BlowUpError(
            f"non-finite velocity at t = {field.t + dt!r}", step=-1, time=field.t, last_stable=field
        )
    return new


def dz_tangential(u: np.ndarray, wall: float, dz: float):
    """x3-derivatives on the faces k = 0..n3 with one-sided wall stencils."""
    d = np.empty(u.shape[:2] + (u.shape[2] + 1,))
    d[:, :, 1:-1] = (u[:, :, 1:] - u[:, :, :-1]) / dz
    d[:, :, 0] = (-8.0 * wall + 9.0 * u[:, :, 0] - u[:, :, 1]) / (3.0 * dz)
    d[:, :, -1] = (u[:, :, -2] - 9.0 * u[:, :, -1]) / (3.0 * dz)
    return d


def gradient_norm_sq(field: VelocityField) -> float:
    """
    |grad u|^2 integrated over the channel.

    Horizontal derivatives sit on cell centres or edges with full cell
    weights; x3-derivatives of u1, u2 sit on the horizontal faces with half
    weights on the walls, where second-order one-sided stencils are used.
    """
    mesh = field.mesh
    dx1, dx2, dz = mesh.dx1, mesh.dx2, mesh.dz
    w = face_weights(mesh)
    total = 0.0
    for comp, wall in ((field.u1, field.wall_speed), (field.u2, 0.0)):
        total += np.sum(((np.roll(comp, -1, 0) - comp) / dx1) ** 2)
        total += np.sum(((np.roll(comp, -1, 1) - comp) / dx2) ** 2)
        total += np.sum(dz_tangential(comp, wall, dz) ** 2 * w)
    u3 = field.u3
    total += np.sum(((np.roll(u3, -1, 0) - u3) / dx1) ** 2 * w)
    total += np.sum(((np.roll(u3, -1, 1) - u3) / dx2) ** 2 * w)
    total += np.sum(((u3[:, :, 1:] - u3[:, :, :-1]) / dz) ** 2)
    return float(total) * mesh.cell_volume


def dissipation(field: VelocityField, nu: float) -> float:
    """Instantaneous nu |grad u|^2 / |D|."""
    return nu * gradient_norm_sq(field) / field.mesh.volume


def wall_stress(field: VelocityField) -> float:
    """Horizontal mean of d u1 / d x3 on the moving wall."""
    d = dz_tangential(field.u1[:, :, :2], field.wall_speed, field.mesh.dz)
    return float(d[:, :, 0].mean())


def wall_work(field: VelocityField, nu: float) -> float:
    """Power delivered by the moving wall, -nu X L^2 <d u1/d x3>(0)."""
    return -nu * field.wall_speed * field.mesh.horizontal_area * wall_stress(field)
