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
Velocity fields on the staggered mesh and their initial states.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.core.errors import ConfigurationError
from app.models import Geometry, GridSpec, InitialCondition
from app.ou.rng import generator
from app.solver.grid import Mesh
from app.solver.operators import divergence, project

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VelocityField:
    """
    One state of the channel.

    ``wall_speed`` is the Dirichlet value of u1 on x3 = 0 that the state
    satisfies; the top wall is at rest.
    """

    mesh: Mesh
    u1: np.ndarray
    u2: np.ndarray
    u3: np.ndarray
    p: np.ndarray
    t: float
    wall_speed: float

    def __post_init__(self):
        n1, n2, n3 = self.mesh.shape
        expected = {
            "u1": (n1, n2, n3),
            "u2": (n1, n2, n3),
            "u3": (n1, n2, n3 + 1),
            "p": (n1, n2, n3),
        }
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise ConfigurationError(
                    f"{name} has shape {getattr(self, name).shape}, mesh expects {shape}"
                )

    def is_finite(self) -> bool:
        return bool(
            np.all(np.isfinite(self.u1))
            and np.all(np.isfinite(self.u2))
            and np.all(np.isfinite(self.u3))
            and np.all(np.isfinite(self.p))
        )

    def max_speed(self) -> float:
        return float(
            max(np.abs(self.u1).max(), np.abs(self.u2).max(), np.abs(self.u3).max(), abs(self.wall_speed))
        )

    def divergence(self) -> np.ndarray:
        return divergence(self.u1, self.u2, self.u3, self.mesh)

    def max_divergence(self) -> float:
        return float(np.abs(self.divergence()).max())


def face_weights(mesh: Mesh) -> np.ndarray:
    """Trapezoid weights in x3 on the horizontal faces k = 0..n3."""
    w = np.ones(mesh.n3 + 1)
    w[0] = w[-1] = 0.5
    return w


def kinetic_energy(field: VelocityField) -> float:
    """1/2 |u|^2 integrated over the channel."""
    vol = field.mesh.cell_volume
    e = np.sum(field.u1**2) + np.sum(field.u2**2)
    e += np.sum(field.u3**2 * face_weights(field.mesh))
    return 0.5 * vol * float(e)


def couette_profile(mesh: Mesh, speed: float) -> np.ndarray:
    """speed (1 - x3/h) at the u1 faces."""
    profile = speed * (1.0 - mesh.x3_centers / mesh.height)
    return np.broadcast_to(profile, mesh.shape).copy()


def _perturbation(mesh: Mesh, amplitude: float, seed: int):
    """A few low horizontal modes with sin(pi x3 / h) wall envelopes."""
    rng = generator(seed)
    out = []
    positions = (
        (mesh.x1(True), mesh.x2(False), mesh.x3_centers),
        (mesh.x1(False), mesh.x2(True), mesh.x3_centers),
        (mesh.x1(False), mesh.x2(False), mesh.x3_faces),
    )
    for x1, x2, x3 in positions:
        X1, X2, X3 = np.meshgrid(x1, x2, x3, indexing="ij")
        comp = np.zeros(X1.shape)
        for m1 in (0, 1, 2):
            for m2 in (0, 1, 2):
                coef, phase = rng.standard_normal(), rng.uniform(0.0, 2.0 * math.pi)
                arg = 2.0 * math.pi * (m1 * X1 + m2 * X2) / mesh.length + phase
                comp += coef * np.cos(arg)
        comp *= np.sin(math.pi * X3 / mesh.height)
        out.append(amplitude * comp / 3.0)
    return out


def init_field(
    geometry: Geometry,
    grid: GridSpec,
    initial: InitialCondition,
    wall_speed: Optional[float] = None,
    mean_speed: float = 0.0,
) -> VelocityField:
    """
    Build the state at t = 0.

    Args:
        geometry (Geometry): Channel box.
        grid (GridSpec): Discretization.
        initial (InitialCondition): ``rest``, ``couette`` or ``perturbed``.
        wall_speed (float, optional): X_0; defaults to the Couette speed for
            Couette-type states and to 0 at rest.
        mean_speed (float): U, the default Couette speed.

    Returns:
        VelocityField: Divergence-free state satisfying the wall data.
    """
    mesh = Mesh.from_specs(geometry, grid)
    zeros = np.zeros(mesh.shape)
    u3 = np.zeros((mesh.n1, mesh.n2, mesh.n3 + 1))
    speed = initial.couette_speed if initial.couette_speed is not None else mean_speed

    if initial.kind == "rest":
        u1 = zeros.copy()
        x0 = 0.0 if wall_speed is None else wall_speed
    else:
        u1 = couette_profile(mesh, speed)
        x0 = speed if wall_speed is None else wall_speed

    u2 = zeros.copy()
    if initial.kind == "perturbed" and initial.amplitude > 0.0:
        d1, d2, d3 = _perturbation(mesh, initial.amplitude, initial.seed)
        d3[:, :, 0] = d3[:, :, -1] = 0.0
        (d1, d2, d3), _ = project(d1, d2, d3, mesh, 1.0)
        u1, u2, u3 = u1 + d1, u2 + d2, u3 + d3

    field = VelocityField(mesh=mesh, u1=u1, u2=u2, u3=u3, p=zeros.copy(), t=0.0, wall_speed=float(x0))
    logger.debug(
        "Initial field built",
        extra={"kind": initial.kind, "max_divergence": field.max_divergence()},
    )
    return field
