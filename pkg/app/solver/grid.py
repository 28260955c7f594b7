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
Staggered (MAC) mesh of the channel (0, L)^2 x (0, h) and the explicit
stability rule.

Layout, with i, j, k cell indices:
    u1[i, j, k] at (i dx1, (j + 1/2) dx2, (k + 1/2) dz)      shape (n1, n2, n3)
    u2[i, j, k] at ((i + 1/2) dx1, j dx2, (k + 1/2) dz)      shape (n1, n2, n3)
    u3[i, j, k] at ((i + 1/2) dx1, (j + 1/2) dx2, k dz)      shape (n1, n2, n3 + 1)
    p[i, j, k]  at cell centres                              shape (n1, n2, n3)
Horizontal directions are periodic; u3 vanishes on the wall faces k = 0, n3.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from app.core.errors import StabilityError
from app.models import Geometry, GridSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Mesh:
    length: float
    height: float
    n1: int
    n2: int
    n3: int

    @classmethod
    def from_specs(cls, geometry: Geometry, grid: GridSpec) -> "Mesh":
        return cls(geometry.length, geometry.height, grid.n1, grid.n2, grid.n3)

    @property
    def dx1(self) -> float:
        return self.length / self.n1

    @property
    def dx2(self) -> float:
        return self.length / self.n2

    @property
    def dz(self) -> float:
        return self.height / self.n3

    @property
    def cell_volume(self) -> float:
        return self.dx1 * self.dx2 * self.dz

    @property
    def volume(self) -> float:
        return self.length * self.length * self.height

    @property
    def horizontal_area(self) -> float:
        return self.length * self.length

    @property
    def min_spacing(self) -> float:
        return min(self.dx1, self.dx2, self.dz)

    @property
    def shape(self):
        return (self.n1, self.n2, self.n3)

    @property
    def x3_centers(self) -> np.ndarray:
        return (np.arange(self.n3) + 0.5) * self.dz

    @property
    def x3_faces(self) -> np.ndarray:
        return np.arange(self.n3 + 1) * self.dz

    def x1(self, staggered: bool) -> np.ndarray:
        offset = 0.0 if staggered else 0.5
        return (np.arange(self.n1) + offset) * self.dx1

    def x2(self, staggered: bool) -> np.ndarray:
        offset = 0.0 if staggered else 0.5
        return (np.arange(self.n2) + offset) * self.dx2


def stable_dt(mesh: Mesh, nu: float, u_max: float, cfl_safety: float) -> float:
    """
    Largest admissible step.

    cfl_safety * min(dx_min / |u|_max, 0.25 dx_min^2 / nu, 0.5 / (nu sum_d dx_d^-2));
    the last term keeps explicit three-dimensional diffusion inside the
    stability region of the two-stage integrator.
    """
    dx = mesh.min_spacing
    limits = [0.25 * dx * dx / nu, 0.5 / (nu * (mesh.dx1**-2 + mesh.dx2**-2 + mesh.dz**-2))]
    if u_max > 0.0:
        limits.append(dx / u_max)
    return cfl_safety * min(limits)


def check_stability(mesh: Mesh, nu: float, u_max: float, grid: GridSpec) -> None:
    """
    Raises:
        StabilityError: If ``grid.dt`` exceeds ``stable_dt``.
    """
    if not math.isfinite(u_max):
        raise StabilityError("maximum speed is not finite", grid.dt, 0.0)
    dt_max = stable_dt(mesh, nu, u_max, grid.cfl_safety)
    if grid.dt > dt_max:
        raise StabilityError(
            f"dt = {grid.dt!r} exceeds the stability limit {dt_max!r} "
            f"(u_max = {u_max!r}, nu = {nu!r})",
            grid.dt,
            dt_max,
        )
    logger.debug("Stability rule satisfied", extra={"dt": grid.dt, "dt_max": dt_max})
