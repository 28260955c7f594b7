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
Discrete operators on MAC arrays.

Wall data enter through ghost cells: the tangential components take the
value ``2 * wall - u`` below the first cell (linear extrapolation through
the wall), ``-u`` above the last one; u3 is zero on both wall faces.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np

from app.solver.grid import Mesh
from app.solver.poisson import poisson_solver

Arrays = Tuple[np.ndarray, np.ndarray, np.ndarray]


def _xp(a: np.ndarray, axis: int) -> np.ndarray:
    """Next neighbour along a periodic axis."""
    return np.roll(a, -1, axis=axis)


def _xm(a: np.ndarray, axis: int) -> np.ndarray:
    return np.roll(a, 1, axis=axis)


def with_ghosts(u: np.ndarray, bottom: float) -> np.ndarray:
    """Pad a tangential component with its two ghost layers in x3."""
    lo = 2.0 * bottom - u[:, :, :1]
    hi = -u[:, :, -1:]
    return np.concatenate([lo, u, hi], axis=2)


def divergence(u1: np.ndarray, u2: np.ndarray, u3: np.ndarray, mesh: Mesh) -> np.ndarray:
    """Cell-centred discrete divergence."""
    return (
        (_xp(u1, 0) - u1) / mesh.dx1
        + (_xp(u2, 1) - u2) / mesh.dx2
        + (u3[:, :, 1:] - u3[:, :, :-1]) / mesh.dz
    )


def gradient(phi: np.ndarray, mesh: Mesh) -> Arrays:
    """MAC gradient of a cell-centred field; the wall components are zero."""
    g1 = (phi - _xm(phi, 0)) / mesh.dx1
    g2 = (phi - _xm(phi, 1)) / mesh.dx2
    g3 = np.zeros(phi.shape[:2] + (phi.shape[2] + 1,))
    g3[:, :, 1:-1] = (phi[:, :, 1:] - phi[:, :, :-1]) / mesh.dz
    return g1, g2, g3


def project(u1, u2, u3, mesh: Mesh, coeff: float):
    """
    Remove the gradient part of (u1, u2, u3).

    Solves lap(phi) = div(u) / coeff and returns ``(u - coeff grad phi, phi)``;
    with ``coeff`` equal to the stage weight times dt, phi is the pressure.
    """
    rhs = divergence(u1, u2, u3, mesh) / coeff
    rhs -= rhs.mean()
    phi = poisson_solver(mesh).solve(rhs)
    g1, g2, g3 = gradient(phi, mesh)
    return (u1 - coeff * g1, u2 - coeff * g2, u3 - coeff * g3), phi


def laplacian(u1, u2, u3, wall_speed: float, mesh: Mesh) -> Arrays:
    """Second-order Laplacian of each component with the wall data applied."""
    inv1, inv2, inv3 = mesh.dx1**-2, mesh.dx2**-2, mesh.dz**-2

    def horizontal(a):
        return (_xp(a, 0) - 2.0 * a + _xm(a, 0)) * inv1 + (_xp(a, 1) - 2.0 * a + _xm(a, 1)) * inv2

    g1 = with_ghosts(u1, wall_speed)
    g2 = with_ghosts(u2, 0.0)
    l1 = horizontal(u1) + (g1[:, :, 2:] - 2.0 * u1 + g1[:, :, :-2]) * inv3
    l2 = horizontal(u2) + (g2[:, :, 2:] - 2.0 * u2 + g2[:, :, :-2]) * inv3
    l3 = np.zeros_like(u3)
    inner = u3[:, :, 1:-1]
    l3[:, :, 1:-1] = horizontal(inner) + (u3[:, :, 2:] - 2.0 * inner + u3[:, :, :-2]) * inv3
    return l1, l2, l3


def advection(u1, u2, u3, wall_speed: float, mesh: Mesh) -> Arrays:
    """
    Divergence-form convective terms div(u u_i) with central fluxes.

    Edge products:
        e at (i dx1, j dx2):  u1 averaged in x2 times u2 averaged in x1
        g at (i dx1, k dz):   u1 averaged in x3 times u3 averaged in x1
        q at (j dx2, k dz):   u2 averaged in x3 times u3 averaged in x2
    g and q vanish on the walls with u3.
    """
    dx1, dx2, dz = mesh.dx1, mesh.dx2, mesh.dz

    e = 0.25 * (u1 + _xm(u1, 1)) * (u2 + _xm(u2, 0))

    g1 = with_ghosts(u1, wall_speed)
    g2 = with_ghosts(u2, 0.0)
    # x3 averages on the faces k = 0..n3
    u1_z = 0.5 * (g1[:, :, 1:] + g1[:, :, :-1])
    u2_z = 0.5 * (g2[:, :, 1:] + g2[:, :, :-1])
    g = u1_z * 0.5 * (u3 + _xm(u3, 0))
    q = u2_z * 0.5 * (u3 + _xm(u3, 1))
    g[:, :, 0] = g[:, :, -1] = 0.0
    q[:, :, 0] = q[:, :, -1] = 0.0

    c1 = 0.5 * (u1 + _xp(u1, 0))
    c2 = 0.5 * (u2 + _xp(u2, 1))
    c3 = 0.5 * (u3[:, :, 1:] + u3[:, :, :-1])

    n1 = (
        (c1**2 - _xm(c1**2, 0)) / dx1
        + (_xp(e, 1) - e) / dx2
        + (g[:, :, 1:] - g[:, :, :-1]) / dz
    )
    n2 = (
        (_xp(e, 0) - e) / dx1
        + (c2**2 - _xm(c2**2, 1)) / dx2
        + (q[:, :, 1:] - q[:, :, :-1]) / dz
    )
    n3 = np.zeros_like(u3)
    n3[:, :, 1:-1] = (
        (_xp(g, 0) - g)[:, :, 1:-1] / dx1
        + (_xp(q, 1) - q)[:, :, 1:-1] / dx2
        + (c3[:, :, 1:] ** 2 - c3[:, :, :-1] ** 2) / dz
    )
    return n1, n2, n3


def momentum_rhs(u1, u2, u3, wall_speed: float, nu: float, mesh: Mesh) -> Arrays:
    """-div(u u) + nu lap(u), before the pressure projection."""
    a1, a2, a3 = advection(u1, u2, u3, wall_speed, mesh)
    l1, l2, l3 = laplacian(u1, u2, u3, wall_speed, mesh)
    return nu * l1 - a1, nu * l2 - a2, nu * l3 - a3
