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
The fluctuation v = u - Phi and the layer quantities built from it.

Phi = (phi(x3, z), 0, 0) carries the wall speed z down to zero across the
layer (0, delta(z)); it has a kink at x3 = delta, which the x3-quadratures
below resolve by splitting cells at delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from app.background.profile import delta, f_derivatives, generator_Lf, phi
from app.models import BackgroundParams, OUParams
from app.solver.field import VelocityField, face_weights
from app.solver.stepper import dz_tangential

_GL_NODES, _GL_WEIGHTS = leggauss(4)

Profile = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FluctuationField:
    """
    v = u - Phi on the staggered mesh.

    Attributes:
        field: The underlying velocity state.
        z: Wall speed entering Phi.
        delta: Layer thickness delta(z).
        v1: u1 - phi at the u1 faces; v2, v3 coincide with u2, u3.
        layer_mask: Cells whose centre lies in the layer.
    """

    field: VelocityField
    bp: BackgroundParams
    z: float
    delta: float
    v1: np.ndarray
    layer_mask: np.ndarray

    @property
    def v2(self) -> np.ndarray:
        return self.field.u2

    @property
    def v3(self) -> np.ndarray:
        return self.field.u3

    @property
    def mesh(self):
        return self.field.mesh

    def wall_values(self) -> Tuple[float, float]:
        """v1 on the bottom and top walls."""
        bottom = self.field.wall_speed - phi(0.0, self.z, self.bp)
        top = 0.0 - phi(self.bp.height, self.z, self.bp)
        return float(bottom), float(top)


def fluctuation(field: VelocityField, x_wall: float, bp: BackgroundParams) -> FluctuationField:
    """Subtract the background profile for wall speed ``x_wall`` from ``field``."""
    mesh = field.mesh
    if not (
        math.isclose(mesh.length, bp.length, rel_tol=1e-12)
        and math.isclose(mesh.height, bp.height, rel_tol=1e-12)
    ):
        raise ValueError("background geometry does not match the field mesh")
    x3 = mesh.x3_centers
    d = delta(x_wall, bp)
    v1 = field.u1 - phi(x3, x_wall, bp)[None, None, :]
    return FluctuationField(
        field=field, bp=bp, z=float(x_wall), delta=float(d), v1=v1, layer_mask=x3 < d
    )


def _overlap(a: np.ndarray, b: np.ndarray, top: float) -> np.ndarray:
    return np.clip(np.minimum(b, top) - a, 0.0, None)


def fluctuation_gradient_norm_sq(v: FluctuationField) -> float:
    """
    |grad v|^2 over the channel.

    The x3-derivative of v1 is the discrete derivative of u1 minus the exact
    slope of phi; on each dual cell the square is integrated exactly on both
    sides of delta.
    """
    field, mesh = v.field, v.mesh
    dx1, dx2, dz = mesh.dx1, mesh.dx2, mesh.dz
    area_cell = dx1 * dx2
    w = face_weights(mesh)
    total = 0.0

    # horizontal derivatives: phi has none
    for comp in (v.v1, v.v2):
        total += np.sum(((np.roll(comp, -1, 0) - comp) / dx1) ** 2) * mesh.cell_volume
        total += np.sum(((np.roll(comp, -1, 1) - comp) / dx2) ** 2) * mesh.cell_volume
    u3 = v.v3
    total += np.sum(((np.roll(u3, -1, 0) - u3) / dx1) ** 2 * w) * mesh.cell_volume
    total += np.sum(((np.roll(u3, -1, 1) - u3) / dx2) ** 2 * w) * mesh.cell_volume
    total += np.sum(((u3[:, :, 1:] - u3[:, :, :-1]) / dz) ** 2) * mesh.cell_volume

    total += np.sum(dz_tangential(v.v2, 0.0, dz) ** 2 * w) * mesh.cell_volume

    # x3-derivative of v1 on dual cells [face_k - dz/2, face_k + dz/2] within [0, h]
    faces = mesh.x3_faces
    lo = np.clip(faces - 0.5 * dz, 0.0, mesh.height)
    hi = np.clip(faces + 0.5 * dz, 0.0, mesh.height)
    width = hi - lo
    inside = _overlap(lo, hi, v.delta)
    slope = -v.z / v.delta
    g = dz_tangential(field.u1, field.wall_speed, dz)
    per_column = g**2 * width - 2.0 * g * slope * inside + slope**2 * inside
    total += np.sum(per_column) * area_cell
    return float(total)


def fluctuation_norm_sq(v: FluctuationField) -> float:
    """|v|^2 over the channel."""
    vol = v.mesh.cell_volume
    return float(
        (np.sum(v.v1**2) + np.sum(v.v2**2) + np.sum(v.v3**2 * face_weights(v.mesh))) * vol
    )


def _horizontal_integral(v: FluctuationField) -> np.ndarray:
    return v.v1.sum(axis=(0, 1)) * v.mesh.dx1 * v.mesh.dx2


def layer_integral(v: FluctuationField, G: Profile) -> float:
    """
    int_{D_delta} v1 G dx.

    The horizontal integral of v1 is interpolated linearly in x3 from zero on
    the wall through the cell centres; each segment below delta is
    integrated with four-point Gauss-Legendre.
    """
    mesh = v.mesh
    centers = mesh.x3_centers
    xp = np.concatenate([[0.0], centers, [mesh.height]])
    fp = np.concatenate([[0.0], _horizontal_integral(v), [0.0]])
    breaks = np.concatenate([xp[xp < v.delta], [v.delta]])
    a, b = breaks[:-1], breaks[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    values = np.interp(nodes, xp, fp) * G(nodes)
    return float(np.sum(values * _GL_WEIGHTS[None, :] * half[:, None]))


def fprime_profile(z: float, bp: BackgroundParams) -> Profile:
    def G(x3):
        return f_derivatives(z, np.minimum(x3, delta(z, bp)), bp)[1]

    return G


def Lf_profile(z: float, bp: BackgroundParams, p: OUParams) -> Profile:
    def G(x3):
        return generator_Lf(z, np.minimum(x3, delta(z, bp)), bp, p)

    return G


def trace_lemma_check(v: FluctuationField, G: Profile, bp: BackgroundParams) -> Tuple[float, float]:
    """
    Both sides of |int_{D_delta} v1 G| <= |grad v| delta L (int_0^delta G^2)^(1/2).

    Returns:
        tuple: ``(lhs, rhs)``.
    """
    lhs = abs(layer_integral(v, G))
    g_sq, _ = quad(lambda x: float(G(np.asarray(x))) ** 2, 0.0, v.delta, epsabs=0.0, epsrel=1e-10, limit=200)
    rhs = math.sqrt(fluctuation_gradient_norm_sq(v)) * v.delta * bp.length * math.sqrt(g_sq)
    return lhs, rhs


class FluctuationProbe:
    """
    Per-step probe of the layer quantities used by the audits.

    Records ``grad_v_sq``, ``v_norm_sq``, ``layer_flux`` (int_{D_delta} v1 f'),
    and, with ``trace=True``, both sides of the trace lemma for G = f' and
    G = Lf.
    """

    def __init__(self, bp: BackgroundParams, ou: OUParams, trace: bool = True):
        self.bp = bp
        self.ou = ou
        self.trace = trace

    def __call__(self, field: VelocityField) -> Dict[str, float]:
        z = field.wall_speed
        v = fluctuation(field, z, self.bp)
        fp = fprime_profile(z, self.bp)
        out = {
            "grad_v_sq": fluctuation_gradient_norm_sq(v),
            "v_norm_sq": fluctuation_norm_sq(v),
            "layer_flux": layer_integral(v, fp),
        }
        if self.trace:
            out["trace_lhs_fprime"], out["trace_rhs_fprime"] = trace_lemma_check(v, fp, self.bp)
            out["trace_lhs_lf"], out["trace_rhs_lf"] = trace_lemma_check(
                v, Lf_profile(z, self.bp, self.ou), self.bp
            )
        return out
