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
Background-flow calculus for the random boundary layer.

The layer thickness is delta(z) = A / (z^2 + B). Inside the layer the
background profile falls linearly from the wall speed z to zero,
phi(x3, z) = (1 - x3 / delta(z)) z, and it vanishes above it. Viewed as a
function of z at fixed height, f(z) = phi(x3, z) feeds the generator of the
wall-speed process, Lf = f' theta (U - z) + (sigma^2 / 2) f''.

Functions accept scalars or numpy arrays and return the same shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from app.models import BackgroundParams, OUParams


def _out(a):
    a = np.asarray(a, dtype=float)
    return a if a.ndim else float(a)


def delta(z, bp: BackgroundParams):
    """Layer thickness A / (z^2 + B), in (0, A/B]."""
    z = np.asarray(z, dtype=float)
    return _out(bp.a / (z * z + bp.b))


def phi(x3, z, bp: BackgroundParams):
    """
    Background profile at height ``x3`` for wall speed ``z``.

    Raises:
        ValueError: If ``x3`` lies outside [0, h].
    """
    x3 = np.asarray(x3, dtype=float)
    z = np.asarray(z, dtype=float)
    if np.any(x3 < 0.0) or np.any(x3 > bp.height):
        raise ValueError(f"x3 must lie in [0, {bp.height}]")
    d = bp.a / (z * z + bp.b)
    inside = x3 < d
    return _out(np.where(inside, (1.0 - x3 / d) * z, 0.0))


def phi_slope(z, bp: BackgroundParams):
    """d phi / d x3 inside the layer, -z / delta(z)."""
    z = np.asarray(z, dtype=float)
    return _out(-z * (z * z + bp.b) / bp.a)


def _check_in_layer(x3: np.ndarray, z: np.ndarray, bp: BackgroundParams) -> None:
    if np.any(x3 < 0.0):
        raise ValueError("x3 must be non-negative")
    if np.any(x3 > bp.a / (z * z + bp.b)):
        raise ValueError("x3 lies above the boundary layer; f is not differentiable there")


def f_derivatives(z, x3, bp: BackgroundParams) -> Tuple:
    """
    f, f' and f'' in z at fixed height ``x3`` inside the layer.

    f' = 1 - x3 (3 z^2 + B) / A and f'' = -6 x3 z / A.

    Raises:
        ValueError: If ``x3`` is negative or above delta(z).
    """
    z = np.asarray(z, dtype=float)
    x3 = np.asarray(x3, dtype=float)
    _check_in_layer(x3, z, bp)
    f = z - x3 * (z**3 + bp.b * z) / bp.a
    f1 = 1.0 - x3 * (3.0 * z * z + bp.b) / bp.a
    f2 = -6.0 * x3 * z / bp.a
    return _out(f), _out(f1), _out(f2)


def generator_Lf(z, x3, bp: BackgroundParams, p: OUParams):
    """Generator of the wall-speed process applied to f: f' theta (U - z) + sigma^2 f'' / 2."""
    _, f1, f2 = f_derivatives(z, x3, bp)
    z = np.asarray(z, dtype=float)
    return _out(
        np.asarray(f1) * p.reversion_rate * (p.mean_speed - z)
        + 0.5 * p.noise_amplitude**2 * np.asarray(f2)
    )


def int_fprime_sq(z, bp: BackgroundParams):
    """
    int_0^delta (f')^2 dx3 in closed form.

    delta - delta^2 c + delta^3 c^2 / 3 with c = (3 z^2 + B) / A; bounded by 3A/B.
    """
    z = np.asarray(z, dtype=float)
    d = bp.a / (z * z + bp.b)
    c = (3.0 * z * z + bp.b) / bp.a
    return _out(d - d * d * c + d**3 * c * c / 3.0)


def int_f2prime_sq(z, bp: BackgroundParams):
    """int_0^delta (f'')^2 dx3 = 12 z^2 delta^3 / A^2."""
    z = np.asarray(z, dtype=float)
    d = bp.a / (z * z + bp.b)
    return _out(12.0 * z * z * d**3 / bp.a**2)


def int_Lf_sq(z, bp: BackgroundParams, p: OUParams):
    """int_0^delta (Lf)^2 dx3; Lf is affine in x3."""
    z = np.asarray(z, dtype=float)
    d = bp.a / (z * z + bp.b)
    c = (3.0 * z * z + bp.b) / bp.a
    alpha = p.reversion_rate * (p.mean_speed - z)
    beta = -alpha * c - 3.0 * p.noise_amplitude**2 * z / bp.a
    return _out(alpha * alpha * d + alpha * beta * d * d + beta * beta * d**3 / 3.0)


def Lf_sq_cap(z, bp: BackgroundParams, p: OUParams):
    """6 (A/B) theta^2 (U - z)^2 + 6 sigma^4 A / B^2."""
    z = np.asarray(z, dtype=float)
    theta, sigma = p.reversion_rate, p.noise_amplitude
    return _out(
        6.0 * (bp.a / bp.b) * theta**2 * (p.mean_speed - z) ** 2
        + 6.0 * sigma**4 * bp.a / bp.b**2
    )


def grad_phi_norm_sq(z, bp: BackgroundParams):
    """|grad Phi|^2 over the channel, L^2 z^2 / delta(z) = L^2 (z^4 + B z^2) / A."""
    z = np.asarray(z, dtype=float)
    return _out(bp.length**2 * (z**4 + bp.b * z * z) / bp.a)


def delta_inequality_margin(z, bp: BackgroundParams, nu: float):
    """
    1/2 - delta(z) |z| / (2 nu).

    Lies in [1/4, 1/2] for every z whenever A <= nu sqrt(B).
    """
    if not nu > 0.0:
        raise ValueError("viscosity must be positive")
    z = np.asarray(z, dtype=float)
    d = bp.a / (z * z + bp.b)
    return _out(0.5 - d * np.abs(z) / (2.0 * nu))


@dataclass(frozen=True)
class ProfileSample:
    z: float
    x3: float
    delta: float
    f: float
    f_prime: float
    f_second: float
    Lf: float


def profile_sample(z: float, x3: float, bp: BackgroundParams, p: OUParams) -> ProfileSample:
    """Everything the calculus knows about one (z, x3) point inside the layer."""
    f, f1, f2 = f_derivatives(z, x3, bp)
    return ProfileSample(
        z=float(z),
        x3=float(x3),
        delta=delta(z, bp),
        f=f,
        f_prime=f1,
        f_second=f2,
        Lf=generator_Lf(z, x3, bp, p),
    )


def f_extended(z, x3, bp: BackgroundParams):
    """z - x3 (z^3 + B z) / A: f inside the layer, continued smoothly above it."""
    z = np.asarray(z, dtype=float)
    return _out(z - x3 * (z**3 + bp.b * z) / bp.a)
