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
Pathwise check of Itô's rule for f(z) = phi(x3, z) along a sampled wall path.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from app.background.profile import delta, f_derivatives, f_extended, generator_Lf
from app.models import BackgroundParams, OUParams
from app.ou.process import OUPath

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ItoResidual:
    """Residual of the discrete Itô formula and the number of steps left out."""

    value: float
    skipped: int
    steps: int


def ito_residual_detail(
    path: OUPath, bp: BackgroundParams, p: OUParams, x3: float
) -> ItoResidual:
    """
    f(X_T) - f(X_0) - sum Lf(X_n) dt_n - sigma sum f'(X_n) dW_n over in-layer steps.

    A step counts only when ``x3`` lies inside the layer at both of its
    endpoints; the others are skipped and counted. The increments are the
    ones that drove the exact OU update, never resampled.

    Args:
        path (OUPath): Wall path with its Brownian increments.
        bp (BackgroundParams): Layer constants A, B.
        p (OUParams): Process parameters used in the generator.
        x3 (float): Height at which f is evaluated.

    Returns:
        ItoResidual: Residual, skipped and total step counts.
    """
    if x3 < 0.0:
        raise ValueError("x3 must be non-negative")
    x = np.asarray(path.values, dtype=float)
    dw = np.asarray(path.increments, dtype=float)
    dt = np.diff(path.times)
    left, right = x[:-1], x[1:]

    inside = (x3 <= np.asarray(delta(left, bp))) & (x3 <= np.asarray(delta(right, bp)))
    z = left[inside]
    f0, f1, _ = f_derivatives(z, x3, bp)
    lf = generator_Lf(z, x3, bp, p)

    jumps = np.asarray(f_extended(right[inside], x3, bp)) - f0
    residual = float(
        np.sum(jumps - lf * dt[inside] - p.noise_amplitude * f1 * dw[inside])
    )
    skipped = int(inside.size - np.count_nonzero(inside))
    if skipped:
        logger.debug("Ito residual skipped out-of-layer steps", extra={"skipped": skipped, "x3": x3})
    return ItoResidual(value=residual, skipped=skipped, steps=int(inside.size))


def ito_residual(path: OUPath, bp: BackgroundParams, p: OUParams, x3: float) -> float:
    """Scalar form of :func:`ito_residual_detail`."""
    return ito_residual_detail(path, bp, p, x3).value
