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
Pressure Poisson solve: Fourier in x1, x2 and a tridiagonal sweep in x3.

The discrete operator is the divergence of the MAC gradient, with zero
normal gradient on both walls. The mean mode is singular; it is fixed by
pinning the lowest cell to zero.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import scipy.fft

from app.solver.grid import Mesh


class PoissonSolver:
    """
    Factorized solver for one mesh.

    The forward-elimination factors of every horizontal mode are computed
    once and reused by each ``solve``.
    """

    def __init__(self, mesh: Mesh):
        self.mesh = mesh
        n1, n2, n3 = mesh.shape
        k1 = np.arange(n1)
        k2 = np.arange(n2)
        lam1 = -4.0 * np.sin(np.pi * k1 / n1) ** 2 / mesh.dx1**2
        lam2 = -4.0 * np.sin(np.pi * k2 / n2) ** 2 / mesh.dx2**2
        lam = lam1[:, None] + lam2[None, :]

        inv_dz2 = 1.0 / mesh.dz**2
        diag = np.empty((n1, n2, n3))
        diag[...] = (lam - 2.0 * inv_dz2)[:, :, None]
        diag[:, :, 0] += inv_dz2
        diag[:, :, -1] += inv_dz2

        upper = np.full((n1, n2, n3), inv_dz2)
        upper[:, :, -1] = 0.0
        lower = np.full((n1, n2, n3), inv_dz2)
        lower[:, :, 0] = 0.0
        # mean mode: phi[0] = 0 replaces the first row
        diag[0, 0, 0] = 1.0
        upper[0, 0, 0] = 0.0
        self._lower = lower

        denom = np.empty_like(diag)
        cprime = np.empty_like(diag)
        denom[:, :, 0] = diag[:, :, 0]
        cprime[:, :, 0] = upper[:, :, 0] / denom[:, :, 0]
        for k in range(1, n3):
            denom[:, :, k] = diag[:, :, k] - lower[:, :, k] * cprime[:, :, k - 1]
            cprime[:, :, k] = upper[:, :, k] / denom[:, :, k]
        self._denom = denom
        self._cprime = cprime

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """
        Solve lap(phi) = rhs on cell centres.

        Args:
            rhs (np.ndarray): Shape (n1, n2, n3); must sum to zero up to rounding.

        Returns:
            np.ndarray: phi, real, with the horizontal mean of the lowest cell at zero.
        """
        n3 = self.mesh.n3
        r = scipy.fft.fft2(rhs, axes=(0, 1))
        r[0, 0, 0] = 0.0
        lower = self._lower
        y = np.empty_like(r)
        y[:, :, 0] = r[:, :, 0] / self._denom[:, :, 0]
        for k in range(1, n3):
            y[:, :, k] = (r[:, :, k] - lower[:, :, k] * y[:, :, k - 1]) / self._denom[:, :, k]
        for k in range(n3 - 2, -1, -1):
            y[:, :, k] -= self._cprime[:, :, k] * y[:, :, k + 1]
        return scipy.fft.ifft2(y, axes=(0, 1)).real


@lru_cache(maxsize=16)
def poisson_solver(mesh: Mesh) -> PoissonSolver:
    """Shared solver per mesh."""
    return PoissonSolver(mesh)
