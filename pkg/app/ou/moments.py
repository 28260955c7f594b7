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
Closed-form moments of the stationary wall-speed law N(U, s), s = sigma^2/(2 theta).
"""

from math import comb

from app.models import OUParams


def double_factorial(n: int) -> int:
    """n!! for n >= -1, with (-1)!! = 0!! = 1."""
    if n < -1:
        raise ValueError(f"double factorial undefined for {n}")
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


def centered_moment(p: OUParams, k: int) -> float:
    """
    E[(U - X)^k] under the stationary law.

    Odd orders vanish; even orders are (k-1)!! s^(k/2).
    """
    if k < 1:
        raise ValueError(f"moment order must be >= 1, got {k}")
    if k % 2:
        return 0.0
    return double_factorial(k - 1) * p.stationary_variance ** (k // 2)


def raw_moment(p: OUParams, k: int) -> float:
    """
    E[X^k] under the stationary law.

    Expands (U + (X - U))^k over the even centered moments, so every
    coefficient is an exact integer C(k, j) (j-1)!!.
    """
    if k < 1:
        raise ValueError(f"moment order must be >= 1, got {k}")
    u = p.mean_speed
    s = p.stationary_variance
    total = 0.0
    for j in range(0, k + 1, 2):
        coefficient = comb(k, j) * double_factorial(j - 1)
        total += coefficient * u ** (k - j) * s ** (j // 2)
    return total


def stationary_moment(p: OUParams, k: int, centered: bool = False) -> float:
    """
    Stationary moment of order ``k``.

    Args:
        p (OUParams): Parameters with theta > 0.
        k (int): Order, at least 1.
        centered (bool): Return E[(U - X)^k] instead of E[X^k].

    Returns:
        float: The exact value.
    """
    return centered_moment(p, k) if centered else raw_moment(p, k)
