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

"""Observed orders of convergence under successive halving of a mesh step."""

from __future__ import annotations

import math
from typing import Sequence


def richardson_order(values: Sequence[float]) -> float:
    """
    Order p from three approximations on meshes h, h/2, h/4 without the exact value.

    p = log2((q_h - q_{h/2}) / (q_{h/2} - q_{h/4})).

    Raises:
        ValueError: Unless exactly three values are given with a nonzero,
            same-signed difference sequence.
    """
    if len(values) != 3:
        raise ValueError("richardson_order needs three successively refined values")
    a, b, c = (float(v) for v in values)
    d1, d2 = a - b, b - c
    if d2 == 0.0 or d1 * d2 <= 0.0:
        raise ValueError("differences are not monotone; the sequence is not in its asymptotic range")
    return math.log2(d1 / d2)


def observed_order(errors: Sequence[float]) -> float:
    """
    Smallest pairwise order log2(e_k / e_{k+1}) of errors on halved meshes.

    Raises:
        ValueError: With fewer than two errors or a zero error.
    """
    if len(errors) < 2:
        raise ValueError("observed_order needs at least two errors")
    errs = [abs(float(e)) for e in errors]
    if any(e == 0.0 for e in errs):
        raise ValueError("errors must be nonzero")
    return min(math.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1))
