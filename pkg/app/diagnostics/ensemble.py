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
Ensemble statistics of the time-averaged dissipation and refinement orders.
"""

from __future__ import annotations

import logging
import math
from typing import Optional, Sequence, Union

import numpy as np

from app.core.errors import ConfigurationError
from app.models import DissipationStats
from app.solver.trajectory import TrajectoryRecord

logger = logging.getLogger(__name__)

HORIZON_RTOL = 1e-9


def _standard_error(values: np.ndarray) -> Optional[float]:
    if values.size < 2:
        return None
    return float(values.std(ddof=1) / math.sqrt(values.size))


def ensemble_stats(
    records: Sequence[Union[TrajectoryRecord, float]],
    T: float,
    min_count: int = 2,
) -> DissipationStats:
    """
    Mean and second moment of <eps>_T over independent trajectories.

    Args:
        records: Trajectory records, or their precomputed time averages.
        T (float): Common horizon every record must share.
        min_count (int): Fewest trajectories accepted.

    Returns:
        DissipationStats: Moments with standard errors (None for one trajectory).

    Raises:
        ConfigurationError: On too few records or a record with another horizon.
    """
    if len(records) < min_count:
        raise ConfigurationError(
            f"ensemble statistics need at least {min_count} trajectories, got {len(records)}"
        )
    averages = []
    for i, rec in enumerate(records):
        if isinstance(rec, TrajectoryRecord):
            if not math.isclose(rec.horizon, T, rel_tol=HORIZON_RTOL):
                raise ConfigurationError(
                    f"trajectory {i} has horizon {rec.horizon!r}, expected {T!r}"
                )
            averages.append(rec.time_average())
        else:
            averages.append(float(rec))
    values = np.asarray(averages, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ConfigurationError("time averages must be finite")

    mean = float(values.mean())
    squares = values**2
    second = float(squares.mean())
    # Exact in real arithmetic; allow rounding in the last places.
    jensen_ok = second >= mean * mean * (1.0 - 1e-12)
    if not jensen_ok:
        logger.error("Jensen check failed", extra={"mean": mean, "second_moment": second})
    return DissipationStats(
        horizon=T,
        count=int(values.size),
        time_averages=values.tolist(),
        mean=mean,
        mean_se=_standard_error(values),
        second_moment=second,
        second_moment_se=_standard_error(squares),
        jensen_ok=jensen_ok,
    )
