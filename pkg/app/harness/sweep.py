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
Parameter sweeps over the noise amplitude, reversion rate and Reynolds number.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import ValidationError

from app.bounds import bounds_report
from app.core.errors import ConfigurationError
from app.harness.workflow import run_ensemble
from app.models import ExperimentConfig, FlowConfig

logger = logging.getLogger(__name__)

PARAM_COLUMNS = ["sigma", "theta", "reynolds", "viscosity"]
BOUND_COLUMNS = [
    "mean_bound",
    "mean_bound_general",
    "second_moment_bound",
    "large_noise_bound",
    "expected_y_rate",
]
STATS_COLUMNS = ["completed", "mean", "mean_se", "second_moment", "second_moment_se"]


@dataclass(frozen=True)
class SkippedPoint:
    sigma: float
    theta: float
    reynolds: float
    reason: str


@dataclass(frozen=True)
class SweepResult:
    table: pd.DataFrame
    skipped: List[SkippedPoint] = field(default_factory=list)
    trends: Dict[str, str] = field(default_factory=dict)


def _trend(values: np.ndarray) -> str:
    diffs = np.diff(values)
    if diffs.size == 0:
        return "single"
    if np.all(diffs >= 0.0):
        return "nondecreasing"
    if np.all(diffs <= 0.0):
        return "nonincreasing"
    return "mixed"


def trend_summary(table: pd.DataFrame, column: str = "mean_bound") -> Dict[str, str]:
    """
    Direction of ``column`` along sigma and along theta, with the other
    parameters held fixed; 'mixed' when the groups disagree.
    """
    trends = {}
    for axis, others in (("sigma", ["theta", "reynolds"]), ("theta", ["sigma", "reynolds"])):
        labels = set()
        if table.empty:
            continue
        for _, group in table.groupby(others):
            ordered = group.sort_values(axis)
            label = _trend(ordered[column].to_numpy(dtype=float))
            if label != "single":
                labels.add(label)
        if labels:
            trends[f"{column}_vs_{axis}"] = labels.pop() if len(labels) == 1 else "mixed"
    return trends


def sweep(
    base: ExperimentConfig,
    sigmas: Optional[Sequence[float]] = None,
    thetas: Optional[Sequence[float]] = None,
    reynolds: Optional[Sequence[float]] = None,
    simulate: bool = False,
) -> SweepResult:
    """
    Evaluate the bounds, and optionally an ensemble, at every grid point.

    Axes left as None take the base configuration's value. The Reynolds axis
    is realized by changing the viscosity at fixed U and h. The background
    follows the default choice at each point.

    Args:
        base (ExperimentConfig): Configuration the grid perturbs.
        sigmas, thetas, reynolds: Values along each axis.
        simulate (bool): Also run an ensemble per point, under
            ``<output_dir>/point_<k>``.

    Returns:
        SweepResult: One row per valid point, skipped points with reasons,
        and trend summaries of the mean bound.

    Raises:
        ConfigurationError: If the grid is empty.
    """
    flow = base.flow
    axes = [
        list(sigmas) if sigmas is not None else [flow.ou.noise_amplitude],
        list(thetas) if thetas is not None else [flow.ou.reversion_rate],
        list(reynolds) if reynolds is not None else [flow.reynolds],
    ]
    if any(len(axis) == 0 for axis in axes):
        raise ConfigurationError("sweep grid is empty")

    rows: List[dict] = []
    skipped: List[SkippedPoint] = []
    for k, (sigma, theta, re) in enumerate(itertools.product(*axes)):
        try:
            if not re > 0.0:
                raise ConfigurationError(f"Reynolds number must be positive, got {re!r}")
            nu = flow.ou.mean_speed * flow.geometry.height / re
            point = flow.replace(
                viscosity=nu, noise_amplitude=float(sigma), reversion_rate=float(theta)
            )
            report = bounds_report(point)
        except (ConfigurationError, ValidationError) as exc:
            reason = str(exc).splitlines()[0]
            logger.warning(
                "Sweep point skipped",
                extra={"sigma": sigma, "theta": theta, "reynolds": re, "reason": reason},
            )
            skipped.append(SkippedPoint(float(sigma), float(theta), float(re), reason))
            continue

        row = {"sigma": float(sigma), "theta": float(theta), "reynolds": point.reynolds, "viscosity": nu}
        row.update({name: getattr(report, name) for name in BOUND_COLUMNS})
        if simulate:
            row.update(_simulate_point(base, point, k))
        rows.append(row)

    columns = PARAM_COLUMNS + BOUND_COLUMNS + (STATS_COLUMNS if simulate else [])
    table = pd.DataFrame(rows, columns=columns)
    trends = trend_summary(table)
    logger.info("Sweep finished", extra={"points": len(rows), "skipped": len(skipped), **trends})
    return SweepResult(table=table, skipped=skipped, trends=trends)


def _simulate_point(base: ExperimentConfig, point: FlowConfig, k: int) -> dict:
    cfg = ExperimentConfig.model_validate({**base.model_dump(), "flow": point.model_dump()})
    result = run_ensemble(cfg, output_dir=str(Path(base.output_dir) / f"point_{k:03d}"))
    stats = result.stats
    return {
        "completed": result.summary.completed,
        "mean": stats.mean if stats else None,
        "mean_se": stats.mean_se if stats else None,
        "second_moment": stats.second_moment if stats else None,
        "second_moment_se": stats.second_moment_se if stats else None,
    }


def write_sweep_csv(result: SweepResult, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    result.table.to_csv(path, index=False, float_format="%.17g")
    return path
