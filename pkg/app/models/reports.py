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
Report models emitted by the bounds, diagnostics and harness layers.
"""

from __future__ import annotations

from datetime import datetime
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field


def _unit(unit: str) -> dict:
    return {"unit": unit}


class BoundsReport(BaseModel):
    reynolds: float = Field(
        ..., description="Re = U h / nu.", title="Reynolds",
        json_schema_extra=_unit("1"),
    )
    mean_bound: float = Field(
        ..., description="Upper bound on the expected time-averaged dissipation.",
        title="Mean Bound", json_schema_extra=_unit("U^3/h"),
    )
    mean_bound_general: float = Field(
        ..., description="Same bound evaluated in the general (A, B) form.",
        title="Mean Bound (general A, B)", json_schema_extra=_unit("U^3/h"),
    )
    second_moment_bound: float = Field(
        ..., description="Upper bound on the second moment of the time-averaged dissipation.",
        title="Second Moment Bound", json_schema_extra=_unit("(U^3/h)^2"),
    )
    large_noise_bound: float = Field(
        ..., description="(1/h)(U^3 + U Ut^2 + Ut^4/U) with Ut = sigma/sqrt(theta).",
        title="Large Noise Bound", json_schema_extra=_unit("U^3/h"),
    )
    expected_y_rate: float = Field(
        ..., description="E[Y_T]/T.", title="Expected Y Rate",
        json_schema_extra=_unit("L^2 U^3"),
    )
    kolmogorov_scale_U3_over_h: float = Field(
        ..., description="Reference dissipation U^3/h.", title="U^3/h",
        json_schema_extra=_unit("U^3/h"),
    )


class CheckSummary(BaseModel):
    samples: int = Field(..., description="Points evaluated.", title="Samples")
    min_margin: float = Field(..., description="Smallest margin observed.", title="Min Margin")
    max_margin: float = Field(..., description="Largest margin observed.", title="Max Margin")
    violations: int = Field(..., description="Points violating the check.", title="Violations")

    @property
    def passed(self) -> bool:
        return self.violations == 0


class BackgroundReport(BaseModel):
    reynolds: float = Field(..., description="Re = U h / nu.", title="Reynolds")
    a: float = Field(..., description="A.", title="A")
    b: float = Field(..., description="B.", title="B")
    checks: Dict[str, CheckSummary] = Field(
        ..., description="Named inequality checks.", title="Checks"
    )
    passed: bool = Field(..., description="All checks without violation.", title="Passed")


class DissipationStats(BaseModel):
    horizon: float = Field(..., description="Common horizon T.", title="Horizon")
    count: int = Field(..., description="Trajectories aggregated.", title="Count")
    time_averages: List[float] = Field(
        ..., description="Per-trajectory <eps>_T.", title="Time Averages"
    )
    mean: float = Field(..., description="Ensemble mean of <eps>_T.", title="Mean")
    mean_se: Optional[float] = Field(
        None, description="Standard error of the mean; absent for a single trajectory.", title="Mean SE"
    )
    second_moment: float = Field(
        ..., description="Ensemble mean of <eps>_T^2.", title="Second Moment"
    )
    second_moment_se: Optional[float] = Field(
        None, description="Standard error of the second moment.", title="Second Moment SE"
    )
    jensen_ok: bool = Field(
        ..., description="second_moment >= mean^2.", title="Jensen OK"
    )


class InequalityLedger(BaseModel):
    """Discrete terms of the pathwise energy inequality for one trajectory."""

    dissipation_integral: float = Field(
        ..., description="int_0^T nu |grad v|^2 dt.", title="Dissipation Integral"
    )
    initial_term: float = Field(..., description="2 |v(0)|^2.", title="Initial Term")
    final_term: float = Field(..., description="2 |v(T)|^2.", title="Final Term")
    y_t: float = Field(..., description="Y_T.", title="Y_T")
    m_t: float = Field(..., description="Discretized martingale M_T.", title="M_T")
    quadratic_variation: float = Field(
        ..., description="Discretized [M]_T.", title="Quadratic Variation"
    )
    quadratic_variation_cap: float = Field(
        ..., description="3 sigma^2 L^2 (A/B)^3 int |grad v|^2 dt.", title="QV Cap"
    )
    slack: float = Field(..., description="RHS - LHS.", title="Slack")
    tolerance: float = Field(..., description="Audit tolerance.", title="Tolerance")
    passed: bool = Field(..., description="slack >= -tolerance.", title="Passed")
    quadratic_variation_ok: bool = Field(
        ..., description="[M]_T <= cap + tolerance.", title="QV OK"
    )
    trace_ok: Optional[bool] = Field(
        None, description="Trace lemma held at every recorded step.", title="Trace OK"
    )
    trace_worst_ratio: Optional[float] = Field(
        None, description="Largest lhs/rhs over recorded steps.", title="Trace Worst Ratio"
    )


class MartingaleSummary(BaseModel):
    count: int = Field(..., description="Ledgers aggregated.", title="Count")
    mean: float = Field(..., description="Mean of M_T.", title="Mean")
    standard_error: float = Field(..., description="Standard error.", title="SE")
    z_score: float = Field(..., description="mean / SE.", title="Z")
    passed: bool = Field(..., description="|z| <= 4.", title="Passed")


class TrajectoryStatus(str, Enum):
    PENDING = "pending"
    COMPLETED = "completed"
    FAILED = "failed"


class ArtifactEntry(BaseModel):
    path: str = Field(..., description="Path relative to the run root.", title="Path")
    sha256: str = Field(..., description="Content checksum.", title="SHA-256")


class TrajectoryEntry(BaseModel):
    index: int = Field(..., description="Trajectory index.", title="Index")
    seed: int = Field(..., description="Derived seed.", title="Seed")
    status: TrajectoryStatus = Field(
        TrajectoryStatus.PENDING, description="Completion status.", title="Status"
    )
    time_average: Optional[float] = Field(
        None, description="<eps>_T when completed.", title="Time Average"
    )
    error: Optional[str] = Field(None, description="Failure reason.", title="Error")
    artifacts: List[ArtifactEntry] = Field(
        default_factory=list, description="Files written.", title="Artifacts"
    )


class RunManifest(BaseModel):
    config_hash: str = Field(..., description="Hash of the experiment config.", title="Config Hash")
    code_version: str = Field(..., description="Package version.", title="Code Version")
    created_at: datetime = Field(..., description="Creation time (UTC).", title="Created At")
    updated_at: datetime = Field(..., description="Last update (UTC).", title="Updated At")
    trajectories: List[TrajectoryEntry] = Field(
        ..., description="Per-trajectory records.", title="Trajectories"
    )
    artifacts: List[ArtifactEntry] = Field(
        default_factory=list, description="Run-level files.", title="Artifacts"
    )

    def completed(self) -> List[TrajectoryEntry]:
        return [t for t in self.trajectories if t.status == TrajectoryStatus.COMPLETED]


class RunSummary(BaseModel):
    """Ensemble-level results written to ``stats.json`` at a run root."""

    completed: int = Field(..., description="Completed trajectories.", title="Completed")
    failed: int = Field(..., description="Failed trajectories.", title="Failed")
    stats: Optional[DissipationStats] = Field(
        None, description="Statistics over the completed subset.", title="Stats"
    )
    bounds: Optional[BoundsReport] = Field(
        None, description="Bounds for the run's flow.", title="Bounds"
    )
    bounds_error: Optional[str] = Field(
        None, description="Why the bounds were not evaluated.", title="Bounds Error"
    )
    mean_within_bound: Optional[bool] = Field(
        None, description="mean + 3 SE <= mean bound.", title="Mean Within Bound"
    )
    second_moment_within_bound: Optional[bool] = Field(
        None,
        description="second moment + 3 SE <= second-moment bound.",
        title="Second Moment Within Bound",
    )
    martingale: Optional[MartingaleSummary] = Field(
        None, description="M_T against zero over the audited trajectories.", title="Martingale"
    )
    energy_pass_rate: Optional[float] = Field(
        None, description="Share of audited trajectories with slack >= -tolerance.",
        title="Energy Pass Rate",
    )


class EnsembleVerdict(BaseModel):
    """Outcome of re-verifying a finished run from its artifacts."""

    summary: RunSummary = Field(..., description="Recomputed summary.", title="Summary")
    checks: Dict[str, bool] = Field(..., description="Hard invariants by name.", title="Checks")
    passed: bool = Field(..., description="All hard invariants hold.", title="Passed")
