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

from app.models.params import (
    AuditToggles,
    BackgroundParams,
    ExperimentConfig,
    FlowConfig,
    Geometry,
    GridSpec,
    InitialCondition,
    OUParams,
)
from app.models.reports import (
    ArtifactEntry,
    BackgroundReport,
    BoundsReport,
    CheckSummary,
    DissipationStats,
    EnsembleVerdict,
    InequalityLedger,
    MartingaleSummary,
    RunManifest,
    RunSummary,
    TrajectoryEntry,
    TrajectoryStatus,
)
from app.models.api import (
    BackgroundRequest,
    ErrorResponse,
    MomentRequest,
    MomentResponse,
    RunWaitResponse,
)

__all__ = [
    "BackgroundRequest",
    "ErrorResponse",
    "MomentRequest",
    "MomentResponse",
    "RunWaitResponse",
    "ArtifactEntry",
    "AuditToggles",
    "BackgroundParams",
    "BackgroundReport",
    "BoundsReport",
    "CheckSummary",
    "DissipationStats",
    "EnsembleVerdict",
    "ExperimentConfig",
    "FlowConfig",
    "Geometry",
    "GridSpec",
    "InequalityLedger",
    "InitialCondition",
    "MartingaleSummary",
    "OUParams",
    "RunManifest",
    "RunSummary",
    "TrajectoryEntry",
    "TrajectoryStatus",
]
