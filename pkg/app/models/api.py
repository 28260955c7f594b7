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

"""Request and response bodies of the REST surface."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, RootModel

from app.models.params import OUParams
from app.models.reports import BoundsReport, RunManifest, RunSummary


class ErrorResponse(RootModel[str]):
    root: str = Field(
        ..., description="Error message returned from the server", title="ErrorResponse"
    )


class MomentRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    ou: OUParams = Field(..., description="Wall-speed process.", title="OU Parameters")
    k: int = Field(..., ge=1, le=64, description="Moment order.", title="K")
    centered: bool = Field(
        False, description="Return E[(U - X)^k] instead of E[X^k].", title="Centered"
    )


class MomentResponse(BaseModel):
    value: float = Field(..., description="Exact stationary moment.", title="Value")


class BackgroundRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    ou: OUParams = Field(..., description="Wall-speed process.", title="OU Parameters")
    nu: float = Field(..., gt=0.0, description="Viscosity.", title="Nu")
    h: float = Field(..., gt=0.0, description="Channel height.", title="H")
    L: float = Field(..., gt=0.0, description="Horizontal period.", title="L")
    samples: int = Field(
        1000, ge=1, le=1_000_000, description="Random wall speeds scanned.", title="Samples"
    )
    seed: int = Field(0, ge=0, description="Scan seed.", title="Seed")


class RunWaitResponse(BaseModel):
    manifest: RunManifest = Field(..., description="Run manifest.", title="Manifest")
    stats: RunSummary = Field(..., description="Ensemble summary.", title="Stats")
    bounds: Optional[BoundsReport] = Field(
        None, description="Bounds for the run's flow, when its hypotheses hold.", title="Bounds"
    )
