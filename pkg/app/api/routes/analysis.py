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

from __future__ import annotations

import logging

from fastapi import APIRouter, HTTPException, status
from pydantic import ValidationError

from app.background import verify_background
from app.bounds import bounds_report
from app.core.config import INTERNAL_ERROR_MESSAGE
from app.core.errors import ShearLabError
from app.models import (
    BackgroundReport,
    BackgroundRequest,
    BoundsReport,
    ErrorResponse,
    FlowConfig,
    MomentRequest,
    MomentResponse,
)
from app.ou import stationary_moment

router = APIRouter(tags=["Analysis"])
logger = logging.getLogger(__name__)

_RESPONSES = {
    "422": {"model": ErrorResponse},
    "500": {"model": ErrorResponse},
}


def _unprocessable(exc: Exception) -> HTTPException:
    logger.info("Rejected request: %s", exc)
    return HTTPException(status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(exc))


def _internal(exc: Exception) -> HTTPException:
    logger.error("Internal error during request processing: %s", exc, exc_info=True)
    return HTTPException(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR, detail=INTERNAL_ERROR_MESSAGE
    )


@router.post("/bounds", response_model=BoundsReport, responses=_RESPONSES)
def post_bounds(body: FlowConfig) -> BoundsReport:
    """
    Evaluate the dissipation bounds for a flow configuration.
    """
    try:
        return bounds_report(body)
    except (ShearLabError, ValidationError) as exc:
        raise _unprocessable(exc) from exc
    except Exception as exc:
        raise _internal(exc) from exc


@router.post("/ou/moments", response_model=MomentResponse, responses=_RESPONSES)
def post_ou_moment(body: MomentRequest) -> MomentResponse:
    """
    Exact stationary moment of the wall-speed process.
    """
    try:
        return MomentResponse(value=stationary_moment(body.ou, body.k, centered=body.centered))
    except (ShearLabError, ValueError) as exc:
        raise _unprocessable(exc) from exc
    except Exception as exc:
        raise _internal(exc) from exc


@router.post("/verify/background", response_model=BackgroundReport, responses=_RESPONSES)
def post_verify_background(body: BackgroundRequest) -> BackgroundReport:
    """
    Scan the background-flow inequalities over random wall speeds.
    """
    logger.info("Background verification requested", extra={"samples": body.samples})
    try:
        return verify_background(body.ou, body.nu, body.h, body.L, body.samples, seed=body.seed)
    except (ShearLabError, ValidationError) as exc:
        raise _unprocessable(exc) from exc
    except Exception as exc:
        raise _internal(exc) from exc
