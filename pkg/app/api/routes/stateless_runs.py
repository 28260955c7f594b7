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
from pathlib import Path

from fastapi import APIRouter, HTTPException, Request, status

from app.core.config import INTERNAL_ERROR_MESSAGE
from app.core.errors import ShearLabError
from app.harness import run_ensemble
from app.models import ErrorResponse, ExperimentConfig, RunWaitResponse

router = APIRouter(tags=["Stateless Runs"])
logger = logging.getLogger(__name__)


@router.post(
    "/runs/wait",
    response_model=RunWaitResponse,
    responses={
        "422": {"model": ErrorResponse},
        "500": {"model": ErrorResponse},
    },
    summary="Run an ensemble and wait for its output",
)
def create_and_wait_for_run(body: ExperimentConfig, request: Request) -> RunWaitResponse:
    """
    Create Run, Wait for Output

    The run is written under the service's output root, keyed by the
    config hash, so repeating a request resumes instead of recomputing.
    """
    settings = request.app.state.settings
    logger.info(
        "Received request to run an ensemble",
        extra={"trajectories": body.trajectories, "config_hash": body.config_hash()},
    )
    if body.trajectories > settings.API_MAX_TRAJECTORIES:
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=(
                f"at most {settings.API_MAX_TRAJECTORIES} trajectories per request, "
                f"got {body.trajectories}"
            ),
        )

    cfg = body.model_copy(update={"workers": min(body.workers, settings.MAX_WORKERS)})
    root = Path(settings.OUTPUT_ROOT) / "api" / cfg.config_hash()[:16]
    try:
        result = run_ensemble(cfg, output_dir=str(root))
    except ShearLabError as exc:
        logger.info("Run rejected: %s", exc)
        raise HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY, detail=str(exc)
        ) from exc
    except Exception as exc:
        logger.error("Internal error during run processing: %s", exc, exc_info=True)
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail=INTERNAL_ERROR_MESSAGE,
        ) from exc

    return RunWaitResponse(manifest=result.manifest, stats=result.summary, bounds=result.bounds)
