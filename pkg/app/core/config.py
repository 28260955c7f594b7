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

import logging
from typing import Any, List, Union

from pydantic_settings import BaseSettings, SettingsConfigDict

# Error messages
INTERNAL_ERROR_MESSAGE = "An unexpected error occurred. Please try again later."


def parse_cors(v: Any) -> Union[List[str], str]:
    if isinstance(v, str) and not v.startswith("["):
        return [i.strip() for i in v.split(",")]
    if isinstance(v, (list, str)):
        return v
    raise ValueError(v)


class APISettings(BaseSettings):
    API_V1_STR: str = "/api/v1"
    PROJECT_NAME: str = "Stochastic Shear Lab"
    DESCRIPTION: str = (
        "Bounds, simulations and audits for shear flow driven by an "
        "Ornstein-Uhlenbeck wall"
    )
    SHEARLAB_HOST: str = "127.0.0.1"
    SHEARLAB_PORT: int = 8133
    CORS_ORIGINS: Union[List[str], str] = "*"

    model_config = SettingsConfigDict(extra="ignore")


class LabSettings(BaseSettings):
    OUTPUT_ROOT: str = "runs"
    MAX_WORKERS: int = 1

    # Half-width of the Gibbs quadrature window, in units of the potential scale
    GIBBS_WINDOW: float = 8.0

    # Cap on the REST ensemble size, keeps the stateless endpoint synchronous
    API_MAX_TRAJECTORIES: int = 16

    model_config = SettingsConfigDict(extra="ignore")


def load_and_validate_lab_settings() -> LabSettings:
    """
    Loads and validates laboratory settings at startup.
    """
    settings = LabSettings()
    logger = logging.getLogger(__name__)

    problems = []
    if settings.MAX_WORKERS < 1:
        problems.append("MAX_WORKERS must be >= 1")
    if settings.GIBBS_WINDOW <= 0.0:
        problems.append("GIBBS_WINDOW must be positive")
    if settings.API_MAX_TRAJECTORIES < 1:
        problems.append("API_MAX_TRAJECTORIES must be >= 1")

    if problems:
        raise ValueError("Invalid laboratory settings: " + "; ".join(problems))

    logger.info("Settings validated successfully.")
    return settings
