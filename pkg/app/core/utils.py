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

import hashlib
import logging
import math
import os
from importlib import metadata
from pathlib import Path
from typing import Iterable, Type

from dotenv import find_dotenv, load_dotenv

logger = logging.getLogger(__name__)

DISTRIBUTION_NAME = "stochastic-shear-lab"
FALLBACK_VERSION = "0.1.0"


def load_environment_variables(env_file: str | None = None) -> None:
    """
    Load environment variables from a .env file safely.

    Args:
        env_file (str | None): Path to a specific `.env` file. If None,
                               it searches for a `.env` file automatically.

    Returns:
        None
    """
    env_path = env_file or find_dotenv(usecwd=True)

    if env_path and os.path.exists(env_path):
        load_dotenv(env_path, override=True)
        logger.info(f".env file loaded from {env_path}")
    else:
        logger.info(".env file not found, using process environment only")


def sha256_file(path: str | Path, chunk_size: int = 1 << 20) -> str:
    """
    Content checksum of a file.

    Args:
        path (str | Path): File to hash.
        chunk_size (int): Read size in bytes.

    Returns:
        str: Hex SHA-256 digest.
    """
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(chunk_size), b""):
            digest.update(chunk)
    return digest.hexdigest()


def require_finite(**values: float) -> None:
    """Raise ValueError naming the first non-finite keyword argument."""
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")


def require_finite_all(
    name: str, values: Iterable[float], error: Type[ValueError] = ValueError
) -> None:
    for value in values:
        if not math.isfinite(value):
            raise error(f"{name} contains a non-finite value {value!r}")


def code_version() -> str:
    """Installed distribution version, or the source-tree fallback."""
    try:
        return metadata.version(DISTRIBUTION_NAME)
    except metadata.PackageNotFoundError:
        return FALLBACK_VERSION
