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
Structured JSON logging for the laboratory.

Console and rotating-file handlers share one formatter; the level comes from
``LOG_LEVEL``. Worker processes spawned by the ensemble runner call
``configure_logging`` again, which is a no-op once handlers are installed.
"""

import logging
import os
from logging.handlers import RotatingFileHandler
from pathlib import Path

from pythonjsonlogger.json import JsonFormatter

_HANDLER_TAG = "_shearlab_handler"


def get_log_dir() -> Path:
    """Returns the log directory path and ensures it exists."""
    log_dir = Path(os.getenv("SHEARLAB_LOG_DIR", str(Path.cwd() / "logs")))
    log_dir.mkdir(parents=True, exist_ok=True)
    return log_dir


def get_log_level() -> str:
    """Retrieves the log level from environment variables (defaults to INFO)."""
    return os.getenv("LOG_LEVEL", "INFO").upper()


def configure_logging(log_filename: str = "shearlab.log") -> logging.Logger:
    """
    Configures structured JSON logging with rotation.

    Args:
        log_filename (str): Name of the log file inside the log directory.

    Returns:
        logging.Logger: The configured root logger.
    """
    logger = logging.getLogger()
    logger.setLevel(get_log_level())

    if any(getattr(h, _HANDLER_TAG, False) for h in logger.handlers):
        return logger

    log_file = get_log_dir() / log_filename
    formatter = JsonFormatter(
        "{asctime} {levelname} {pathname} {module} {funcName} {message} {exc_info}",
        style="{",
    )

    stream_handler = logging.StreamHandler()
    stream_handler.setFormatter(formatter)
    setattr(stream_handler, _HANDLER_TAG, True)
    logger.addHandler(stream_handler)

    file_handler = RotatingFileHandler(
        log_file, mode="a", maxBytes=5 * 1024 * 1024, backupCount=5, encoding="utf-8"
    )
    file_handler.setFormatter(formatter)
    setattr(file_handler, _HANDLER_TAG, True)
    logger.addHandler(file_handler)

    logger.info(
        "Logging initialized with rotation.", extra={"log_destination": str(log_file)}
    )

    return logger
