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
Exception hierarchy shared by every shearlab module.

Parameter validation on models surfaces as pydantic ``ValidationError``;
the classes below cover operation preconditions and runtime failures.
"""

from __future__ import annotations

from typing import Any, Optional


class ShearLabError(Exception):
    """Base class for all errors raised by the laboratory."""


class ConfigurationError(ShearLabError, ValueError):
    """Invalid or inconsistent configuration."""


class HypothesisViolationError(ConfigurationError):
    """A theorem-level evaluator was called outside its hypotheses (Re <= 1, inadmissible (A, B))."""


class StabilityError(ConfigurationError):
    """The requested time step violates the explicit stability rule."""

    def __init__(self, message: str, dt: float, dt_max: float):
        super().__init__(message)
        self.dt = dt
        self.dt_max = dt_max


class BlowUpError(ShearLabError, RuntimeError):
    """
    A trajectory produced a non-finite field.

    Attributes:
        step (int): Index of the step that failed.
        time (float): Simulation time at the last stable state.
        last_stable (Any): The last finite ``VelocityField``.
    """

    def __init__(
        self, message: str, step: int, time: float, last_stable: Optional[Any] = None
    ):
        super().__init__(message)
        self.step = step
        self.time = time
        self.last_stable = last_stable


class AuditInputError(ShearLabError, ValueError):
    """An audit was asked to run on a record lacking the series it needs."""


class ManifestError(ShearLabError):
    """A run directory does not match its manifest."""
