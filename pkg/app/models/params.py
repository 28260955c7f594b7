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
Configuration models: noise, background profile, geometry, grid and experiment.

All models are immutable pydantic models, so they can be hashed into run
manifests, sent over the REST surface and shipped to worker processes.
"""

from __future__ import annotations

import hashlib
import json
import math
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.errors import ConfigurationError, HypothesisViolationError


class _Frozen(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


def _finite(value: float, name: str) -> float:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite")
    return value


class OUParams(_Frozen):
    """
    Parameters of the wall-speed process dX = theta (U - X) dt + sigma dW.

    ``reversion_rate`` may be zero (driftless Brownian limit); operations that
    need the stationary law reject it.
    """

    mean_speed: float = Field(
        ..., description="Mean wall speed U [velocity].", title="Mean Speed"
    )
    reversion_rate: float = Field(
        ..., ge=0.0, description="Reversion rate theta [1/time].", title="Reversion Rate"
    )
    noise_amplitude: float = Field(
        ...,
        ge=0.0,
        description="Noise amplitude sigma [velocity/sqrt(time)].",
        title="Noise Amplitude",
    )

    @field_validator("mean_speed", "reversion_rate", "noise_amplitude")
    @classmethod
    def _check_finite(cls, v: float, info) -> float:
        return _finite(v, info.field_name)

    def require_stationary(self) -> None:
        if self.reversion_rate <= 0.0:
            raise ConfigurationError(
                "stationary law requires reversion_rate > 0, "
                f"got {self.reversion_rate!r}"
            )

    @property
    def stationary_variance(self) -> float:
        """sigma^2 / (2 theta)."""
        self.require_stationary()
        return self.noise_amplitude**2 / (2.0 * self.reversion_rate)

    @property
    def velocity_scale(self) -> float:
        """Alternative characteristic velocity sigma / sqrt(theta)."""
        self.require_stationary()
        return self.noise_amplitude / math.sqrt(self.reversion_rate)


class Geometry(_Frozen):
    length: float = Field(
        ..., gt=0.0, description="Horizontal period L [length].", title="Length"
    )
    height: float = Field(
        ..., gt=0.0, description="Channel height h [length].", title="Height"
    )

    @field_validator("length", "height")
    @classmethod
    def _check_finite(cls, v: float, info) -> float:
        return _finite(v, info.field_name)

    @property
    def volume(self) -> float:
        return self.length * self.length * self.height


class BackgroundParams(_Frozen):
    """
    Constants of the boundary-layer thickness delta(z) = A / (z^2 + B).
    """

    a: float = Field(..., gt=0.0, description="A [velocity*length].", title="A")
    b: float = Field(..., gt=0.0, description="B [velocity^2].", title="B")
    length: float = Field(..., gt=0.0, description="Period L [length].", title="Length")
    height: float = Field(..., gt=0.0, description="Height h [length].", title="Height")

    @field_validator("a", "b", "length", "height")
    @classmethod
    def _check_finite(cls, v: float, info) -> float:
        return _finite(v, info.field_name)

    @classmethod
    def default(
        cls, nu: float, mean_speed: float, length: float, height: float
    ) -> "BackgroundParams":
        """The choice A = nu U, B = U^2."""
        if mean_speed == 0.0:
            raise ConfigurationError("default background needs a nonzero mean speed")
        u = abs(mean_speed)
        return cls(a=nu * u, b=u * u, length=length, height=height)

    @property
    def max_thickness(self) -> float:
        """A / B, the thickness at z = 0."""
        return self.a / self.b

    def is_admissible(self, nu: float) -> bool:
        return self.a / self.b < self.height and self.a <= nu * math.sqrt(self.b)

    def check_admissible(self, nu: float) -> None:
        """
        Raises:
            HypothesisViolationError: If A/B >= h or A > nu sqrt(B).
        """
        if not self.a / self.b < self.height:
            raise HypothesisViolationError(
                f"inadmissible background: A/B = {self.a / self.b!r} >= h = {self.height!r}"
            )
        if self.a > nu * math.sqrt(self.b) * (1.0 + 1e-12):
            raise HypothesisViolationError(
                f"inadmissible background: A = {self.a!r} > nu*sqrt(B) = "
                f"{nu * math.sqrt(self.b)!r}"
            )


class GridSpec(_Frozen):
    n1: int = Field(32, ge=1, description="Cells along x1.", title="N1")
    n2: int = Field(32, ge=1, description="Cells along x2.", title="N2")
    n3: int = Field(32, ge=8, description="Cells along x3.", title="N3")
    dt: float = Field(..., gt=0.0, description="Time step [time].", title="Dt")
    cfl_safety: float = Field(
        0.5, gt=0.0, le=1.0, description="Stability safety factor.", title="CFL Safety"
    )

    @field_validator("n1", "n2")
    @classmethod
    def _power_of_two(cls, v: int, info) -> int:
        if v & (v - 1):
            raise ValueError(f"{info.field_name} must be a power of two, got {v}")
        return v

    @field_validator("dt", "cfl_safety")
    @classmethod
    def _check_finite(cls, v: float, info) -> float:
        return _finite(v, info.field_name)

    @property
    def is_one_dimensional(self) -> bool:
        return self.n1 == 1 and self.n2 == 1


class FlowConfig(_Frozen):
    """
    Channel geometry, fluid viscosity, wall noise and background constants.

    When ``background`` is omitted it defaults to A = nu U, B = U^2.
    """

    geometry: Geometry = Field(..., description="Channel box.", title="Geometry")
    viscosity: float = Field(
        ..., gt=0.0, description="Kinematic viscosity nu [length^2/time].", title="Viscosity"
    )
    ou: OUParams = Field(..., description="Wall-speed process.", title="OU Parameters")
    background: BackgroundParams = Field(
        ..., description="Background-flow constants.", title="Background"
    )

    @model_validator(mode="before")
    @classmethod
    def _default_background(cls, data: Any) -> Any:
        if not isinstance(data, dict) or data.get("background") is not None:
            return data
        try:
            geometry = Geometry.model_validate(data["geometry"])
            ou = OUParams.model_validate(data["ou"])
            nu = float(data["viscosity"])
        except (KeyError, TypeError):
            return data
        if ou.mean_speed == 0.0:
            raise ValueError("background must be given when the mean speed is zero")
        return {
            **data,
            "background": BackgroundParams.default(
                nu, ou.mean_speed, geometry.length, geometry.height
            ),
        }

    @model_validator(mode="after")
    def _consistent_geometry(self) -> "FlowConfig":
        bg, geo = self.background, self.geometry
        if not (
            math.isclose(bg.length, geo.length, rel_tol=1e-12)
            and math.isclose(bg.height, geo.height, rel_tol=1e-12)
        ):
            raise ValueError("background geometry does not match the channel geometry")
        return self

    @property
    def reynolds(self) -> float:
        return self.ou.mean_speed * self.geometry.height / self.viscosity

    def require_theorem_hypotheses(self) -> None:
        """
        Raises:
            HypothesisViolationError: If Re <= 1 or the background is inadmissible.
        """
        if not self.reynolds > 1.0:
            raise HypothesisViolationError(
                f"bounds require Re = U h / nu > 1, got Re = {self.reynolds!r}"
            )
        self.background.check_admissible(self.viscosity)

    def replace(
        self,
        *,
        viscosity: Optional[float] = None,
        keep_background: bool = False,
        **ou_changes: float,
    ) -> "FlowConfig":
        """
        Validated copy with OU fields and/or viscosity replaced.

        The background is recomputed from the new parameters unless
        ``keep_background`` is set.
        """
        ou = self.ou.model_dump()
        ou.update(ou_changes)
        return FlowConfig(
            geometry=self.geometry,
            viscosity=self.viscosity if viscosity is None else viscosity,
            ou=OUParams(**ou),
            background=self.background if keep_background else None,
        )


class InitialCondition(_Frozen):
    kind: Literal["rest", "couette", "perturbed"] = Field(
        "rest", description="Initial velocity field.", title="Kind"
    )
    couette_speed: Optional[float] = Field(
        None,
        description="Wall speed of the initial Couette profile; defaults to U.",
        title="Couette Speed",
    )
    amplitude: float = Field(
        0.0, ge=0.0, description="Perturbation amplitude [velocity].", title="Amplitude"
    )
    seed: int = Field(0, ge=0, description="Perturbation seed.", title="Seed")
    wall: Literal["stationary", "fixed"] = Field(
        "stationary", description="Initial law of the wall speed.", title="Wall"
    )
    x0: Optional[float] = Field(
        None, description="Initial wall speed when wall='fixed'; defaults to U.", title="X0"
    )


class AuditToggles(_Frozen):
    energy: bool = Field(True, description="Run the energy-inequality audit.", title="Energy")
    ito: bool = Field(False, description="Run the Ito residual audit.", title="Ito")
    trace: bool = Field(True, description="Record trace-lemma sides.", title="Trace")
    tolerance_c: float = Field(
        1.0, gt=0.0, description="Audit tolerance constant C.", title="Tolerance C"
    )


_HASH_EXCLUDE = {"output_dir", "workers"}


class ExperimentConfig(_Frozen):
    flow: FlowConfig = Field(..., description="Flow configuration.", title="Flow")
    grid: GridSpec = Field(..., description="Discretization.", title="Grid")
    t_end: float = Field(..., gt=0.0, description="Horizon T [time].", title="T End")
    trajectories: int = Field(1, ge=1, description="Ensemble size N.", title="Trajectories")
    master_seed: int = Field(0, ge=0, description="Master seed.", title="Master Seed")
    output_dir: str = Field("runs/default", description="Output directory.", title="Output Dir")
    workers: int = Field(1, ge=1, description="Worker processes.", title="Workers")
    snapshot_every: int = Field(
        0, ge=0, description="Snapshot cadence in steps; 0 keeps first and last only.",
        title="Snapshot Every",
    )
    initial: InitialCondition = Field(
        default_factory=InitialCondition, description="Initial state.", title="Initial"
    )
    audit: AuditToggles = Field(
        default_factory=AuditToggles, description="Audit toggles.", title="Audit"
    )

    @property
    def steps(self) -> int:
        """Number of solver steps; t_end must be a multiple of dt up to rounding."""
        n = round(self.t_end / self.grid.dt)
        if n < 1 or not math.isclose(n * self.grid.dt, self.t_end, rel_tol=1e-9):
            raise ConfigurationError(
                f"t_end = {self.t_end!r} is not a whole number of steps dt = {self.grid.dt!r}"
            )
        return n

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON form, ignoring where and how wide it runs."""
        payload = self.model_dump(mode="json", exclude=_HASH_EXCLUDE)
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
