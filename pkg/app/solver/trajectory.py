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
Trajectories: the OU wall coupled to the channel solver, one exact wall
update per solver step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid

from app.core.errors import BlowUpError
from app.models import FlowConfig, GridSpec, InitialCondition
from app.ou.process import OUPath, sample_path, uniform_times
from app.solver.field import VelocityField, init_field, kinetic_energy
from app.solver.grid import Mesh, check_stability
from app.solver.snapshots import write_snapshot
from app.solver.stepper import dissipation, step, wall_stress

logger = logging.getLogger(__name__)

Probe = Callable[[VelocityField], Mapping[str, float]]

FLOAT_FORMAT = "%.17g"
BASE_COLUMNS = ("t", "x_wall", "dW", "dissipation", "energy", "wall_stress")


@dataclass(frozen=True)
class TrajectoryRecord:
    """
    Time series of one trajectory, one entry per recorded time.

    ``increments[i]`` is the Brownian increment over [t_i, t_{i+1}].
    """

    times: np.ndarray
    wall_speed: np.ndarray
    increments: np.ndarray
    dissipation: np.ndarray
    energy: np.ndarray
    wall_stress: np.ndarray
    seed: int
    probes: Dict[str, np.ndarray] = dc_field(default_factory=dict)
    max_divergence: float = 0.0
    initial_field: Optional[VelocityField] = None
    final_field: Optional[VelocityField] = None
    snapshots: List[Path] = dc_field(default_factory=list)

    def __post_init__(self):
        n = len(self.times)
        series = {
            "wall_speed": self.wall_speed,
            "dissipation": self.dissipation,
            "energy": self.energy,
            "wall_stress": self.wall_stress,
            **self.probes,
        }
        for name, values in series.items():
            if len(values) != n:
                raise ValueError(f"series {name!r} has {len(values)} entries, expected {n}")
        if len(self.increments) != n - 1:
            raise ValueError("increments must have one entry per step")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("times must be increasing")

    @property
    def horizon(self) -> float:
        return float(self.times[-1] - self.times[0])

    def time_average(self) -> float:
        """<eps>_T, the trapezoid time average of the dissipation."""
        return float(trapezoid(self.dissipation, self.times) / self.horizon)

    def to_frame(self) -> pd.DataFrame:
        data = {
            "t": self.times,
            "x_wall": self.wall_speed,
            "dW": np.append(self.increments, np.nan),
            "dissipation": self.dissipation,
            "energy": self.energy,
            "wall_stress": self.wall_stress,
        }
        data.update({name: values for name, values in self.probes.items()})
        return pd.DataFrame(data)

    @classmethod
    def from_frame(cls, frame: pd.DataFrame, seed: int = 0) -> "TrajectoryRecord":
        probes = {
            col: frame[col].to_numpy(dtype=float) for col in frame.columns if col not in BASE_COLUMNS
        }
        return cls(
            times=frame["t"].to_numpy(dtype=float),
            wall_speed=frame["x_wall"].to_numpy(dtype=float),
            increments=frame["dW"].to_numpy(dtype=float)[:-1],
            dissipation=frame["dissipation"].to_numpy(dtype=float),
            energy=frame["energy"].to_numpy(dtype=float),
            wall_stress=frame["wall_stress"].to_numpy(dtype=float),
            seed=seed,
            probes=probes,
        )


def write_trajectory_csv(record: TrajectoryRecord, path: str | Path) -> Path:
    """Full-precision CSV of the record's series."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    record.to_frame().to_csv(path, index=False, float_format=FLOAT_FORMAT)
    return path


def read_trajectory_csv(path: str | Path, seed: int = 0) -> TrajectoryRecord:
    return TrajectoryRecord.from_frame(pd.read_csv(path, float_precision="round_trip"), seed=seed)


def _wall_start(initial: InitialCondition, cfg: FlowConfig):
    if initial.wall == "stationary":
        return "stationary"
    return cfg.ou.mean_speed if initial.x0 is None else initial.x0


def simulate_trajectory(
    cfg: FlowConfig,
    grid: GridSpec,
    T: float,
    seed: int,
    initial: InitialCondition,
    probes: Sequence[Probe] = (),
    snapshot_every: int = 0,
    snapshot_dir: Optional[str | Path] = None,
) -> TrajectoryRecord:
    """
    Run one trajectory to time ``T``.

    The wall path is sampled exactly on the solver grid from ``seed``; the
    stability rule is checked against the whole path before the first step.

    Args:
        cfg (FlowConfig): Geometry, viscosity and wall process.
        grid (GridSpec): Discretization; ``T`` must be a whole number of steps.
        T (float): Horizon.
        seed (int): Wall-path seed.
        initial (InitialCondition): Initial field and wall law.
        probes: Callables evaluated on every recorded state.
        snapshot_every (int): Snapshot cadence in steps (0: first and last only).
        snapshot_dir: Where snapshots go; none are written when omitted.

    Returns:
        TrajectoryRecord: Series at every step, reproducible from ``seed``.

    Raises:
        StabilityError: If dt violates the stability rule.
        BlowUpError: If the field stops being finite; carries the last stable state.
    """
    times = uniform_times(T, grid.dt)
    path: OUPath = sample_path(cfg.ou, times, seed, _wall_start(initial, cfg))
    field = init_field(
        cfg.geometry, grid, initial, wall_speed=float(path.values[0]), mean_speed=cfg.ou.mean_speed
    )
    mesh: Mesh = field.mesh
    nu = cfg.viscosity
    check_stability(mesh, nu, max(float(np.abs(path.values).max()), field.max_speed()), grid)

    n = times.size
    eps = np.empty(n)
    energy = np.empty(n)
    stress = np.empty(n)
    probe_series: Dict[str, np.ndarray] = {}
    snapshots: List[Path] = []
    max_div = 0.0

    def record(i: int, state: VelocityField) -> None:
        eps[i] = dissipation(state, nu)
        energy[i] = kinetic_energy(state)
        stress[i] = wall_stress(state)
        for probe in probes:
            for name, value in probe(state).items():
                probe_series.setdefault(name, np.full(n, np.nan))[i] = value
        if snapshot_dir is not None and (
            i == 0 or i == n - 1 or (snapshot_every and i % snapshot_every == 0)
        ):
            snapshots.append(write_snapshot(Path(snapshot_dir) / f"snap_{i:07d}.bin", state))

    logger.info(
        "Trajectory started",
        extra={"seed": seed, "steps": n - 1, "dt": grid.dt, "reynolds": cfg.reynolds},
    )
    initial_field = field
    record(0, field)
    for i in range(1, n):
        try:
            field = step(field, float(path.values[i]), grid.dt, nu)
        except BlowUpError as exc:
            logger.error(
                "Trajectory blew up", extra={"seed": seed, "step": i, "time": field.t}
            )
            raise BlowUpError(str(exc), step=i, time=field.t, last_stable=field) from exc
        max_div = max(max_div, field.max_divergence())
        record(i, field)
        if i % 1000 == 0:
            logger.debug("Trajectory progress", extra={"seed": seed, "step": i})

    result = TrajectoryRecord(
        times=times,
        wall_speed=np.asarray(path.values),
        increments=np.asarray(path.increments),
        dissipation=eps,
        energy=energy,
        wall_stress=stress,
        seed=seed,
        probes=probe_series,
        max_divergence=max_div,
        initial_field=initial_field,
        final_field=field,
        snapshots=snapshots,
    )
    logger.info(
        "Trajectory finished",
        extra={"seed": seed, "time_average": result.time_average(), "max_divergence": max_div},
    )
    return result
