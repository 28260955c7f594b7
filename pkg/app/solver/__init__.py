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

from app.solver.field import VelocityField, couette_profile, init_field, kinetic_energy
from app.solver.grid import Mesh, check_stability, stable_dt
from app.solver.operators import divergence, project
from app.solver.poisson import PoissonSolver, poisson_solver
from app.solver.snapshots import read_snapshot, write_snapshot
from app.solver.stepper import dissipation, gradient_norm_sq, step, wall_stress, wall_work
from app.solver.trajectory import (
    TrajectoryRecord,
    read_trajectory_csv,
    simulate_trajectory,
    write_trajectory_csv,
)

__all__ = [
    "Mesh",
    "PoissonSolver",
    "TrajectoryRecord",
    "VelocityField",
    "check_stability",
    "couette_profile",
    "dissipation",
    "divergence",
    "gradient_norm_sq",
    "init_field",
    "kinetic_energy",
    "poisson_solver",
    "project",
    "read_snapshot",
    "read_trajectory_csv",
    "simulate_trajectory",
    "stable_dt",
    "step",
    "wall_stress",
    "wall_work",
    "write_snapshot",
    "write_trajectory_csv",
]
