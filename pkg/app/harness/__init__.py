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

from app.harness.config_file import config_from_string, config_to_string, dump_config, load_config
from app.harness.experiment import (
    LoadedRun,
    load_run,
    run_trajectory,
    simulate_into,
    trajectory_dir,
    verify_energy,
    verify_ensemble,
)
from app.harness.manifest import load_manifest, new_manifest, resume_manifest, write_manifest
from app.harness.sweep import SweepResult, sweep, write_sweep_csv
from app.harness.workflow import EnsembleResult, ExperimentWorkflow, run_ensemble

__all__ = [
    "EnsembleResult",
    "ExperimentWorkflow",
    "LoadedRun",
    "SweepResult",
    "config_from_string",
    "config_to_string",
    "dump_config",
    "load_config",
    "load_manifest",
    "load_run",
    "new_manifest",
    "resume_manifest",
    "run_ensemble",
    "run_trajectory",
    "simulate_into",
    "sweep",
    "trajectory_dir",
    "verify_energy",
    "verify_ensemble",
    "write_manifest",
    "write_sweep_csv",
]
