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

from app.ou.gibbs import GibbsCheckResult, GibbsLaw, GradientSystem, gibbs_longrun_check
from app.ou.moments import centered_moment, double_factorial, raw_moment, stationary_moment
from app.ou.process import (
    OUEnsemble,
    OUPath,
    exact_step,
    quadratic_variation,
    sample_path,
    sample_paths,
    stationary_sample,
    time_average_square,
    transition_coefficients,
    transition_moments,
    uniform_times,
)
from app.ou.rng import derive_seed, generator

__all__ = [
    "GibbsCheckResult",
    "GibbsLaw",
    "GradientSystem",
    "OUEnsemble",
    "OUPath",
    "centered_moment",
    "derive_seed",
    "double_factorial",
    "exact_step",
    "generator",
    "gibbs_longrun_check",
    "quadratic_variation",
    "raw_moment",
    "sample_path",
    "sample_paths",
    "stationary_moment",
    "stationary_sample",
    "time_average_square",
    "transition_coefficients",
    "transition_moments",
    "uniform_times",
]
