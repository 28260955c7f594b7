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

from app.bounds.evaluators import (
    bounds_report,
    expected_Y_rate,
    large_noise_bound,
    mean_bound,
    mean_bound_general,
    second_moment_bound,
    second_moment_polynomial,
)

__all__ = [
    "bounds_report",
    "expected_Y_rate",
    "large_noise_bound",
    "mean_bound",
    "mean_bound_general",
    "second_moment_bound",
    "second_moment_polynomial",
]
