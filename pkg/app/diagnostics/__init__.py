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

from app.diagnostics.convergence import observed_order, richardson_order
from app.diagnostics.energy import (
    energy_budget_residual,
    energy_inequality_audit,
    martingale_summary,
    y_total,
)
from app.diagnostics.ensemble import ensemble_stats
from app.diagnostics.fluctuation import (
    FluctuationField,
    FluctuationProbe,
    Lf_profile,
    fluctuation,
    fluctuation_gradient_norm_sq,
    fluctuation_norm_sq,
    fprime_profile,
    layer_integral,
    trace_lemma_check,
)
from app.diagnostics.ito import ItoResidual, ito_residual, ito_residual_detail

__all__ = [
    "FluctuationField",
    "FluctuationProbe",
    "ItoResidual",
    "Lf_profile",
    "energy_budget_residual",
    "energy_inequality_audit",
    "ensemble_stats",
    "fluctuation",
    "fluctuation_gradient_norm_sq",
    "fluctuation_norm_sq",
    "fprime_profile",
    "ito_residual",
    "ito_residual_detail",
    "layer_integral",
    "martingale_summary",
    "observed_order",
    "richardson_order",
    "trace_lemma_check",
    "y_total",
]
