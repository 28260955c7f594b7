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

from app.background.profile import (
    Lf_sq_cap,
    ProfileSample,
    delta,
    delta_inequality_margin,
    f_derivatives,
    f_extended,
    generator_Lf,
    grad_phi_norm_sq,
    int_f2prime_sq,
    int_fprime_sq,
    int_Lf_sq,
    phi,
    phi_slope,
    profile_sample,
)
from app.background.verify import (
    quad_fprime_sq,
    quad_grad_phi_norm_sq,
    quad_Lf_sq,
    verify_background,
)

__all__ = [
    "Lf_sq_cap",
    "ProfileSample",
    "delta",
    "delta_inequality_margin",
    "f_derivatives",
    "f_extended",
    "generator_Lf",
    "grad_phi_norm_sq",
    "int_f2prime_sq",
    "int_fprime_sq",
    "int_Lf_sq",
    "phi",
    "phi_slope",
    "profile_sample",
    "quad_Lf_sq",
    "quad_fprime_sq",
    "quad_grad_phi_norm_sq",
    "verify_background",
]
