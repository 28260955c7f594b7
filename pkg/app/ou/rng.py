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
Counter-based random streams.

Trajectory ``i`` of an ensemble draws from a Philox stream keyed by a hash of
``(master_seed, i)``; no generator state is shared between trajectories.
"""

import hashlib

import numpy as np

_SEED_KEY = b"shearlab-seed-v1"


def derive_seed(master_seed: int, index: int) -> int:
    """
    Derive the 64-bit seed of stream ``index`` from ``master_seed``.

    Args:
        master_seed (int): Non-negative experiment seed.
        index (int): Non-negative stream index.

    Returns:
        int: Seed in [0, 2**64).
    """
    if master_seed < 0 or index < 0:
        raise ValueError("master_seed and index must be non-negative")
    message = master_seed.to_bytes(16, "little") + index.to_bytes(16, "little")
    digest = hashlib.blake2b(message, key=_SEED_KEY, digest_size=8).digest()
    return int.from_bytes(digest, "little")


def generator(seed: int) -> np.random.Generator:
    """Philox-backed generator for ``seed``."""
    return np.random.Generator(np.random.Philox(seed))
