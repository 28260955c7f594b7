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
Binary field snapshots.

Layout: the 8-byte magic ``SHEARSNP``, a little-endian uint32 header length,
a UTF-8 JSON header, then the raw little-endian float64 component arrays in
C order at the offsets the header lists (relative to the end of the header).
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from app.core.errors import ConfigurationError
from app.solver.field import VelocityField
from app.solver.grid import Mesh

MAGIC = b"SHEARSNP"
DTYPE = "<f8"
COMPONENTS = ("u1", "u2", "u3", "p")


def write_snapshot(path: str | Path, field: VelocityField) -> Path:
    """Write ``field`` to ``path`` and return the path."""
    mesh = field.mesh
    components = []
    offset = 0
    for name in COMPONENTS:
        arr = getattr(field, name)
        components.append({"name": name, "shape": list(arr.shape), "offset": offset})
        offset += arr.size * 8
    header = {
        "dims": [mesh.n1, mesh.n2, mesh.n3],
        "extent": [mesh.length, mesh.length, mesh.height],
        "spacing": [mesh.dx1, mesh.dx2, mesh.dz],
        "time": field.t,
        "wall_speed": field.wall_speed,
        "dtype": DTYPE,
        "components": components,
    }
    encoded = json.dumps(header, sort_keys=True).encode("utf-8")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(encoded)))
        fh.write(encoded)
        for name in COMPONENTS:
            fh.write(np.ascontiguousarray(getattr(field, name), dtype=DTYPE).tobytes())
    return path


def read_snapshot(path: str | Path) -> VelocityField:
    """
    Read a snapshot written by ``write_snapshot``.

    Raises:
        ConfigurationError: If the file is not a snapshot.
    """
    data = Path(path).read_bytes()
    if data[: len(MAGIC)] != MAGIC:
        raise ConfigurationError(f"{path} is not a field snapshot")
    (length,) = struct.unpack_from("<I", data, len(MAGIC))
    start = len(MAGIC) + 4
    header = json.loads(data[start : start + length].decode("utf-8"))
    if header.get("dtype") != DTYPE:
        raise ConfigurationError(f"unsupported snapshot dtype {header.get('dtype')!r}")
    body = start + length
    arrays = {}
    for comp in header["components"]:
        count = int(np.prod(comp["shape"]))
        arrays[comp["name"]] = np.frombuffer(
            data, dtype=DTYPE, count=count, offset=body + comp["offset"]
        ).reshape(comp["shape"]).copy()
    n1, n2, n3 = header["dims"]
    length_x, _, height = header["extent"]
    mesh = Mesh(length_x, height, n1, n2, n3)
    return VelocityField(
        mesh=mesh,
        t=float(header["time"]),
        wall_speed=float(header["wall_speed"]),
        **arrays,
    )
