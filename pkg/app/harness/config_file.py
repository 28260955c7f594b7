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
Sectioned key/value experiment files.

    [geometry] L, h      [fluid] nu        [ou] u, theta, sigma
    [background] a, b    [grid] n1, n2, n3, dt, cfl_safety
    [initial] kind, couette_speed, amplitude, seed, wall, x0
    [run] t_end, trajectories, master_seed, output_dir, workers, snapshot_every
    [audit] energy, ito, trace, tolerance_c

Floats are written with ``repr`` so that loading a dumped file reproduces the
configuration exactly.
"""

from __future__ import annotations

import configparser
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import ValidationError

from app.core.errors import ConfigurationError
from app.models import ExperimentConfig

logger = logging.getLogger(__name__)

# (section, key in file) -> (model path, type)
_LAYOUT = {
    ("geometry", "L"): (("flow", "geometry", "length"), float),
    ("geometry", "h"): (("flow", "geometry", "height"), float),
    ("fluid", "nu"): (("flow", "viscosity"), float),
    ("ou", "u"): (("flow", "ou", "mean_speed"), float),
    ("ou", "theta"): (("flow", "ou", "reversion_rate"), float),
    ("ou", "sigma"): (("flow", "ou", "noise_amplitude"), float),
    ("background", "a"): (("flow", "background", "a"), float),
    ("background", "b"): (("flow", "background", "b"), float),
    ("grid", "n1"): (("grid", "n1"), int),
    ("grid", "n2"): (("grid", "n2"), int),
    ("grid", "n3"): (("grid", "n3"), int),
    ("grid", "dt"): (("grid", "dt"), float),
    ("grid", "cfl_safety"): (("grid", "cfl_safety"), float),
    ("initial", "kind"): (("initial", "kind"), str),
    ("initial", "couette_speed"): (("initial", "couette_speed"), float),
    ("initial", "amplitude"): (("initial", "amplitude"), float),
    ("initial", "seed"): (("initial", "seed"), int),
    ("initial", "wall"): (("initial", "wall"), str),
    ("initial", "x0"): (("initial", "x0"), float),
    ("run", "t_end"): (("t_end",), float),
    ("run", "trajectories"): (("trajectories",), int),
    ("run", "master_seed"): (("master_seed",), int),
    ("run", "output_dir"): (("output_dir",), str),
    ("run", "workers"): (("workers",), int),
    ("run", "snapshot_every"): (("snapshot_every",), int),
    ("audit", "energy"): (("audit", "energy"), bool),
    ("audit", "ito"): (("audit", "ito"), bool),
    ("audit", "trace"): (("audit", "trace"), bool),
    ("audit", "tolerance_c"): (("audit", "tolerance_c"), float),
}

_SECTIONS = ("geometry", "fluid", "ou", "background", "grid", "initial", "run", "audit")


def _parser() -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None)
    # keys are case-sensitive (L vs h)
    parser.optionxform = str
    return parser


def _convert(parser: configparser.ConfigParser, section: str, key: str, kind: type) -> Any:
    if kind is bool:
        return parser.getboolean(section, key)
    raw = parser.get(section, key).strip()
    return kind(raw)


def _assign(tree: Dict[str, Any], path: tuple, value: Any) -> None:
    node = tree
    for part in path[:-1]:
        node = node.setdefault(part, {})
    node[path[-1]] = value


def config_from_string(text: str, source: str = "<string>") -> ExperimentConfig:
    """
    Parse an experiment file's contents.

    Raises:
        ConfigurationError: On unknown sections or keys, malformed values, or
            a configuration the models reject.
    """
    parser = _parser()
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigurationError(f"{source}: {exc}") from exc

    tree: Dict[str, Any] = {}
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigurationError(f"{source}: unknown section [{section}]")
        for key in parser[section]:
            entry = _LAYOUT.get((section, key))
            if entry is None:
                raise ConfigurationError(f"{source}: unknown key {key!r} in [{section}]")
            path, kind = entry
            try:
                _assign(tree, path, _convert(parser, section, key, kind))
            except ValueError as exc:
                raise ConfigurationError(f"{source}: [{section}] {key}: {exc}") from exc
    flow = tree.get("flow", {})
    if "background" in flow:
        # the layer lives in the channel box
        geometry = flow.get("geometry", {})
        flow["background"].setdefault("length", geometry.get("length"))
        flow["background"].setdefault("height", geometry.get("height"))
    try:
        return ExperimentConfig.model_validate(tree)
    except ValidationError as exc:
        raise ConfigurationError(f"{source}: {exc}") from exc


def load_config(path: str | Path) -> ExperimentConfig:
    """Read an experiment file from disk."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    cfg = config_from_string(text, source=str(path))
    logger.info("Config loaded", extra={"path": str(path), "config_hash": cfg.config_hash()})
    return cfg


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _lookup(tree: Dict[str, Any], path: tuple) -> Optional[Any]:
    node: Any = tree
    for part in path:
        if not isinstance(node, dict) or part not in node:
            return None
        node = node[part]
    return node


def config_to_string(cfg: ExperimentConfig) -> str:
    """Render ``cfg`` in the sectioned file format; unset optional keys are omitted."""
    tree = cfg.model_dump()
    lines = []
    for section in _SECTIONS:
        lines.append(f"[{section}]")
        for (sec, key), (path, _) in _LAYOUT.items():
            if sec != section:
                continue
            value = _lookup(tree, path)
            if value is not None:
                lines.append(f"{key} = {_format(value)}")
        lines.append("")
    return "\n".join(lines)


def dump_config(cfg: ExperimentConfig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(config_to_string(cfg), encoding="utf-8")
    return path
