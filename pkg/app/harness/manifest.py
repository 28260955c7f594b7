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
Run manifests: seeds, completion status and content checksums of every
artifact under a run directory.

Only the coordinating process writes the manifest.
"""

from __future__ import annotations

import logging
import os
from datetime import datetime, timezone
from pathlib import Path
from typing import List

from pydantic import ValidationError

from app.core.errors import ManifestError
from app.core.utils import code_version, sha256_file
from app.models import (
    ArtifactEntry,
    ExperimentConfig,
    RunManifest,
    TrajectoryEntry,
    TrajectoryStatus,
)
from app.ou.rng import derive_seed

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def _now() -> datetime:
    return datetime.now(tz=timezone.utc)


def new_manifest(cfg: ExperimentConfig) -> RunManifest:
    """A manifest with every trajectory pending and its seed derived from the master seed."""
    now = _now()
    return RunManifest(
        config_hash=cfg.config_hash(),
        code_version=code_version(),
        created_at=now,
        updated_at=now,
        trajectories=[
            TrajectoryEntry(index=i, seed=derive_seed(cfg.master_seed, i))
            for i in range(cfg.trajectories)
        ],
    )


def artifact_entry(root: Path, path: Path) -> ArtifactEntry:
    return ArtifactEntry(path=Path(path).relative_to(root).as_posix(), sha256=sha256_file(path))


def load_manifest(root: str | Path) -> RunManifest:
    """
    Raises:
        ManifestError: If the manifest is missing or unreadable.
    """
    path = Path(root) / MANIFEST_NAME
    if not path.is_file():
        raise ManifestError(f"no manifest at {path}")
    try:
        return RunManifest.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as exc:
        raise ManifestError(f"malformed manifest {path}: {exc}") from exc


def write_manifest(root: str | Path, manifest: RunManifest) -> Path:
    """Write through a temporary file so a crash never leaves a torn manifest."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    manifest = manifest.model_copy(update={"updated_at": _now()})
    target = root / MANIFEST_NAME
    tmp = target.with_suffix(".json.tmp")
    tmp.write_text(manifest.model_dump_json(indent=2), encoding="utf-8")
    os.replace(tmp, target)
    return target


def verify_artifacts(root: str | Path, entries: List[ArtifactEntry]) -> None:
    """
    Raises:
        ManifestError: If a listed file is missing or its checksum differs.
    """
    root = Path(root)
    for entry in entries:
        path = root / entry.path
        if not path.is_file():
            raise ManifestError(f"missing artifact {entry.path}")
        if sha256_file(path) != entry.sha256:
            raise ManifestError(f"checksum mismatch for {entry.path}")


def resume_manifest(root: str | Path, cfg: ExperimentConfig) -> RunManifest:
    """
    Manifest to continue from: the existing one when it belongs to ``cfg``,
    otherwise a fresh one.

    Completed trajectories whose artifacts no longer verify are reset to
    pending. Entries are added or dropped to match ``cfg.trajectories``;
    existing seeds are kept since seeds depend only on the index.

    Raises:
        ManifestError: If an existing manifest was written for another config.
    """
    root = Path(root)
    if not (root / MANIFEST_NAME).is_file():
        return new_manifest(cfg)
    manifest = load_manifest(root)
    if manifest.config_hash != cfg.config_hash():
        raise ManifestError(
            f"{root} holds a run of config {manifest.config_hash[:12]}, "
            f"not {cfg.config_hash()[:12]}"
        )
    entries = {t.index: t for t in manifest.trajectories}
    trajectories = []
    for i in range(cfg.trajectories):
        entry = entries.get(i) or TrajectoryEntry(index=i, seed=derive_seed(cfg.master_seed, i))
        if entry.status == TrajectoryStatus.COMPLETED:
            try:
                verify_artifacts(root, entry.artifacts)
            except ManifestError as exc:
                logger.warning(
                    "Completed trajectory failed verification; rerunning",
                    extra={"index": i, "reason": str(exc)},
                )
                entry = TrajectoryEntry(index=i, seed=entry.seed)
        elif entry.status == TrajectoryStatus.FAILED:
            entry = TrajectoryEntry(index=i, seed=entry.seed)
        trajectories.append(entry)
    return manifest.model_copy(update={"trajectories": trajectories})
