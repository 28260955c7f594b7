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
Trajectory-level execution and ensemble aggregation.

Layout of a run directory::

    <root>/config.ini
    <root>/manifest.json
    <root>/stats.json
    <root>/traj_0000/trajectory.csv
    <root>/traj_0000/ledger.json        (energy audit on)
    <root>/traj_0000/ito.json           (Ito audit on)
    <root>/traj_0000/snap_0000000.bin   (snapshot cadence)
"""

from __future__ import annotations

import json
import logging
import shutil
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Tuple

from app.background.profile import delta
from app.bounds import bounds_report
from app.core.errors import ConfigurationError, ManifestError, ShearLabError
from app.core.logging_config import configure_logging
from app.diagnostics import (
    FluctuationProbe,
    energy_inequality_audit,
    ensemble_stats,
    ito_residual_detail,
    martingale_summary,
)
from app.harness.config_file import dump_config, load_config
from app.harness.manifest import artifact_entry, load_manifest, verify_artifacts, write_manifest
from app.models import (
    BoundsReport,
    DissipationStats,
    EnsembleVerdict,
    ExperimentConfig,
    InequalityLedger,
    RunManifest,
    RunSummary,
    TrajectoryEntry,
    TrajectoryStatus,
)
from app.ou.process import OUPath
from app.solver.trajectory import (
    TrajectoryRecord,
    read_trajectory_csv,
    simulate_trajectory,
    write_trajectory_csv,
)

logger = logging.getLogger(__name__)

CONFIG_NAME = "config.ini"
STATS_NAME = "stats.json"
TRAJECTORY_NAME = "trajectory.csv"
LEDGER_NAME = "ledger.json"
ITO_NAME = "ito.json"


def trajectory_dir(root: str | Path, index: int) -> Path:
    return Path(root) / f"traj_{index:04d}"


def _write_json(path: Path, payload: str) -> Path:
    path.write_text(payload, encoding="utf-8")
    return path


def _probes(cfg: ExperimentConfig):
    if cfg.audit.energy or cfg.audit.trace:
        return (FluctuationProbe(cfg.flow.background, cfg.flow.ou, trace=cfg.audit.trace),)
    return ()


def _ito_height(cfg: ExperimentConfig) -> float:
    """Half the layer thickness at the mean speed."""
    return 0.5 * float(delta(cfg.flow.ou.mean_speed, cfg.flow.background))


def simulate_into(cfg: ExperimentConfig, seed: int, out: str | Path) -> Tuple[TrajectoryRecord, List[Path]]:
    """
    Simulate one trajectory of ``cfg`` from ``seed`` and write its artifacts
    (CSV, snapshots and the enabled audits) into ``out``.

    Returns:
        tuple: The record and the paths written.
    """
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    record = simulate_trajectory(
        cfg.flow,
        cfg.grid,
        cfg.t_end,
        seed,
        cfg.initial,
        probes=_probes(cfg),
        snapshot_every=cfg.snapshot_every,
        snapshot_dir=out,
    )
    paths = [write_trajectory_csv(record, out / TRAJECTORY_NAME), *record.snapshots]
    if cfg.audit.energy:
        ledger = energy_inequality_audit(record, cfg.flow, cfg.grid, cfg.audit.tolerance_c)
        paths.append(_write_json(out / LEDGER_NAME, ledger.model_dump_json(indent=2)))
    if cfg.audit.ito:
        path = OUPath(
            times=record.times,
            values=record.wall_speed,
            increments=record.increments,
            seed=seed,
            params=cfg.flow.ou,
        )
        x3 = _ito_height(cfg)
        ito = ito_residual_detail(path, cfg.flow.background, cfg.flow.ou, x3)
        payload = json.dumps(
            {"x3": x3, "value": ito.value, "skipped": ito.skipped, "steps": ito.steps}, indent=2
        )
        paths.append(_write_json(out / ITO_NAME, payload))
    return record, paths


def run_trajectory(cfg: ExperimentConfig, index: int, seed: int, root: str | Path) -> TrajectoryEntry:
    """
    Simulate and audit one trajectory, writing its artifacts under ``root``.

    Failures inside the laboratory are recorded on the returned entry rather
    than raised, so one blow-up does not sink the ensemble.

    Args:
        cfg (ExperimentConfig): Experiment the trajectory belongs to.
        index (int): Trajectory index.
        seed (int): Seed derived for ``index``.
        root (str | Path): Run directory.

    Returns:
        TrajectoryEntry: Completed or failed entry with artifact checksums.
    """
    root = Path(root)
    out = trajectory_dir(root, index)
    if out.exists():
        shutil.rmtree(out)

    try:
        record, paths = simulate_into(cfg, seed, out)
    except ShearLabError as exc:
        logger.error(
            "Trajectory failed", extra={"index": index, "seed": seed, "error": str(exc)}
        )
        return TrajectoryEntry(
            index=index, seed=seed, status=TrajectoryStatus.FAILED, error=f"{type(exc).__name__}: {exc}"
        )

    return TrajectoryEntry(
        index=index,
        seed=seed,
        status=TrajectoryStatus.COMPLETED,
        time_average=record.time_average(),
        artifacts=[artifact_entry(root, p) for p in sorted(paths)],
    )


def simulate_pending(
    cfg: ExperimentConfig,
    root: str | Path,
    manifest: RunManifest,
    on_update: Optional[Callable[[RunManifest], None]] = None,
) -> RunManifest:
    """
    Run every trajectory the manifest does not list as completed.

    With ``cfg.workers > 1`` trajectories run in a process pool; the
    manifest is only touched here, in the coordinating process, and saved
    after each finished trajectory.
    """
    root = Path(root)
    pending = [t for t in manifest.trajectories if t.status != TrajectoryStatus.COMPLETED]
    done = len(manifest.trajectories) - len(pending)
    if done:
        logger.info("Resuming run", extra={"completed": done, "pending": len(pending)})
    entries = {t.index: t for t in manifest.trajectories}

    def settle(entry: TrajectoryEntry) -> None:
        nonlocal manifest
        entries[entry.index] = entry
        manifest = manifest.model_copy(
            update={"trajectories": [entries[i] for i in sorted(entries)]}
        )
        if on_update is not None:
            on_update(manifest)

    if cfg.workers == 1 or len(pending) <= 1:
        for t in pending:
            settle(run_trajectory(cfg, t.index, t.seed, root))
        return manifest

    with ProcessPoolExecutor(
        max_workers=min(cfg.workers, len(pending)), initializer=configure_logging
    ) as pool:
        futures = {pool.submit(run_trajectory, cfg, t.index, t.seed, str(root)): t for t in pending}
        for future in as_completed(futures):
            t = futures[future]
            try:
                settle(future.result())
            except Exception as exc:
                logger.error(
                    "Worker crashed", extra={"index": t.index, "error": str(exc)}, exc_info=True
                )
                settle(
                    TrajectoryEntry(
                        index=t.index, seed=t.seed, status=TrajectoryStatus.FAILED, error=str(exc)
                    )
                )
    return manifest


def load_ledgers(root: str | Path, manifest: RunManifest) -> List[InequalityLedger]:
    ledgers = []
    for t in manifest.completed():
        path = trajectory_dir(root, t.index) / LEDGER_NAME
        if path.is_file():
            ledgers.append(InequalityLedger.model_validate_json(path.read_text(encoding="utf-8")))
    return ledgers


def summarize(
    cfg: ExperimentConfig,
    manifest: RunManifest,
    ledgers: List[InequalityLedger],
    stats: Optional[DissipationStats] = None,
) -> RunSummary:
    """Combine ensemble statistics, audits and bounds into a run summary."""
    completed = sorted(manifest.completed(), key=lambda t: t.index)
    failed = sum(1 for t in manifest.trajectories if t.status == TrajectoryStatus.FAILED)
    if stats is None and completed:
        stats = ensemble_stats([t.time_average for t in completed], cfg.t_end, min_count=1)

    bounds: Optional[BoundsReport] = None
    bounds_error: Optional[str] = None
    try:
        bounds = bounds_report(cfg.flow)
    except ConfigurationError as exc:
        bounds_error = str(exc)
        logger.warning("Bounds not evaluated", extra={"reason": bounds_error})

    mean_ok = second_ok = None
    if stats is not None and bounds is not None:
        mean_ok = stats.mean + 3.0 * (stats.mean_se or 0.0) <= bounds.mean_bound
        second_ok = (
            stats.second_moment + 3.0 * (stats.second_moment_se or 0.0)
            <= bounds.second_moment_bound
        )

    martingale = martingale_summary(ledgers) if len(ledgers) >= 2 else None
    pass_rate = sum(1 for led in ledgers if led.passed) / len(ledgers) if ledgers else None
    return RunSummary(
        completed=len(completed),
        failed=failed,
        stats=stats,
        bounds=bounds,
        bounds_error=bounds_error,
        mean_within_bound=mean_ok,
        second_moment_within_bound=second_ok,
        martingale=martingale,
        energy_pass_rate=pass_rate,
    )


@dataclass(frozen=True)
class LoadedRun:
    root: Path
    config: ExperimentConfig
    manifest: RunManifest
    summary: Optional[RunSummary]


def load_run(root: str | Path) -> LoadedRun:
    """
    Read a run directory's config, manifest and summary.

    Raises:
        ManifestError: If the manifest is missing or belongs to another config.
    """
    root = Path(root)
    cfg = load_config(root / CONFIG_NAME)
    manifest = load_manifest(root)
    if manifest.config_hash != cfg.config_hash():
        raise ManifestError(f"{root}: manifest does not belong to {CONFIG_NAME}")
    stats_path = root / STATS_NAME
    summary = (
        RunSummary.model_validate_json(stats_path.read_text(encoding="utf-8"))
        if stats_path.is_file()
        else None
    )
    return LoadedRun(root=root, config=cfg, manifest=manifest, summary=summary)


def _config_for_trajectory(traj_dir: Path) -> ExperimentConfig:
    for candidate in (traj_dir / CONFIG_NAME, traj_dir.parent / CONFIG_NAME):
        if candidate.is_file():
            return load_config(candidate)
    raise ConfigurationError(f"no {CONFIG_NAME} next to or above {traj_dir}")


def verify_energy(traj_dir: str | Path) -> InequalityLedger:
    """
    Re-run the energy audit from a stored trajectory.

    The config is taken from ``config.ini`` in the trajectory directory or
    its run root.
    """
    traj_dir = Path(traj_dir)
    cfg = _config_for_trajectory(traj_dir)
    record = read_trajectory_csv(traj_dir / TRAJECTORY_NAME)
    return energy_inequality_audit(record, cfg.flow, cfg.grid, cfg.audit.tolerance_c)


def verify_ensemble(root: str | Path, cfg: ExperimentConfig) -> EnsembleVerdict:
    """
    Recompute a finished run's summary from its artifacts and check the
    hard invariants: artifact checksums, Jensen, the trace lemma and the
    martingale mean.

    Raises:
        ManifestError: If the run was made with another config or an
            artifact does not match its checksum.
    """
    root = Path(root)
    manifest = load_manifest(root)
    if manifest.config_hash != cfg.config_hash():
        raise ManifestError(f"{root} was not produced by this config")
    verify_artifacts(root, manifest.artifacts)
    records: List[TrajectoryRecord] = []
    for t in sorted(manifest.completed(), key=lambda e: e.index):
        verify_artifacts(root, t.artifacts)
        records.append(read_trajectory_csv(trajectory_dir(root, t.index) / TRAJECTORY_NAME, seed=t.seed))
    if not records:
        raise ConfigurationError(f"{root} has no completed trajectories")

    stats = ensemble_stats(records, cfg.t_end, min_count=1)
    ledgers = load_ledgers(root, manifest)
    summary = summarize(cfg, manifest, ledgers, stats=stats)

    checks = {"jensen": stats.jensen_ok}
    trace = [led.trace_ok for led in ledgers if led.trace_ok is not None]
    if trace:
        checks["trace_lemma"] = all(trace)
    if summary.martingale is not None:
        checks["martingale_mean"] = summary.martingale.passed
    if ledgers:
        checks["quadratic_variation"] = all(led.quadratic_variation_ok for led in ledgers)
    verdict = EnsembleVerdict(summary=summary, checks=checks, passed=all(checks.values()))
    logger.info("Ensemble verified", extra={"checks": checks, "passed": verdict.passed})
    return verdict


def write_run_files(root: Path, cfg: ExperimentConfig, summary: RunSummary) -> List[Path]:
    """Write config.ini and stats.json at the run root."""
    return [
        dump_config(cfg, root / CONFIG_NAME),
        _write_json(root / STATS_NAME, summary.model_dump_json(indent=2)),
    ]


__all__ = [
    "LoadedRun",
    "load_ledgers",
    "load_run",
    "run_trajectory",
    "simulate_into",
    "simulate_pending",
    "summarize",
    "trajectory_dir",
    "verify_ensemble",
    "verify_energy",
    "write_run_files",
]
