import json
from pathlib import Path

import pandas as pd
import pytest

from app.core.errors import BlowUpError, ConfigurationError, ManifestError
from app.harness import (
    config_from_string,
    config_to_string,
    dump_config,
    load_config,
    load_manifest,
    load_run,
    new_manifest,
    resume_manifest,
    run_ensemble,
    sweep,
    trajectory_dir,
    verify_energy,
    verify_ensemble,
    write_manifest,
    write_sweep_csv,
)
from app.harness import experiment
from app.models import TrajectoryEntry, TrajectoryStatus
from app.ou import derive_seed

CONFIG_DIR = Path(__file__).resolve().parents[2] / "configs"


# --- config files ---------------------------------------------------------


@pytest.mark.parametrize("name", ["laminar.ini", "desk.ini", "martingale_1d.ini"])
def test_shipped_configs_load(name):
    cfg = load_config(CONFIG_DIR / name)
    assert cfg.flow.reynolds > 1.0
    cfg.flow.require_theorem_hypotheses()
    assert cfg.steps >= 1


def test_config_roundtrip_is_exact(small_experiment):
    text = config_to_string(small_experiment)
    back = config_from_string(text)
    assert back == small_experiment
    assert back.config_hash() == small_experiment.config_hash()
    assert "[background]" in text
    assert "\nx0 =" not in text


def test_config_without_background_uses_default():
    cfg = config_from_string(
        "[geometry]\nL = 2.0\nh = 1.0\n[fluid]\nnu = 0.05\n"
        "[ou]\nu = 2.0\ntheta = 1.0\nsigma = 0.1\n[grid]\ndt = 0.001\n[run]\nt_end = 1.0\n"
    )
    assert cfg.flow.background.a == pytest.approx(0.1)
    assert cfg.flow.background.b == pytest.approx(4.0)
    assert cfg.flow.background.length == 2.0
    assert cfg.grid.n3 == 32


def test_config_file_roundtrip_on_disk(tmp_path, small_experiment):
    path = dump_config(small_experiment, tmp_path / "nested" / "run.ini")
    assert load_config(path) == small_experiment


@pytest.mark.parametrize(
    "text,match",
    [
        ("[geometry]\nL = 1.0\n[weather]\nrain = 1\n", "unknown section"),
        ("[geometry]\nL = 1.0\nwidth = 3\n", "unknown key"),
        ("[fluid]\nnu = lots\n", "nu"),
        ("[audit]\nenergy = maybe\n", "energy"),
        ("no section header\n", "<string>"),
    ],
)
def test_config_errors(text, match):
    with pytest.raises(ConfigurationError, match=match):
        config_from_string(text)


def test_config_validation_errors_are_configuration_errors(small_experiment):
    text = config_to_string(small_experiment).replace("nu = 0.1", "nu = -0.1")
    with pytest.raises(ConfigurationError):
        config_from_string(text)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigurationError, match="cannot read"):
        load_config(tmp_path / "absent.ini")


def test_config_hash_ignores_placement(small_experiment):
    moved = small_experiment.model_copy(update={"output_dir": "elsewhere", "workers": 8})
    assert moved.config_hash() == small_experiment.config_hash()
    other = small_experiment.model_copy(update={"master_seed": 6})
    assert other.config_hash() != small_experiment.config_hash()


# --- manifests ------------------------------------------------------------


def test_new_manifest_derives_seeds(small_experiment):
    manifest = new_manifest(small_experiment)
    assert [t.seed for t in manifest.trajectories] == [derive_seed(5, i) for i in range(3)]
    assert all(t.status == TrajectoryStatus.PENDING for t in manifest.trajectories)


def test_manifest_write_and_load(tmp_path, small_experiment):
    manifest = new_manifest(small_experiment)
    write_manifest(tmp_path, manifest)
    loaded = load_manifest(tmp_path)
    assert loaded.config_hash == manifest.config_hash
    assert loaded.updated_at >= manifest.updated_at
    assert not (tmp_path / "manifest.json.tmp").exists()


def test_load_manifest_errors(tmp_path):
    with pytest.raises(ManifestError, match="no manifest"):
        load_manifest(tmp_path)
    (tmp_path / "manifest.json").write_text("{}", encoding="utf-8")
    with pytest.raises(ManifestError, match="malformed"):
        load_manifest(tmp_path)


def test_resume_rejects_foreign_config(tmp_path, small_experiment):
    write_manifest(tmp_path, new_manifest(small_experiment))
    other = small_experiment.model_copy(update={"master_seed": 99})
    with pytest.raises(ManifestError):
        resume_manifest(tmp_path, other)


def test_resume_resets_failed_entries(tmp_path, small_experiment):
    manifest = new_manifest(small_experiment)
    failed = TrajectoryEntry(
        index=1, seed=manifest.trajectories[1].seed, status=TrajectoryStatus.FAILED, error="boom"
    )
    manifest = manifest.model_copy(
        update={"trajectories": [manifest.trajectories[0], failed, manifest.trajectories[2]]}
    )
    write_manifest(tmp_path, manifest)
    resumed = resume_manifest(tmp_path, small_experiment)
    assert resumed.trajectories[1].status == TrajectoryStatus.PENDING
    assert resumed.trajectories[1].error is None


# --- ensembles ------------------------------------------------------------


def test_run_ensemble_writes_a_complete_run(small_experiment):
    result = run_ensemble(small_experiment)
    root = Path(small_experiment.output_dir)

    assert result.summary.completed == 3
    assert result.summary.failed == 0
    assert result.stats.count == 3
    assert result.stats.jensen_ok
    assert result.bounds is not None
    assert result.summary.mean_within_bound
    assert result.summary.second_moment_within_bound
    assert result.summary.energy_pass_rate == 1.0
    assert result.summary.martingale is not None
    assert len(result.ledgers) == 3

    for name in ("config.ini", "manifest.json", "stats.json"):
        assert (root / name).is_file()
    traj = trajectory_dir(root, 0)
    for name in ("trajectory.csv", "ledger.json", "ito.json", "snap_0000000.bin", "snap_0000050.bin"):
        assert (traj / name).is_file()
    ito = json.loads((traj / "ito.json").read_text())
    assert ito["steps"] == 50

    loaded = load_run(root)
    assert loaded.config == small_experiment
    assert loaded.summary == result.summary
    assert len(loaded.manifest.completed()) == 3


def test_run_ensemble_is_reproducible(tmp_path, small_experiment):
    first = run_ensemble(small_experiment, output_dir=str(tmp_path / "a"))
    second = run_ensemble(small_experiment, output_dir=str(tmp_path / "b"))
    for a, b in zip(first.manifest.trajectories, second.manifest.trajectories):
        assert a.seed == b.seed
        assert a.time_average == b.time_average
        assert {x.path: x.sha256 for x in a.artifacts} == {x.path: x.sha256 for x in b.artifacts}


def test_resume_reruns_only_unfinished(mocker, small_experiment):
    root = Path(small_experiment.output_dir)
    run_ensemble(small_experiment)
    spy = mocker.spy(experiment, "run_trajectory")

    run_ensemble(small_experiment)
    assert spy.call_count == 0

    # tamper with one completed trajectory
    (trajectory_dir(root, 2) / "trajectory.csv").write_text("t\n0\n", encoding="utf-8")
    result = run_ensemble(small_experiment)
    assert spy.call_count == 1
    assert spy.call_args.args[1] == 2
    assert result.summary.completed == 3


def test_failed_trajectories_are_recorded(mocker, small_experiment):
    mocker.patch.object(
        experiment, "simulate_into", side_effect=BlowUpError("non-finite", step=3, time=0.012)
    )
    result = run_ensemble(small_experiment)
    assert result.summary.completed == 0
    assert result.summary.failed == 3
    assert result.stats is None
    assert all("BlowUpError" in t.error for t in result.manifest.trajectories)
    # bounds do not depend on the trajectories
    assert result.bounds is not None


def test_verify_ensemble_and_energy(small_experiment):
    run_ensemble(small_experiment)
    root = Path(small_experiment.output_dir)

    verdict = verify_ensemble(root, small_experiment)
    assert verdict.checks["jensen"]
    assert verdict.checks["trace_lemma"]
    assert verdict.checks["quadratic_variation"]
    assert "martingale_mean" in verdict.checks
    assert verdict.summary.stats.count == 3

    stored = json.loads((trajectory_dir(root, 1) / "ledger.json").read_text())
    ledger = verify_energy(trajectory_dir(root, 1))
    assert ledger.slack == pytest.approx(stored["slack"], rel=1e-12)
    assert ledger.passed


def test_verify_ensemble_detects_tampering(small_experiment):
    run_ensemble(small_experiment)
    root = Path(small_experiment.output_dir)
    (root / "stats.json").write_text("{}", encoding="utf-8")
    with pytest.raises(ManifestError, match="checksum"):
        verify_ensemble(root, small_experiment)
    with pytest.raises(ManifestError):
        verify_ensemble(root, small_experiment.model_copy(update={"t_end": 0.4}))


# --- sweeps ---------------------------------------------------------------


def test_sweep_bounds_only(tmp_path, small_experiment):
    result = sweep(
        small_experiment, sigmas=[0.0, 0.5, 1.0], thetas=[1.0, 2.0], reynolds=[0.5, 10.0]
    )
    assert len(result.table) == 6
    assert len(result.skipped) == 6
    assert all(point.reynolds == 0.5 for point in result.skipped)
    assert all("Re" in point.reason for point in result.skipped)
    assert result.trends["mean_bound_vs_sigma"] == "nondecreasing"
    assert "mean" not in result.table.columns

    path = write_sweep_csv(result, tmp_path / "sweep.csv")
    back = pd.read_csv(path)
    pd.testing.assert_frame_equal(back, result.table)


def test_sweep_keeps_base_axes(small_experiment):
    result = sweep(small_experiment, sigmas=[0.1, 0.2])
    assert result.table["theta"].tolist() == [1.0, 1.0]
    assert result.table["reynolds"].tolist() == pytest.approx([10.0, 10.0])
    assert "mean_bound_vs_theta" not in result.trends


def test_sweep_rejects_empty_grid(small_experiment):
    with pytest.raises(ConfigurationError, match="empty"):
        sweep(small_experiment, sigmas=[])


def test_sweep_with_simulation(small_experiment):
    base = small_experiment.model_copy(update={"trajectories": 2})
    result = sweep(base, sigmas=[0.25, 0.5], simulate=True)
    assert result.table["completed"].tolist() == [2, 2]
    assert result.table["mean"].notna().all()
    root = Path(base.output_dir)
    assert (root / "point_000" / "manifest.json").is_file()
    assert (root / "point_001" / "stats.json").is_file()
