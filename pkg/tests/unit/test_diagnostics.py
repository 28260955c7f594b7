import dataclasses
import math

import numpy as np
import pytest

from app.background import delta, phi
from app.core.errors import AuditInputError, ConfigurationError
from app.diagnostics import (
    FluctuationProbe,
    energy_budget_residual,
    energy_inequality_audit,
    ensemble_stats,
    fluctuation,
    fluctuation_norm_sq,
    fprime_profile,
    ito_residual,
    ito_residual_detail,
    layer_integral,
    martingale_summary,
    observed_order,
    richardson_order,
    trace_lemma_check,
    y_total,
)
from app.models import InequalityLedger, InitialCondition
from app.ou import derive_seed, sample_path, sample_paths, uniform_times
from app.ou.process import OUPath
from app.solver import TrajectoryRecord, init_field, simulate_trajectory

COUETTE_FIXED = InitialCondition(kind="couette", wall="fixed")


def _record(times, averages_like=1.0, seed=0):
    n = len(times)
    return TrajectoryRecord(
        times=np.asarray(times, dtype=float),
        wall_speed=np.ones(n),
        increments=np.zeros(n - 1),
        dissipation=np.full(n, averages_like),
        energy=np.ones(n),
        wall_stress=np.ones(n),
        seed=seed,
    )


def _ledger(m_t: float) -> InequalityLedger:
    return InequalityLedger(
        dissipation_integral=1.0,
        initial_term=0.0,
        final_term=0.0,
        y_t=2.0,
        m_t=m_t,
        quadratic_variation=0.0,
        quadratic_variation_cap=1.0,
        slack=1.0,
        tolerance=0.1,
        passed=True,
        quadratic_variation_ok=True,
    )


def test_fluctuation_vanishes_on_the_background(laminar_flow, small_grid):
    bp = laminar_flow.background
    field = init_field(laminar_flow.geometry, small_grid, COUETTE_FIXED, mean_speed=1.0)
    profile = phi(field.mesh.x3_centers, 1.0, bp)
    background = dataclasses.replace(
        field, u1=np.broadcast_to(profile, field.mesh.shape).copy()
    )
    v = fluctuation(background, 1.0, bp)
    np.testing.assert_array_equal(v.v1, 0.0)
    assert v.wall_values() == (0.0, 0.0)
    assert fluctuation_norm_sq(v) == 0.0
    assert layer_integral(v, fprime_profile(1.0, bp)) == 0.0
    assert v.delta == pytest.approx(delta(1.0, bp))


def test_fluctuation_checks_geometry(laminar_flow, small_grid):
    field = init_field(laminar_flow.geometry, small_grid, COUETTE_FIXED, mean_speed=1.0)
    other = laminar_flow.background.model_copy(update={"height": 2.0})
    with pytest.raises(ValueError):
        fluctuation(field, 1.0, other)


def test_layer_integral_of_constant_profile(laminar_flow, column_grid):
    """v1 = c in every cell; the layer lies below the first cell centre."""
    bp = laminar_flow.background
    field = init_field(laminar_flow.geometry, column_grid, COUETTE_FIXED, mean_speed=1.0)
    z = 3.0
    d = delta(z, bp)
    assert d < 0.5 * field.mesh.dz
    c = 0.7
    u1 = phi(field.mesh.x3_centers, z, bp)[None, None, :] + c
    v = fluctuation(dataclasses.replace(field, u1=u1), z, bp)
    # v1 rises linearly from 0 on the wall to c at the first centre
    expected = c * d * d / field.mesh.dz
    assert layer_integral(v, lambda x: np.ones_like(x)) == pytest.approx(expected, rel=1e-12)


def test_trace_lemma_holds_on_couette(laminar_flow, small_grid):
    bp = laminar_flow.background
    field = init_field(laminar_flow.geometry, small_grid, COUETTE_FIXED, mean_speed=1.0)
    v = fluctuation(field, 1.0, bp)
    lhs, rhs = trace_lemma_check(v, fprime_profile(1.0, bp), bp)
    assert 0.0 < lhs <= rhs


def test_probe_records_named_series(noisy_flow, column_grid):
    probe = FluctuationProbe(noisy_flow.background, noisy_flow.ou)
    record = simulate_trajectory(
        noisy_flow, column_grid, 0.04, seed=1, initial=InitialCondition(kind="couette"), probes=[probe]
    )
    assert set(record.probes) == {
        "grad_v_sq",
        "v_norm_sq",
        "layer_flux",
        "trace_lhs_fprime",
        "trace_rhs_fprime",
        "trace_lhs_lf",
        "trace_rhs_lf",
    }
    assert np.all(record.probes["trace_lhs_fprime"] <= record.probes["trace_rhs_fprime"] + 1e-12)
    assert np.all(record.probes["grad_v_sq"] >= 0.0)

    quiet = FluctuationProbe(noisy_flow.background, noisy_flow.ou, trace=False)
    assert set(quiet(record.final_field)) == {"grad_v_sq", "v_norm_sq", "layer_flux"}


def test_ito_residual_is_zero_on_frozen_path(laminar_flow):
    times = uniform_times(1.0, 1e-3)
    path = sample_path(laminar_flow.ou, times, seed=0, initial=1.0)
    x3 = 0.5 * delta(1.0, laminar_flow.background)
    detail = ito_residual_detail(path, laminar_flow.background, laminar_flow.ou, x3)
    assert detail.value == 0.0
    assert detail.skipped == 0
    assert detail.steps == 1000


def test_ito_residual_deterministic_relaxation_is_first_order(laminar_flow):
    bp = laminar_flow.background
    x3 = 0.02
    residuals = []
    for dt in (1e-2, 5e-3):
        path = sample_path(laminar_flow.ou, uniform_times(1.0, dt), seed=0, initial=0.2)
        residuals.append(abs(ito_residual(path, bp, laminar_flow.ou, x3)))
    assert residuals[0] > 0.0
    assert residuals[0] / residuals[1] == pytest.approx(2.0, rel=0.1)


def test_ito_residual_is_small_on_noisy_path(noisy_flow):
    bp = noisy_flow.background
    path = sample_path(noisy_flow.ou, uniform_times(1.0, 1e-4), seed=17)
    detail = ito_residual_detail(path, bp, noisy_flow.ou, 0.5 * delta(1.0, bp))
    assert abs(detail.value) < 0.02
    assert detail.steps == 10_000
    assert detail.skipped < detail.steps


def test_ito_residual_on_single_step_matches_hand_computation(noisy_flow):
    bp, p = noisy_flow.background, noisy_flow.ou
    x3, z0, z1, dt, dw = 0.01, 0.9, 1.1, 0.01, 0.05
    path = OUPath(times=[0.0, dt], values=[z0, z1], increments=[dw], seed=0, params=p)

    def f(z):
        return z - x3 * (z**3 + bp.b * z) / bp.a

    f1 = 1.0 - x3 * (3.0 * z0**2 + bp.b) / bp.a
    f2 = -6.0 * x3 * z0 / bp.a
    lf = f1 * p.reversion_rate * (p.mean_speed - z0) + 0.5 * p.noise_amplitude**2 * f2
    expected = f(z1) - f(z0) - lf * dt - p.noise_amplitude * f1 * dw
    assert ito_residual(path, bp, p, x3) == pytest.approx(expected, rel=1e-12, abs=1e-15)


def test_ito_residual_shrinks_like_root_dt_on_noisy_paths(noisy_flow):
    bp = noisy_flow.background
    x3 = 0.25 * delta(1.0, bp)
    rms = []
    for k, dt in enumerate((2e-3, 1e-3)):
        seeds = [derive_seed(70 + k, i) for i in range(600)]
        ensemble = sample_paths(noisy_flow.ou, uniform_times(1.0, dt), seeds)
        residuals = [ito_residual(ensemble.path(i), bp, noisy_flow.ou, x3) for i in range(len(ensemble))]
        rms.append(math.sqrt(np.mean(np.square(residuals))))
    assert rms[0] / rms[1] == pytest.approx(math.sqrt(2.0), rel=0.1)


def test_ito_residual_skips_steps_above_layer(noisy_flow):
    bp = noisy_flow.background
    path = sample_path(noisy_flow.ou, uniform_times(0.1, 1e-3), seed=2)
    detail = ito_residual_detail(path, bp, noisy_flow.ou, 0.9)
    assert detail.skipped == detail.steps == 100
    assert detail.value == 0.0
    with pytest.raises(ValueError):
        ito_residual(path, bp, noisy_flow.ou, -0.1)


def test_ensemble_stats_of_known_values():
    stats = ensemble_stats([1.0, 2.0, 3.0], T=5.0)
    assert stats.mean == pytest.approx(2.0)
    assert stats.mean_se == pytest.approx(1.0 / math.sqrt(3.0))
    assert stats.second_moment == pytest.approx(14.0 / 3.0)
    assert stats.jensen_ok
    assert stats.count == 3


def test_ensemble_stats_of_identical_records():
    records = [_record([0.0, 0.5, 1.0], 2.5, seed=s) for s in range(4)]
    stats = ensemble_stats(records, T=1.0)
    assert stats.mean == pytest.approx(2.5)
    assert stats.mean_se == 0.0
    assert stats.second_moment_se == 0.0
    assert stats.jensen_ok


def test_ensemble_stats_single_trajectory_has_no_standard_error():
    with pytest.raises(ConfigurationError):
        ensemble_stats([1.0], T=1.0)
    stats = ensemble_stats([1.0], T=1.0, min_count=1)
    assert stats.mean_se is None
    assert stats.second_moment_se is None


def test_ensemble_stats_rejects_mixed_horizons():
    with pytest.raises(ConfigurationError, match="horizon"):
        ensemble_stats([_record([0.0, 1.0]), _record([0.0, 2.0])], T=1.0)
    with pytest.raises(ConfigurationError):
        ensemble_stats([1.0, float("nan")], T=1.0)


def test_richardson_order():
    values = [1.0 + h * h for h in (1.0, 0.5, 0.25)]
    assert richardson_order(values) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        richardson_order(values[:2])
    with pytest.raises(ValueError):
        richardson_order([1.0, 2.0, 1.5])
    with pytest.raises(ValueError):
        richardson_order([1.0, 1.0, 1.0])


def test_observed_order():
    assert observed_order([1.0, 0.25, 0.0625]) == pytest.approx(2.0)
    assert observed_order([1.0, 0.5, 0.0625]) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        observed_order([1.0])
    with pytest.raises(ValueError):
        observed_order([1.0, 0.0])


def test_martingale_summary():
    summary = martingale_summary([_ledger(v) for v in (0.1, -0.1, 0.2, -0.2)])
    assert summary.count == 4
    assert summary.mean == pytest.approx(0.0, abs=1e-15)
    assert summary.passed

    biased = martingale_summary([_ledger(v) for v in (1.0, 1.01, 0.99, 1.0)])
    assert biased.z_score > 4.0
    assert not biased.passed

    with pytest.raises(ValueError):
        martingale_summary([_ledger(0.0)])


def test_y_total_on_steady_wall(laminar_flow):
    times = np.linspace(0.0, 2.0, 21)
    # nu U^2 / delta(U) = 0.1 * 1 / 0.05 = 2, times 4 L^2
    assert y_total(times, np.ones_like(times), laminar_flow) == pytest.approx(16.0)


def test_energy_audit_deterministic_wall(laminar_flow, column_grid):
    probe = FluctuationProbe(laminar_flow.background, laminar_flow.ou)
    record = simulate_trajectory(
        laminar_flow, column_grid, 0.4, seed=0, initial=COUETTE_FIXED, probes=[probe]
    )
    ledger = energy_inequality_audit(record, laminar_flow, column_grid)
    assert ledger.passed
    assert ledger.m_t == 0.0
    assert ledger.quadratic_variation == 0.0
    assert ledger.quadratic_variation_ok
    assert ledger.trace_ok
    assert ledger.initial_term == pytest.approx(ledger.final_term, rel=1e-10)
    assert ledger.slack > 0.0


def test_energy_audit_noisy_wall(noisy_flow, column_grid):
    probe = FluctuationProbe(noisy_flow.background, noisy_flow.ou)
    record = simulate_trajectory(
        noisy_flow, column_grid, 0.4, seed=8, initial=InitialCondition(kind="couette"), probes=[probe]
    )
    ledger = energy_inequality_audit(record, noisy_flow, column_grid)
    assert ledger.passed
    assert ledger.quadratic_variation_ok
    assert ledger.quadratic_variation > 0.0
    assert math.isfinite(ledger.m_t)


def test_energy_audit_needs_probes(laminar_flow, column_grid):
    with pytest.raises(AuditInputError, match="probe"):
        energy_inequality_audit(_record([0.0, 1.0]), laminar_flow, column_grid)
    bad = dataclasses.replace(_record([0.0, 1.0]), increments=np.array([np.nan]))
    with pytest.raises(AuditInputError, match="increments"):
        energy_inequality_audit(bad, laminar_flow, column_grid)


def test_energy_audit_rejects_non_finite_series(noisy_flow, column_grid):
    series = FluctuationProbe(noisy_flow.background, noisy_flow.ou)
    record = simulate_trajectory(
        noisy_flow, column_grid, 0.1, seed=8, initial=InitialCondition(kind="couette"), probes=[series]
    )
    grad = record.probes["grad_v_sq"].copy()
    grad[1] = np.inf
    bad = dataclasses.replace(record, probes={**record.probes, "grad_v_sq": grad})
    with pytest.raises(AuditInputError, match="energy ledger contains a non-finite value"):
        energy_inequality_audit(bad, noisy_flow, column_grid)


def test_energy_budget_closes_on_decaying_mode(laminar_flow, column_grid):
    start = InitialCondition(kind="perturbed", amplitude=0.3, seed=2, wall="fixed")
    record = simulate_trajectory(laminar_flow, column_grid, 1.0, seed=0, initial=start)
    residual = energy_budget_residual(record, laminar_flow.viscosity, laminar_flow.geometry)
    scale = np.max(record.dissipation) * laminar_flow.geometry.volume
    assert np.max(np.abs(residual)) < 0.03 * scale
