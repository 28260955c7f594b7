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
Exact simulation of the Ornstein-Uhlenbeck wall speed.

Every step uses the Gaussian transition law, so paths carry no time
discretization bias. The Brownian increment that drove each step is sampled
jointly with the transition and stored on the path, which lets pathwise
audits form Ito sums against the same noise.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Literal, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import trapezoid

from app.models import OUParams
from app.ou.rng import generator

logger = logging.getLogger(__name__)

Initial = Union[Literal["stationary", "wiener"], float]


def transition_coefficients(dt: float, theta: float) -> Tuple[float, float, float]:
    """
    Coefficients of the exact transition over ``dt``.

    Returns:
        tuple: ``(decay, var_factor, cov_factor)`` where ``decay = exp(-theta dt)``,
        ``var_factor = Var(I)`` and ``cov_factor = Cov(I, dW)`` for the noise
        integral ``I = int_0^dt exp(-theta (dt - s)) dW_s``.
    """
    if theta == 0.0:
        return 1.0, dt, dt
    decay = math.exp(-theta * dt)
    var_factor = -math.expm1(-2.0 * theta * dt) / (2.0 * theta)
    cov_factor = -math.expm1(-theta * dt) / theta
    return decay, var_factor, cov_factor


def exact_step(x, dt: float, p: OUParams, xi):
    """
    Advance the wall speed by ``dt`` with the exact Gaussian transition.

    Args:
        x: Current speed (scalar or array).
        dt (float): Step, non-negative.
        p (OUParams): Process parameters.
        xi: Standard normal draw(s), broadcastable against ``x``.

    Returns:
        Speed after ``dt``; a float for scalar input.

    Raises:
        ValueError: On negative ``dt`` or non-finite input.
    """
    if not math.isfinite(dt) or dt < 0.0:
        raise ValueError(f"dt must be finite and non-negative, got {dt!r}")
    x_arr = np.asarray(x, dtype=float)
    xi_arr = np.asarray(xi, dtype=float)
    if not (np.all(np.isfinite(x_arr)) and np.all(np.isfinite(xi_arr))):
        raise ValueError("exact_step received a non-finite speed or draw")
    if dt == 0.0:
        return x_arr.copy() if x_arr.ndim else float(x_arr)

    u = p.mean_speed
    decay, var_factor, _ = transition_coefficients(dt, p.reversion_rate)
    out = u + (x_arr - u) * decay + p.noise_amplitude * math.sqrt(var_factor) * xi_arr
    return out if out.ndim else float(out)


def transition_moments(x: float, dt: float, p: OUParams) -> Tuple[float, float]:
    """Conditional mean and variance of X_{t+dt} given X_t = x."""
    decay, var_factor, _ = transition_coefficients(dt, p.reversion_rate)
    mean = p.mean_speed + (x - p.mean_speed) * decay
    return mean, p.noise_amplitude**2 * var_factor


def stationary_sample(p: OUParams, rng: np.random.Generator, size=None):
    """
    Draw from the stationary law N(U, sigma^2 / (2 theta)).

    Raises:
        ConfigurationError: If theta <= 0.
    """
    std = math.sqrt(p.stationary_variance)
    draw = rng.standard_normal(size)
    out = p.mean_speed + std * np.asarray(draw)
    return out if out.ndim else float(out)


def _validate_times(times) -> np.ndarray:
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("time grid must be a non-empty one-dimensional sequence")
    if t[0] != 0.0:
        raise ValueError("time grid must start at 0")
    if not np.all(np.isfinite(t)) or np.any(np.diff(t) <= 0.0):
        raise ValueError("time grid must be finite and strictly increasing")
    return t


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class OUPath:
    """
    One sampled wall-speed trajectory.

    Attributes:
        times: Strictly increasing, starting at 0.
        values: X at each time.
        increments: Brownian increments driving each step, ``len(times) - 1``.
        seed: Stream seed the path was drawn from.
        params: Process parameters.
        mode: ``"ou"`` or ``"wiener"``.
    """

    times: np.ndarray
    values: np.ndarray
    increments: np.ndarray
    seed: int
    params: OUParams
    mode: str = "ou"

    def __post_init__(self):
        object.__setattr__(self, "times", _readonly(_validate_times(self.times)))
        object.__setattr__(self, "values", _readonly(np.asarray(self.values, dtype=float)))
        object.__setattr__(
            self, "increments", _readonly(np.asarray(self.increments, dtype=float))
        )
        if self.values.shape != self.times.shape:
            raise ValueError("values and times differ in length")
        if self.increments.shape != (self.times.size - 1,):
            raise ValueError("increments must have one entry per step")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("path values must be finite")

    @property
    def horizon(self) -> float:
        return float(self.times[-1])


@dataclass(frozen=True)
class OUEnsemble:
    """Many independent paths on one time grid, one row per path."""

    times: np.ndarray
    values: np.ndarray
    increments: np.ndarray
    seeds: Tuple[int, ...]
    params: OUParams
    mode: str = "ou"

    def __len__(self) -> int:
        return len(self.seeds)

    def path(self, i: int) -> OUPath:
        return OUPath(
            times=self.times,
            values=self.values[i],
            increments=self.increments[i],
            seed=self.seeds[i],
            params=self.params,
            mode=self.mode,
        )


def _draw(seed: int, steps: int, p: OUParams, initial: Initial) -> Tuple[float, np.ndarray]:
    rng = generator(seed)
    if initial == "stationary":
        x0 = stationary_sample(p, rng)
    elif initial == "wiener":
        x0 = 0.0
    else:
        x0 = float(initial)
        if not math.isfinite(x0):
            raise ValueError("fixed initial value must be finite")
    return x0, rng.standard_normal((steps, 2))


def _advance(
    x0: np.ndarray, dts: np.ndarray, p: OUParams, z: np.ndarray, mode: str
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Chain exact steps for a batch of paths.

    ``z`` has shape (paths, steps, 2); column 0 drives dW, column 1 the part
    of the transition noise orthogonal to it.
    """
    n_paths, steps = z.shape[0], z.shape[1]
    values = np.empty((n_paths, steps + 1))
    increments = np.empty((n_paths, steps))
    values[:, 0] = x0
    sigma = p.noise_amplitude
    for i in range(steps):
        dt = float(dts[i])
        sqrt_dt = math.sqrt(dt)
        dw = sqrt_dt * z[:, i, 0]
        increments[:, i] = dw
        if mode == "wiener":
            values[:, i + 1] = values[:, i] + sigma * dw
            continue
        _, var_factor, cov_factor = transition_coefficients(dt, p.reversion_rate)
        residual = max(var_factor - cov_factor * cov_factor / dt, 0.0)
        noise = (cov_factor / sqrt_dt) * z[:, i, 0] + math.sqrt(residual) * z[:, i, 1]
        xi = noise / math.sqrt(var_factor)
        values[:, i + 1] = exact_step(values[:, i], dt, p, xi)
    return values, increments


def _mode_of(initial: Initial) -> str:
    return "wiener" if initial == "wiener" else "ou"


def sample_path(
    p: OUParams, times: Sequence[float], seed: int, initial: Initial = "stationary"
) -> OUPath:
    """
    Sample one wall-speed path on ``times``.

    Args:
        p (OUParams): Process parameters.
        times: Grid starting at 0, strictly increasing.
        seed (int): Stream seed; identical seeds and grids give identical paths.
        initial: ``"stationary"``, ``"wiener"`` or a fixed starting speed.
            In wiener mode X_t = sigma W_t from X_0 = 0, ignoring U and theta;
            with sigma = 1 the values are the Wiener path W_t itself and each
            step adds exactly its stored increment.

    Returns:
        OUPath: The sampled path with its Brownian increments.
    """
    t = _validate_times(times)
    mode = _mode_of(initial)
    x0, z = _draw(seed, t.size - 1, p, initial)
    values, increments = _advance(np.array([x0]), np.diff(t), p, z[np.newaxis], mode)
    return OUPath(
        times=t, values=values[0], increments=increments[0], seed=seed, params=p, mode=mode
    )


def sample_paths(
    p: OUParams,
    times: Sequence[float],
    seeds: Sequence[int],
    initial: Initial = "stationary",
) -> OUEnsemble:
    """
    Vectorised ``sample_path`` over independent streams.

    Row ``i`` equals ``sample_path(p, times, seeds[i], initial)``.
    """
    t = _validate_times(times)
    if len(seeds) == 0:
        raise ValueError("at least one seed is required")
    mode = _mode_of(initial)
    draws = [_draw(int(s), t.size - 1, p, initial) for s in seeds]
    x0 = np.array([d[0] for d in draws])
    z = np.stack([d[1] for d in draws])
    values, increments = _advance(x0, np.diff(t), p, z, mode)
    logger.debug(
        "Sampled wall-speed ensemble",
        extra={"paths": len(seeds), "steps": t.size - 1, "mode": mode},
    )
    return OUEnsemble(
        times=_readonly(t),
        values=_readonly(values),
        increments=_readonly(increments),
        seeds=tuple(int(s) for s in seeds),
        params=p,
        mode=mode,
    )


def uniform_times(t_end: float, dt: float) -> np.ndarray:
    """Grid 0, dt, ..., t_end; ``t_end`` must be a whole number of steps."""
    n = round(t_end / dt)
    if n < 1 or not math.isclose(n * dt, t_end, rel_tol=1e-9):
        raise ValueError(f"t_end = {t_end!r} is not a whole number of steps dt = {dt!r}")
    return np.arange(n + 1) * dt


def quadratic_variation(path: OUPath) -> float:
    """
    Sum of squared increments of the path.

    Raises:
        ValueError: If the path has fewer than two points.
    """
    if path.values.size < 2:
        raise ValueError("quadratic variation needs at least two points")
    return float(np.sum(np.diff(path.values) ** 2))


def time_average_square(path: OUPath) -> float:
    """(1/T) int_0^T X_t^2 dt by the trapezoid rule."""
    if path.values.size < 2:
        raise ValueError("time average needs at least two points")
    return float(trapezoid(path.values**2, path.times) / path.horizon)
