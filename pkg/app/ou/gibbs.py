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
Gradient SDEs dX = -h'(X) dt + sigma dW and their Gibbs law exp(-2h/sigma^2)/Z.

The invariant law is resolved by adaptive quadrature on a finite window; the
long-run check compares the occupation measure of Euler-Maruyama chains with
it through a Kolmogorov-Smirnov distance.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Literal, Optional, Union

import numpy as np
from scipy.integrate import quad

from app.core.errors import ConfigurationError
from app.models import OUParams
from app.ou.rng import generator

logger = logging.getLogger(__name__)

ScalarFn = Callable[[float], float]

_PANELS = 64
_EDGE_RATIO = 1e-12


@dataclass(frozen=True)
class GradientSystem:
    """
    A one-dimensional gradient SDE.

    ``potential`` and ``gradient`` must accept numpy arrays elementwise.
    ``center`` and ``scale`` locate the region carrying the Gibbs mass; the
    quadrature window is ``center +/- window * scale``.
    """

    potential: ScalarFn
    gradient: ScalarFn
    noise_amplitude: float
    center: float = 0.0
    scale: float = 1.0
    name: str = "custom"

    def __post_init__(self):
        if not self.noise_amplitude > 0.0:
            raise ConfigurationError("a Gibbs law needs noise_amplitude > 0")
        if not self.scale > 0.0:
            raise ConfigurationError("scale must be positive")

    @classmethod
    def ornstein_uhlenbeck(cls, p: OUParams) -> "GradientSystem":
        """h(x) = theta (x - U)^2 / 2, whose Gibbs law is N(U, sigma^2/(2 theta))."""
        theta, u = p.reversion_rate, p.mean_speed
        return cls(
            potential=lambda x: 0.5 * theta * (x - u) ** 2,
            gradient=lambda x: theta * (x - u),
            noise_amplitude=p.noise_amplitude,
            center=u,
            scale=math.sqrt(p.stationary_variance),
            name="ou",
        )

    @classmethod
    def double_well(cls, sigma: float) -> "GradientSystem":
        """h(x) = (x^2 - 1)^2."""
        return cls(
            potential=lambda x: (x * x - 1.0) ** 2,
            gradient=lambda x: 4.0 * x * (x * x - 1.0),
            noise_amplitude=sigma,
            center=0.0,
            scale=1.0 + sigma,
            name="double-well",
        )


class GibbsLaw:
    """
    Normalized Gibbs density of a gradient system on its quadrature window.

    Raises:
        ConfigurationError: If Z cannot be resolved on the window (mass at the
            window edges, non-finite integrand or poor quadrature accuracy).
    """

    def __init__(self, system: GradientSystem, window: float = 8.0, epsrel: float = 1e-10):
        self.system = system
        self.epsrel = epsrel
        self.lower = system.center - window * system.scale
        self.upper = system.center + window * system.scale
        self._beta = 2.0 / system.noise_amplitude**2

        grid = np.linspace(self.lower, self.upper, 4097)
        h_vals = np.asarray(system.potential(grid), dtype=float)
        if not np.all(np.isfinite(h_vals)):
            raise ConfigurationError(f"potential of {system.name!r} is not finite on the window")
        self._shift = float(h_vals.min())
        edge = max(self._weight(self.lower), self._weight(self.upper))
        if edge > _EDGE_RATIO:
            raise ConfigurationError(
                f"Gibbs weight of {system.name!r} does not decay on the window "
                f"[{self.lower:g}, {self.upper:g}]; Z is unresolved or infinite"
            )

        panels = np.linspace(self.lower, self.upper, _PANELS + 1)
        z, err = self._integrate(self._weight, panels)
        if not (math.isfinite(z) and z > 0.0) or err > 1e3 * epsrel * z + 1e-300:
            raise ConfigurationError(
                f"quadrature for Z of {system.name!r} did not converge "
                f"(value {z!r}, error {err!r})"
            )
        self._z = z
        logger.debug(
            "Resolved Gibbs normalization",
            extra={"system": system.name, "z": z, "quad_error": err},
        )

    def _weight(self, x: float) -> float:
        return math.exp(-self._beta * (self.system.potential(x) - self._shift))

    def _integrate(self, fn: ScalarFn, edges: np.ndarray):
        total, error = 0.0, 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            value, abserr = quad(fn, float(a), float(b), epsabs=0.0, epsrel=self.epsrel, limit=200)
            total += value
            error += abserr
        return total, error

    def density(self, x) -> np.ndarray:
        x_arr = np.atleast_1d(np.asarray(x, dtype=float))
        return np.array([self._weight(float(v)) for v in x_arr]) / self._z

    def cdf(self, edges) -> np.ndarray:
        """Gibbs CDF at sorted points, mass below the window counted as zero."""
        pts = np.clip(np.asarray(edges, dtype=float), self.lower, self.upper)
        if np.any(np.diff(pts) < 0.0):
            raise ValueError("cdf points must be sorted")
        out = np.empty(pts.size)
        acc, prev = 0.0, self.lower
        for i, x in enumerate(pts):
            if x > prev:
                value, _ = quad(self._weight, prev, float(x), epsabs=0.0, epsrel=self.epsrel, limit=200)
                acc += value
                prev = float(x)
            out[i] = acc / self._z
        return np.minimum(out, 1.0)

    def moment(self, k: int) -> float:
        panels = np.linspace(self.lower, self.upper, _PANELS + 1)
        value, _ = self._integrate(lambda x: x**k * self._weight(x), panels)
        return value / self._z

    @property
    def mean(self) -> float:
        return self.moment(1)

    @property
    def variance(self) -> float:
        m = self.mean
        panels = np.linspace(self.lower, self.upper, _PANELS + 1)
        value, _ = self._integrate(lambda x: (x - m) ** 2 * self._weight(x), panels)
        return value / self._z

    def quantiles(self, probabilities: np.ndarray, resolution: int = 4097) -> np.ndarray:
        """Inverse CDF by interpolation on a fine grid."""
        grid = np.linspace(self.lower, self.upper, resolution)
        return np.interp(probabilities, self.cdf(grid), grid)


@dataclass(frozen=True)
class GibbsCheckResult:
    """Occupation histogram of the chains against the Gibbs law."""

    edges: np.ndarray
    counts: np.ndarray
    ks_distance: float
    empirical_mean: float
    empirical_variance: float
    gibbs_mean: float
    gibbs_variance: float
    samples: int
    chains: int


def _default_chains(t_end: float) -> int:
    return int(min(1024, max(1, t_end // 50)))


def gibbs_longrun_check(
    g: GradientSystem,
    T: float,
    dt: float,
    seed: int,
    *,
    start: Union[float, Literal["gibbs"], None] = None,
    burn_in: float = 10.0,
    chains: Optional[int] = None,
    bins: int = 2000,
    record_interval: float = 0.05,
    window: float = 8.0,
    epsrel: float = 1e-10,
) -> GibbsCheckResult:
    """
    Euler-Maruyama occupation measure versus the Gibbs law.

    The total occupation time ``T`` is shared by ``chains`` independent chains.
    Every chain first runs for ``burn_in`` time units, which are not recorded.
    By default all chains start from the single point ``g.center``, so the
    check measures relaxation to the Gibbs law and not just its preservation.

    Args:
        g (GradientSystem): System to integrate.
        T (float): Total recorded occupation time over all chains.
        dt (float): Euler-Maruyama step.
        seed (int): Stream seed.
        start (float | "gibbs", optional): Common starting point of every
            chain; ``"gibbs"`` starts the chains at stratified Gibbs quantiles.
            Defaults to ``g.center``.
        burn_in (float): Discarded time per chain before recording starts.
        chains (int, optional): Chain count; defaults to one chain per 50 time units.
        bins (int): Histogram bins over the quadrature window.
        record_interval (float): Time between recorded states of a chain.
        window (float): Quadrature half-width in units of ``g.scale``.
        epsrel (float): Quadrature relative tolerance.

    Returns:
        GibbsCheckResult: Histogram, KS distance and first two moments.

    Raises:
        ConfigurationError: If Z cannot be resolved.
    """
    if not (T > 0.0 and dt > 0.0 and T >= dt):
        raise ValueError("T and dt must be positive with T >= dt")
    if not (burn_in >= 0.0 and math.isfinite(burn_in)):
        raise ValueError("burn_in must be a finite non-negative time")
    law = GibbsLaw(g, window=window, epsrel=epsrel)
    n_chains = chains or _default_chains(T)
    steps = max(1, int(round(T / (n_chains * dt))))
    every = max(1, int(round(record_interval / dt)))
    if steps < every:
        raise ValueError("T is too short to record any state; lower record_interval or chains")

    if start == "gibbs":
        x = law.quantiles((np.arange(n_chains) + 0.5) / n_chains)
    else:
        x0 = g.center if start is None else float(start)
        if not math.isfinite(x0):
            raise ValueError("start must be finite")
        x = np.full(n_chains, x0)
    rng = generator(seed)
    sigma_sqrt_dt = g.noise_amplitude * math.sqrt(dt)
    burn_steps = int(round(burn_in / dt))
    records = np.empty((steps // every, n_chains))
    r = 0
    for n in range(1 - burn_steps, steps + 1):
        x = x - g.gradient(x) * dt + sigma_sqrt_dt * rng.standard_normal(n_chains)
        if n > 0 and n % every == 0:
            records[r] = x
            r += 1
    if not np.all(np.isfinite(records)):
        raise ConfigurationError("Euler-Maruyama chains diverged; reduce dt")

    samples = records.ravel()
    edges = np.linspace(law.lower, law.upper, bins + 1)
    counts, _ = np.histogram(samples, bins=edges)
    below = np.count_nonzero(samples < law.lower)
    empirical_cdf = (below + np.concatenate([[0], np.cumsum(counts)])) / samples.size
    ks = float(np.max(np.abs(empirical_cdf - law.cdf(edges))))
    logger.info(
        "Gibbs long-run check finished",
        extra={"system": g.name, "ks_distance": ks, "samples": samples.size, "chains": n_chains},
    )
    return GibbsCheckResult(
        edges=edges,
        counts=counts,
        ks_distance=ks,
        empirical_mean=float(samples.mean()),
        empirical_variance=float(samples.var()),
        gibbs_mean=law.mean,
        gibbs_variance=law.variance,
        samples=int(samples.size),
        chains=n_chains,
    )
