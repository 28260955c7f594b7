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
Command-line surface: ``shearlab <command>``.

Exit codes: 0 on success, 1 when a verified invariant fails, 2 on
configuration or usage errors.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ValidationError

from app.background import verify_background
from app.bounds import bounds_report
from app.core.config import LabSettings
from app.core.errors import ManifestError, ShearLabError
from app.core.logging_config import configure_logging
from app.core.utils import load_environment_variables
from app.harness import (
    dump_config,
    load_config,
    run_ensemble,
    simulate_into,
    sweep,
    verify_energy,
    verify_ensemble,
    write_sweep_csv,
)
from app.main import main as serve_main
from app.models import ExperimentConfig, FlowConfig, Geometry, OUParams
from app.ou import GradientSystem, derive_seed, gibbs_longrun_check, sample_paths, uniform_times
from app.ou.process import quadratic_variation

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVARIANT = 1
EXIT_USAGE = 2

GIBBS_KS_THRESHOLD = 0.02


def _emit(payload: Any) -> None:
    if isinstance(payload, BaseModel):
        text = payload.model_dump_json(indent=2)
    else:
        text = json.dumps(payload, indent=2, default=float)
    sys.stdout.write(text + "\n")


def _ou_from(args: argparse.Namespace) -> OUParams:
    return OUParams(mean_speed=args.u, reversion_rate=args.theta, noise_amplitude=args.sigma)


def _flow_from(args: argparse.Namespace) -> FlowConfig:
    return FlowConfig(
        geometry=Geometry(length=args.L, height=args.h),
        viscosity=args.nu,
        ou=_ou_from(args),
    )


def cmd_ou_sample(args: argparse.Namespace) -> int:
    p = _ou_from(args)
    times = uniform_times(args.t_end, args.dt)
    seeds = [derive_seed(args.seed, i) for i in range(args.paths)]
    if args.mode == "wiener":
        initial: Any = "wiener"
    elif args.initial == "fixed":
        initial = args.x0 if args.x0 is not None else p.mean_speed
    else:
        initial = "stationary"
    ensemble = sample_paths(p, times, seeds, initial)

    # long format; dW on row i drives the step from t_i, empty on the last row
    n = ensemble.times.size
    frame = pd.DataFrame(
        {
            "path_id": np.repeat(np.arange(args.paths), n),
            "t": np.tile(ensemble.times, args.paths),
            "x": ensemble.values.reshape(-1),
            "dW": np.concatenate(
                [np.append(ensemble.increments[i], np.nan) for i in range(args.paths)]
            ),
        }
    )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index=False, float_format="%.17g")

    qv = [quadratic_variation(ensemble.path(i)) for i in range(args.paths)]
    _emit(
        {
            "out": str(out),
            "paths": args.paths,
            "steps": int(times.size - 1),
            "mode": ensemble.mode,
            "mean_quadratic_variation": float(np.mean(qv)),
        }
    )
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    report = bounds_report(_flow_from(args))
    if args.json:
        _emit(report)
    else:
        for name, value in report.model_dump().items():
            sys.stdout.write(f"{name:28s} {value!r}\n")
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    updates: Dict[str, Any] = {"output_dir": args.out}
    if args.t_end is not None:
        updates["t_end"] = args.t_end
    if args.snapshot_every is not None:
        updates["snapshot_every"] = args.snapshot_every
    cfg = ExperimentConfig.model_validate({**cfg.model_dump(), **updates})
    out = Path(args.out)
    dump_config(cfg, out / "config.ini")
    record, paths = simulate_into(cfg, args.seed, out)
    _emit(
        {
            "out": str(out),
            "seed": args.seed,
            "steps": int(record.times.size - 1),
            "time_average": record.time_average(),
            "max_divergence": record.max_divergence,
            "artifacts": [p.name for p in paths],
        }
    )
    return EXIT_OK


def cmd_ensemble(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    result = run_ensemble(cfg, output_dir=args.out)
    _emit(result.summary)
    return EXIT_OK


def _floats(values: Optional[List[float]]) -> Optional[List[float]]:
    return list(values) if values else None


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    result = sweep(
        cfg,
        sigmas=_floats(args.sigma),
        thetas=_floats(args.theta),
        reynolds=_floats(args.re),
        simulate=args.simulate,
    )
    write_sweep_csv(result, args.out)
    _emit(
        {
            "out": args.out,
            "points": int(len(result.table)),
            "trends": result.trends,
            "skipped": [vars(s) for s in result.skipped],
        }
    )
    return EXIT_OK


def cmd_verify_background(args: argparse.Namespace) -> int:
    report = verify_background(_ou_from(args), args.nu, args.h, args.L, args.samples, seed=args.seed)
    _emit(report)
    return EXIT_OK if report.passed else EXIT_INVARIANT


def cmd_verify_energy(args: argparse.Namespace) -> int:
    ledger = verify_energy(args.traj)
    _emit(ledger)
    hard = ledger.quadratic_variation_ok and ledger.trace_ok is not False
    return EXIT_OK if hard else EXIT_INVARIANT


def cmd_verify_ensemble(args: argparse.Namespace) -> int:
    verdict = verify_ensemble(args.runs, load_config(args.config))
    _emit(verdict)
    return EXIT_OK if verdict.passed else EXIT_INVARIANT


def cmd_verify_gibbs(args: argparse.Namespace) -> int:
    if args.potential == "ou":
        system = GradientSystem.ornstein_uhlenbeck(
            OUParams(mean_speed=args.u, reversion_rate=args.theta, noise_amplitude=args.sigma)
        )
    else:
        system = GradientSystem.double_well(args.sigma)
    start = args.start if args.start == "gibbs" or args.start is None else float(args.start)
    result = gibbs_longrun_check(
        system,
        args.t_end,
        args.dt,
        args.seed,
        start=start,
        burn_in=args.burn_in,
        window=LabSettings().GIBBS_WINDOW,
    )
    passed = result.ks_distance < GIBBS_KS_THRESHOLD
    _emit(
        {
            "potential": system.name,
            "ks_distance": result.ks_distance,
            "threshold": GIBBS_KS_THRESHOLD,
            "empirical_mean": result.empirical_mean,
            "gibbs_mean": result.gibbs_mean,
            "empirical_variance": result.empirical_variance,
            "gibbs_variance": result.gibbs_variance,
            "samples": result.samples,
            "chains": result.chains,
            "passed": passed,
        }
    )
    return EXIT_OK if passed else EXIT_INVARIANT


def cmd_serve(args: argparse.Namespace) -> int:
    asyncio.run(serve_main())
    return EXIT_OK


def _add_ou_args(p: argparse.ArgumentParser, with_theta: bool = True) -> None:
    p.add_argument("--u", type=float, required=True, help="mean wall speed U")
    if with_theta:
        p.add_argument("--theta", type=float, required=True, help="reversion rate")
    p.add_argument("--sigma", type=float, required=True, help="noise amplitude")


def _add_flow_args(p: argparse.ArgumentParser) -> None:
    _add_ou_args(p)
    p.add_argument("--nu", type=float, required=True, help="viscosity")
    p.add_argument("--h", type=float, required=True, help="channel height")
    p.add_argument("--L", type=float, required=True, help="horizontal period")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shearlab", description="Stochastic shear-flow laboratory."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ou-sample", help="sample wall-speed paths to CSV")
    _add_ou_args(p)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--paths", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["ou", "wiener"], default="ou")
    p.add_argument("--initial", choices=["stationary", "fixed"], default="stationary")
    p.add_argument("--x0", type=float)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ou_sample)

    p = sub.add_parser("bounds", help="evaluate the dissipation bounds")
    _add_flow_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("simulate", help="run one trajectory")
    p.add_argument("--config", required=True)
    p.add_argument("--t-end", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--snapshot-every", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("ensemble", help="run an ensemble")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("sweep", help="sweep sigma, theta and Re")
    p.add_argument("--config", required=True)
    p.add_argument("--sigma", type=float, nargs="+")
    p.add_argument("--theta", type=float, nargs="+")
    p.add_argument("--re", type=float, nargs="+")
    p.add_argument("--simulate", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    verify = sub.add_parser("verify", help="verify invariants").add_subparsers(
        dest="target", required=True
    )
    p = verify.add_parser("background")
    _add_flow_args(p)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_background)

    p = verify.add_parser("energy")
    p.add_argument("--traj", required=True)
    p.set_defaults(func=cmd_verify_energy)

    p = verify.add_parser("ensemble")
    p.add_argument("--runs", required=True)
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_verify_ensemble)

    p = verify.add_parser("gibbs")
    p.add_argument("--potential", choices=["ou", "double-well"], required=True)
    p.add_argument("--u", type=float, default=0.0)
    p.add_argument("--theta", type=float, default=1.0)
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--start", default=None, help="common start point, or 'gibbs' for stratified starts")
    p.add_argument("--burn-in", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_gibbs)

    p = sub.add_parser("serve", help="run the REST service")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    load_environment_variables()
    args = build_parser().parse_args(argv)
    handler: Callable[[argparse.Namespace], int] = args.func
    try:
        return handler(args)
    except ManifestError as exc:
        logger.error("Run verification failed", extra={"error": str(exc)})
        sys.stderr.write(f"shearlab: {exc}\n")
        return EXIT_INVARIANT
    except (ShearLabError, ValidationError, ValueError) as exc:
        logger.error("Command rejected", extra={"command": args.command, "error": str(exc)})
        sys.stderr.write(f"shearlab: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
