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

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, TypedDict

from langgraph.graph import END, StateGraph

from app.harness.experiment import load_ledgers, simulate_pending, summarize, write_run_files
from app.harness.manifest import artifact_entry, resume_manifest, write_manifest
from app.models import (
    BoundsReport,
    DissipationStats,
    ExperimentConfig,
    InequalityLedger,
    RunManifest,
    RunSummary,
)

logger = logging.getLogger(__name__)


class RunState(TypedDict, total=False):
    config: ExperimentConfig
    root: str
    manifest: RunManifest
    ledgers: List[InequalityLedger]
    summary: RunSummary


@dataclass(frozen=True)
class EnsembleResult:
    manifest: RunManifest
    summary: RunSummary
    ledgers: List[InequalityLedger]

    @property
    def stats(self) -> Optional[DissipationStats]:
        return self.summary.stats

    @property
    def bounds(self) -> Optional[BoundsReport]:
        return self.summary.bounds


class ExperimentWorkflow:
    def __init__(self, output_dir: Optional[str] = None):
        """
        Initialize the ensemble experiment as a LangGraph workflow.

        Args:
            output_dir (str, optional): Overrides the config's output directory.
        """
        self.output_dir = output_dir
        self.graph = self.build_graph()

    def build_graph(self):
        """
        Build the graph prepare -> simulate -> aggregate -> bounds -> END.

        Returns:
            CompiledGraph: A compiled LangGraph instance.
        """
        graph = StateGraph(RunState)

        def prepare(state: RunState) -> RunState:
            cfg = state["config"]
            root = Path(self.output_dir or cfg.output_dir)
            manifest = resume_manifest(root, cfg)
            write_manifest(root, manifest)
            logger.info(
                "Run prepared",
                extra={"root": str(root), "config_hash": manifest.config_hash, "trajectories": cfg.trajectories},
            )
            return {"root": str(root), "manifest": manifest}

        def simulate(state: RunState) -> RunState:
            root = state["root"]
            manifest = simulate_pending(
                state["config"], root, state["manifest"], on_update=lambda m: write_manifest(root, m)
            )
            return {"manifest": manifest}

        def aggregate(state: RunState) -> RunState:
            return {"ledgers": load_ledgers(state["root"], state["manifest"])}

        def bounds(state: RunState) -> RunState:
            cfg, root = state["config"], Path(state["root"])
            summary = summarize(cfg, state["manifest"], state["ledgers"])
            paths = write_run_files(root, cfg, summary)
            manifest = state["manifest"].model_copy(
                update={"artifacts": [artifact_entry(root, p) for p in paths]}
            )
            write_manifest(root, manifest)
            logger.info(
                "Run finished",
                extra={"root": str(root), "completed": summary.completed, "failed": summary.failed},
            )
            return {"manifest": manifest, "summary": summary}

        graph.add_node("prepare", prepare)
        graph.add_node("simulate", simulate)
        graph.add_node("aggregate", aggregate)
        graph.add_node("bounds", bounds)

        graph.set_entry_point("prepare")
        graph.add_edge("prepare", "simulate")
        graph.add_edge("simulate", "aggregate")
        graph.add_edge("aggregate", "bounds")
        graph.add_edge("bounds", END)

        return graph.compile()

    def run(self, cfg: ExperimentConfig) -> EnsembleResult:
        """
        Runs the workflow for one experiment, resuming a partial run in place.

        Args:
            cfg (ExperimentConfig): Experiment to run.

        Returns:
            EnsembleResult: Manifest, summary and audit ledgers.
        """
        state = self.graph.invoke({"config": cfg})
        return EnsembleResult(
            manifest=state["manifest"], summary=state["summary"], ledgers=state["ledgers"]
        )


def run_ensemble(cfg: ExperimentConfig, output_dir: Optional[str] = None) -> EnsembleResult:
    """Run ``cfg.trajectories`` trajectories and aggregate them."""
    return ExperimentWorkflow(output_dir=output_dir).run(cfg)
