import os
from pathlib import Path
from typing import Dict

import pytest
from dotenv import load_dotenv

from app.models import (
    AuditToggles,
    ExperimentConfig,
    FlowConfig,
    Geometry,
    GridSpec,
    InitialCondition,
    OUParams,
)


def pytest_configure(config):
    """Called before test collection, configure global test environment."""
    load_dotenv()  # Load environment variables once for all tests
    os.environ.setdefault("SHEARLAB_LOG_DIR", str(Path(config.rootpath) / ".pytest_logs"))


@pytest.fixture(scope="session")
def test_environment() -> Dict[str, str]:
    """Fixture to provide test environment variables."""
    return {
        "SHEARLAB_HOST": os.getenv("SHEARLAB_HOST", "127.0.0.1"),
        "SHEARLAB_PORT": os.getenv("SHEARLAB_PORT", "8133"),
    }


@pytest.fixture
def ou_params() -> OUParams:
    """U = 1, theta = 1, sigma = 1: stationary variance 1/2."""
    return OUParams(mean_speed=1.0, reversion_rate=1.0, noise_amplitude=1.0)


@pytest.fixture
def worked_flow(ou_params: OUParams) -> FlowConfig:
    """U = h = 1, nu = 1/2 (Re = 2), theta = sigma = 1."""
    return FlowConfig(
        geometry=Geometry(length=1.0, height=1.0), viscosity=0.5, ou=ou_params
    )


@pytest.fixture
def laminar_flow() -> FlowConfig:
    """Deterministic wall at Re = 10."""
    return FlowConfig(
        geometry=Geometry(length=1.0, height=1.0),
        viscosity=0.1,
        ou=OUParams(mean_speed=1.0, reversion_rate=1.0, noise_amplitude=0.0),
    )


@pytest.fixture
def noisy_flow() -> FlowConfig:
    """Re = 10 with a moderately noisy wall."""
    return FlowConfig(
        geometry=Geometry(length=1.0, height=1.0),
        viscosity=0.1,
        ou=OUParams(mean_speed=1.0, reversion_rate=1.0, noise_amplitude=0.5),
    )


@pytest.fixture
def small_grid() -> GridSpec:
    """8 x 8 x 8 cells; dt well inside the stability limit at nu = 0.1."""
    return GridSpec(n1=8, n2=8, n3=8, dt=0.005)


@pytest.fixture
def column_grid() -> GridSpec:
    """One horizontal cell: the channel reduces to x3-diffusion."""
    return GridSpec(n1=1, n2=1, n3=16, dt=0.004)


@pytest.fixture
def small_experiment(noisy_flow: FlowConfig, column_grid: GridSpec, tmp_path: Path) -> ExperimentConfig:
    """Three short column trajectories with every audit switched on."""
    return ExperimentConfig(
        flow=noisy_flow,
        grid=column_grid,
        t_end=0.2,
        trajectories=3,
        master_seed=5,
        output_dir=str(tmp_path / "run"),
        initial=InitialCondition(kind="couette"),
        audit=AuditToggles(energy=True, ito=True, trace=True),
    )
