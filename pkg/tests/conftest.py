"""Pytest configuration and fixtures."""
import numpy as np
import pytest
import esper

from src.config import RunConfig, ScenarioConfig
from src.sim.scenario import generate_scenario


def _reset_esper():
    if esper.current_world != "default":
        esper.switch_world("default")
    for name in list(esper.list_worlds()):
        if name != "default":
            esper.delete_world(name)
    esper._processors.clear()
    esper._components.clear()
    esper._entities.clear()
    esper._dead_entities.clear()


@pytest.fixture(autouse=True)
def cleanup_esper_worlds():
    """Clean up esper worlds between tests to prevent state leakage.

    Engines create one named world each; every world but the default one
    is deleted and the default world is emptied.
    """
    _reset_esper()
    yield
    _reset_esper()


@pytest.fixture
def rng():
    """Seeded random generator for Monte Carlo checks."""
    return np.random.default_rng(12345)


@pytest.fixture
def short_config(tmp_path):
    """Default run settings shortened to 20 iterations, writing into tmp_path."""
    return RunConfig().with_overrides(iterations=20, output_dir=str(tmp_path / "run"))


@pytest.fixture
def default_path():
    """Reference path of the default grid scenario."""
    return generate_scenario(ScenarioConfig())
