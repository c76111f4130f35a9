"""Driving system: advances each simulated vehicle one sampling interval."""
import esper
import numpy as np

from src.components.core import PathFollower, TrueState
from src.config import SensorNoise
from src.model.kinematics import ModelParams
from src.sim.controller import sv_step


class DrivingSystem(esper.Processor):
    """Applies the tracking controller with actuation noise to the true state."""

    def __init__(self, model: ModelParams, noise: SensorNoise, rng: np.random.Generator):
        """Initialize the driving system.

        Args:
            model: Sampling interval of the simulation
            noise: Actuation noise standard deviations
            rng: Random generator owned by the run
        """
        super().__init__()
        self.model = model
        self.noise = noise
        self.rng = rng

    def process(self):
        """Step every vehicle that follows a path."""
        for ent, (truth, follower) in esper.get_components(TrueState, PathFollower):
            step = sv_step(
                truth.state, follower.path, follower.params, self.noise,
                self.model, self.rng, follower.progress,
            )
            truth.state = step.state
            truth.control = step.control
            truth.k += 1
            follower.progress = step.progress
