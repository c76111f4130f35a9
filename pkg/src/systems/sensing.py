"""Sensing system: noisy position/speed measurements of each vehicle."""
import esper
import numpy as np

from src.components.core import Observation, TrueState
from src.config import SensorNoise
from src.sim.controller import observe


class SensingSystem(esper.Processor):
    """Writes a fresh measurement of the true state into ``Observation``."""

    def __init__(self, noise: SensorNoise, rng: np.random.Generator):
        super().__init__()
        self.noise = noise
        self.rng = rng

    def process(self):
        for ent, (truth, observation) in esper.get_components(TrueState, Observation):
            observation.measurement = observe(truth.state, self.noise, self.rng, truth.k)
