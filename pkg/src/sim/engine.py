"""Prediction engine: one esper world running the closed-loop pipeline."""
import esper
import numpy as np

from src.config import RunConfig
from src.model.kinematics import ModelParams
from src.systems.control_set import ControlSetSystem
from src.systems.driving import DrivingSystem
from src.systems.estimation import EstimationSystem
from src.systems.occupancy import OccupancySystem
from src.systems.reachability import ReachabilitySystem
from src.systems.recorder import RecorderSystem
from src.systems.sensing import SensingSystem

DEFAULT_WORLD = "default"


class PredictionEngine:
    """Owns the ECS world, the run's RNG and the ordered pipeline systems."""

    def __init__(self, config: RunConfig | None = None, world_name: str | None = None, predict: bool = True):
        """Initialize the prediction engine.

        Args:
            config: Run configuration (defaults when omitted)
            world_name: Optional world name (defaults to auto-generated)
            predict: Register the set-based stages; without them the engine
                only drives, measures and filters
        """
        self.config = config or RunConfig()
        # Each engine gets its own world by name
        self.world_name = world_name if world_name else f"prediction_world_{id(self)}"
        esper.switch_world(self.world_name)
        self.world = esper  # Expose esper module as world interface
        self.running = True
        self.iteration = 0
        self.rng = np.random.default_rng(self.config.scenario.seed)
        self.model = ModelParams(self.config.scenario.sampling_time)
        noise = self.config.scenario.noise

        # Create and register all systems with priority order (higher runs first)
        self.driving_system = DrivingSystem(self.model, noise, self.rng)
        self.world.add_processor(self.driving_system, priority=7)

        self.sensing_system = SensingSystem(noise, self.rng)
        self.world.add_processor(self.sensing_system, priority=6)

        self.estimation_system = EstimationSystem()
        self.world.add_processor(self.estimation_system, priority=5)

        if not predict:
            return

        self.control_set_system = ControlSetSystem(self.config.control_set)
        self.world.add_processor(self.control_set_system, priority=4)

        self.reachability_system = ReachabilitySystem(self.config.prediction, self.model)
        self.world.add_processor(self.reachability_system, priority=3)

        self.occupancy_system = OccupancySystem(self.config.prediction)
        self.world.add_processor(self.occupancy_system, priority=2)

        self.recorder_system = RecorderSystem(self.model.sampling_time)
        self.world.add_processor(self.recorder_system, priority=1)

    def prime(self):
        """Take the initial measurement so the filter can seed its heading."""
        esper.switch_world(self.world_name)
        self.sensing_system.process()
        self.estimation_system.process()

    def update(self):
        """Run one pipeline iteration for every vehicle."""
        esper.switch_world(self.world_name)
        esper.process()
        self.iteration += 1

    def stop(self):
        """Stop the engine."""
        self.running = False

    def close(self):
        """Delete this engine's world."""
        self.running = False
        if esper.current_world == self.world_name:
            esper.switch_world(DEFAULT_WORLD)
        if self.world_name in esper.list_worlds():
            esper.delete_world(self.world_name)
