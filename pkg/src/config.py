"""Run configuration: default constants and the validated run settings."""
import dataclasses
import re
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path

from src.errors import ConfigError


class Config:
    """Central configuration for default constants."""

    # Model
    SAMPLING_TIME: float = 0.2  # s

    # Scenario (grid with urban-like maneuvers)
    ITERATIONS: int = 150
    SEED: int = 0
    BLOCK_SIZE: float = 40.0  # m between intersections
    CORNER_RADIUS: float = 10.0  # m
    TURNS: tuple[str, ...] = ("left", "right", "right", "left", "left", "right")
    CRUISE_SPEED: float = 9.0  # m/s
    CORNER_SPEED: float = 5.0  # m/s
    PLANNED_DECEL: float = 2.0  # m/s^2 used to ramp speed down before corners
    RUNOUT: float = 80.0  # m of straight road after the last turn
    PATH_RESOLUTION: float = 0.5  # m between dense path samples

    # Tracking controller (pure pursuit + proportional speed)
    LOOKAHEAD_BASE: float = 2.5  # m
    LOOKAHEAD_GAIN: float = 0.25  # s
    SPEED_GAIN: float = 1.0  # 1/s
    A_MAX: float = 3.0  # m/s^2
    KAPPA_MAX: float = 0.2  # 1/m

    # Injected noise
    ACTUATION_SIGMA_A: float = 0.1  # m/s^2
    ACTUATION_SIGMA_KAPPA: float = 0.003  # 1/m
    MEASUREMENT_SIGMA_PX: float = 0.05  # m
    MEASUREMENT_SIGMA_PY: float = 0.05  # m
    MEASUREMENT_SIGMA_V: float = 0.1  # m/s

    # EKF process noise and initial covariance
    Q_POSE: float = 1e-6
    Q_A: float = 0.04  # (m/s^2)^2
    Q_KAPPA: float = 0.0004  # (1/m)^2
    P0_DIAGONAL: tuple[float, ...] = (1.0, 1.0, 0.5, 1.0, 1.0, 0.01)

    # Control-Input set
    WINDOW_SIZE: int = 5
    N_GENERATORS: int = 3
    A_SCALE: float = 2.0  # m/s^2
    KAPPA_SCALE: float = 0.1  # 1/m
    EXPANSION_A: float = 0.15  # m/s^2
    EXPANSION_KAPPA: float = 0.006  # 1/m
    EXPANSION_SIGMA: float = 2.5  # multiples of the EKF control std; 0 keeps the fixed margins

    # Reachability and occupancy
    HORIZON: int = 10
    GENERATOR_BUDGET: int = 10
    OCCUPANCY_BUDGET: int = 10
    DILATION: tuple[float, float] = (0.9, 0.9)  # m
    DILATION_GROWTH: float = 0.0  # m per prediction step
    INITIAL_SET: str = "sigma"
    INITIAL_SIGMA: float = 2.0
    INITIAL_FLOOR: tuple[float, ...] = (0.01, 0.01, 0.001, 0.01)
    SENSITIVITY_DILATIONS: tuple[float, ...] = (0.5, 0.9, 1.5)
    SWEEP_HORIZONS: tuple[int, ...] = (3, 4, 5, 6, 7, 8, 9, 10)

    # Set algebra tolerances
    NULL_GENERATOR_TOL: float = 1e-12
    PARALLEL_ANGLE_TOL: float = 1e-9  # rad
    CONTAINMENT_TOL: float = 1e-7

    # Output
    OUTPUT_DIR: str = "runs/default"


TURN_NAMES = ("left", "right", "straight")
INITIAL_SET_MODES = ("sigma", "point")


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


@dataclass(frozen=True)
class SensorNoise:
    """Standard deviations of the noise injected by the simulator."""

    actuation_a: float = Config.ACTUATION_SIGMA_A
    actuation_kappa: float = Config.ACTUATION_SIGMA_KAPPA
    measurement_px: float = Config.MEASUREMENT_SIGMA_PX
    measurement_py: float = Config.MEASUREMENT_SIGMA_PY
    measurement_v: float = Config.MEASUREMENT_SIGMA_V

    def __post_init__(self) -> None:
        for name, value in dataclasses.asdict(self).items():
            _require(value >= 0.0, f"noise.{name} must be non-negative, got {value}")

    @classmethod
    def zero(cls) -> "SensorNoise":
        return cls(0.0, 0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class ScenarioConfig:
    """Grid scenario geometry, speed profile, noise and run length."""

    block_size: float = Config.BLOCK_SIZE
    corner_radius: float = Config.CORNER_RADIUS
    turns: tuple[str, ...] = Config.TURNS
    cruise_speed: float = Config.CRUISE_SPEED
    corner_speed: float = Config.CORNER_SPEED
    planned_decel: float = Config.PLANNED_DECEL
    runout: float = Config.RUNOUT
    resolution: float = Config.PATH_RESOLUTION
    noise: SensorNoise = field(default_factory=SensorNoise)
    seed: int = Config.SEED
    iterations: int = Config.ITERATIONS
    sampling_time: float = Config.SAMPLING_TIME

    def __post_init__(self) -> None:
        object.__setattr__(self, "turns", tuple(self.turns))
        _require(self.block_size > 0, "scenario.block_size must be positive")
        _require(self.corner_radius > 0, "scenario.corner_radius must be positive")
        _require(self.cruise_speed > 0, "scenario.cruise_speed must be positive")
        _require(self.corner_speed > 0, "scenario.corner_speed must be positive")
        _require(self.planned_decel > 0, "scenario.planned_decel must be positive")
        _require(self.runout > 0, "scenario.runout must be positive")
        _require(self.resolution > 0, "scenario.resolution must be positive")
        _require(self.iterations >= 1, "scenario.iterations must be at least 1")
        _require(self.sampling_time > 0, "model.sampling_time must be positive")
        for turn in self.turns:
            _require(turn in TURN_NAMES, f"unknown turn {turn!r}; expected one of {TURN_NAMES}")


@dataclass(frozen=True)
class ControllerParams:
    """Pure-pursuit steering and proportional speed control gains."""

    lookahead_base: float = Config.LOOKAHEAD_BASE
    lookahead_gain: float = Config.LOOKAHEAD_GAIN
    speed_gain: float = Config.SPEED_GAIN
    a_max: float = Config.A_MAX
    kappa_max: float = Config.KAPPA_MAX

    def __post_init__(self) -> None:
        _require(self.lookahead_base > 0, "controller.lookahead_base must be positive")
        _require(self.lookahead_gain >= 0, "controller.lookahead_gain must be non-negative")
        _require(self.speed_gain > 0, "controller.speed_gain must be positive")
        _require(self.a_max > 0, "controller.a_max must be positive")
        _require(self.kappa_max > 0, "controller.kappa_max must be positive")


@dataclass(frozen=True)
class FilterSettings:
    """Diagonal EKF process noise and initial covariance."""

    q_pose: float = Config.Q_POSE
    q_a: float = Config.Q_A
    q_kappa: float = Config.Q_KAPPA
    p0: tuple[float, ...] = Config.P0_DIAGONAL

    def __post_init__(self) -> None:
        object.__setattr__(self, "p0", tuple(float(p) for p in self.p0))
        _require(len(self.p0) == 6, "filter.p0 must have 6 entries")
        _require(min(self.p0) >= 0, "filter.p0 entries must be non-negative")
        _require(min(self.q_pose, self.q_a, self.q_kappa) >= 0, "filter process noise must be non-negative")


@dataclass(frozen=True)
class ControlSetConfig:
    """Sliding window, generator basis, axis scaling and expansion."""

    window: int = Config.WINDOW_SIZE
    generators: int = Config.N_GENERATORS
    a_scale: float = Config.A_SCALE
    kappa_scale: float = Config.KAPPA_SCALE
    expansion_a: float = Config.EXPANSION_A
    expansion_kappa: float = Config.EXPANSION_KAPPA
    expansion_sigma: float = Config.EXPANSION_SIGMA

    def __post_init__(self) -> None:
        _require(self.window >= 1, "control_set.window must be at least 1")
        _require(self.generators >= 2, "control_set.generators must be at least 2")
        _require(self.a_scale > 0 and self.kappa_scale > 0, "control_set scales must be positive")
        _require(self.expansion_a >= 0 and self.expansion_kappa >= 0, "control_set expansions must be non-negative")
        _require(self.expansion_sigma >= 0, "control_set.expansion_sigma must be non-negative")

    @property
    def scaling(self) -> tuple[float, float]:
        return (self.a_scale, self.kappa_scale)

    @property
    def expansion(self) -> tuple[float, float]:
        return (self.expansion_a, self.expansion_kappa)


@dataclass(frozen=True)
class PredictionConfig:
    """Horizon, set complexity limits, dilation and initial set."""

    horizon: int = Config.HORIZON
    generator_budget: int = Config.GENERATOR_BUDGET
    occupancy_budget: int = Config.OCCUPANCY_BUDGET
    dilation: tuple[float, float] = Config.DILATION
    dilation_growth: float = Config.DILATION_GROWTH
    initial_set: str = Config.INITIAL_SET
    initial_sigma: float = Config.INITIAL_SIGMA
    initial_floor: tuple[float, ...] = Config.INITIAL_FLOOR
    containment_tol: float = Config.CONTAINMENT_TOL

    def __post_init__(self) -> None:
        object.__setattr__(self, "dilation", tuple(float(d) for d in self.dilation))
        object.__setattr__(self, "initial_floor", tuple(float(f) for f in self.initial_floor))
        _require(self.horizon >= 1, "prediction.horizon must be at least 1")
        _require(self.generator_budget >= 4, "prediction.generator_budget must be at least the state dimension (4)")
        _require(self.occupancy_budget >= 2, "prediction.occupancy_budget must be at least 2")
        _require(len(self.dilation) == 2, "prediction.dilation must have 2 entries")
        _require(min(self.dilation) >= 0, "prediction.dilation must be non-negative")
        _require(self.dilation_growth >= 0, "prediction.dilation_growth must be non-negative")
        _require(self.initial_set in INITIAL_SET_MODES, f"prediction.initial_set must be one of {INITIAL_SET_MODES}")
        _require(self.initial_sigma >= 0, "prediction.initial_sigma must be non-negative")
        _require(len(self.initial_floor) == 4, "prediction.initial_floor must have 4 entries")
        _require(min(self.initial_floor) >= 0, "prediction.initial_floor must be non-negative")
        _require(self.containment_tol >= 0, "prediction.containment_tol must be non-negative")


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run: with the seed, outputs are reproducible."""

    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    controller: ControllerParams = field(default_factory=ControllerParams)
    filter: FilterSettings = field(default_factory=FilterSettings)
    control_set: ControlSetConfig = field(default_factory=ControlSetConfig)
    prediction: PredictionConfig = field(default_factory=PredictionConfig)
    output_dir: str = Config.OUTPUT_DIR

    def with_overrides(self, **overrides) -> "RunConfig":
        """Return a copy with flag values applied (``None`` values are ignored)."""
        config = self
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in FLAG_FIELDS:
                raise ConfigError(f"unknown override {key!r}")
            section, name = FLAG_FIELDS[key]
            config = _replace_field(config, section, name, value)
        return config

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


# TOML section -> key -> (RunConfig attribute path, converter)
SECTION_FIELDS: dict[str, dict[str, tuple[str, str, type]]] = {
    "scenario": {
        "block_size": ("scenario", "block_size", float),
        "corner_radius": ("scenario", "corner_radius", float),
        "turns": ("scenario", "turns", tuple),
        "cruise_speed": ("scenario", "cruise_speed", float),
        "corner_speed": ("scenario", "corner_speed", float),
        "planned_decel": ("scenario", "planned_decel", float),
        "runout": ("scenario", "runout", float),
        "resolution": ("scenario", "resolution", float),
        "seed": ("scenario", "seed", int),
        "iterations": ("scenario", "iterations", int),
    },
    "model": {
        "sampling_time": ("scenario", "sampling_time", float),
    },
    "noise": {
        "actuation_a": ("scenario.noise", "actuation_a", float),
        "actuation_kappa": ("scenario.noise", "actuation_kappa", float),
        "measurement_px": ("scenario.noise", "measurement_px", float),
        "measurement_py": ("scenario.noise", "measurement_py", float),
        "measurement_v": ("scenario.noise", "measurement_v", float),
    },
    "controller": {
        name: ("controller", name, float)
        for name in ("lookahead_base", "lookahead_gain", "speed_gain", "a_max", "kappa_max")
    },
    "filter": {
        "q_pose": ("filter", "q_pose", float),
        "q_a": ("filter", "q_a", float),
        "q_kappa": ("filter", "q_kappa", float),
        "p0": ("filter", "p0", tuple),
    },
    "control_set": {
        "window": ("control_set", "window", int),
        "generators": ("control_set", "generators", int),
        "a_scale": ("control_set", "a_scale", float),
        "kappa_scale": ("control_set", "kappa_scale", float),
        "expansion_a": ("control_set", "expansion_a", float),
        "expansion_kappa": ("control_set", "expansion_kappa", float),
        "expansion_sigma": ("control_set", "expansion_sigma", float),
    },
    "prediction": {
        "horizon": ("prediction", "horizon", int),
        "generator_budget": ("prediction", "generator_budget", int),
        "occupancy_budget": ("prediction", "occupancy_budget", int),
        "dilation": ("prediction", "dilation", tuple),
        "dilation_growth": ("prediction", "dilation_growth", float),
        "initial_set": ("prediction", "initial_set", str),
        "initial_sigma": ("prediction", "initial_sigma", float),
        "initial_floor": ("prediction", "initial_floor", tuple),
        "containment_tol": ("prediction", "containment_tol", float),
    },
    "output": {
        "directory": ("", "output_dir", str),
    },
}

# command-line flag -> (RunConfig attribute path, field)
FLAG_FIELDS: dict[str, tuple[str, str]] = {
    "seed": ("scenario", "seed"),
    "iterations": ("scenario", "iterations"),
    "horizon": ("prediction", "horizon"),
    "window": ("control_set", "window"),
    "generators": ("control_set", "generators"),
    "dilation": ("prediction", "dilation"),
    "output_dir": ("", "output_dir"),
}


def _replace_field(config: RunConfig, path: str, name: str, value) -> RunConfig:
    """Replace ``config.<path>.<name>`` immutably, re-running validation."""
    if not path:
        return dataclasses.replace(config, **{name: value})
    head, _, rest = path.partition(".")
    child = getattr(config, head)
    if rest:
        inner = getattr(child, rest)
        child = dataclasses.replace(child, **{rest: dataclasses.replace(inner, **{name: value})})
    else:
        child = dataclasses.replace(child, **{name: value})
    return dataclasses.replace(config, **{head: child})


def _line_of(text: str, section: str, key: str | None = None) -> int | None:
    """Locate the line number of a section header or a key inside it."""
    lines = text.splitlines()
    header = re.compile(rf"^\s*\[\s*{re.escape(section)}\s*\]")
    start = next((i for i, line in enumerate(lines) if header.match(line)), None)
    if start is None:
        return None
    if key is None:
        return start + 1
    key_line = re.compile(rf"^\s*{re.escape(key)}\s*=")
    for i in range(start + 1, len(lines)):
        if lines[i].lstrip().startswith("["):
            break
        if key_line.match(lines[i]):
            return i + 1
    return start + 1


def parse_run_config(text: str, base: RunConfig | None = None) -> RunConfig:
    """Parse TOML text into a validated RunConfig.

    Raises:
        ConfigError: On syntax errors, unknown sections/keys or invalid values
    """
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"invalid config syntax: {e}") from e

    config = base or RunConfig()
    for section, values in data.items():
        if section not in SECTION_FIELDS:
            raise ConfigError(f"unknown section [{section}]", _line_of(text, section))
        if not isinstance(values, dict):
            raise ConfigError(f"[{section}] must be a table", _line_of(text, section))
        for key, raw in values.items():
            if key not in SECTION_FIELDS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}]", _line_of(text, section, key))
            path, name, convert = SECTION_FIELDS[section][key]
            try:
                value = convert(raw)
                config = _replace_field(config, path, name, value)
            except ConfigError as e:
                raise ConfigError(str(e), _line_of(text, section, key)) from e
            except (TypeError, ValueError) as e:
                raise ConfigError(f"bad value for {section}.{key}: {e}", _line_of(text, section, key)) from e
    return config


def load_run_config(path: str | Path | None = None, **overrides) -> RunConfig:
    """Load defaults, then the optional config file, then flag overrides."""
    config = RunConfig()
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}") from e
        config = parse_run_config(text, config)
    return config.with_overrides(**overrides)
