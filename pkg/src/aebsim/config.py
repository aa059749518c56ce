"""Configuration records and unit helpers.

All physical constants live in :class:`NetworkConfig`; the remaining
dataclasses hold knobs for the scenario generator, diffusion sampler,
denoising network, trainer and test-time alternation.  An experiment file
(JSON or TOML) maps section names to these records; unknown keys are
rejected so typos fail loudly.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Optional

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib


class ConfigError(ValueError):
    """Invalid configuration value or malformed config file."""


# ---------------------------------------------------------------------------
# unit conversions
# ---------------------------------------------------------------------------

def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    if x <= 0:
        raise ValueError("linear_to_db requires a positive value")
    return 10.0 * math.log10(x)


def dbm_to_watts(x_dbm: float) -> float:
    return 10.0 ** ((x_dbm - 30.0) / 10.0)


def watts_to_dbm(p_watts: float) -> float:
    if p_watts <= 0:
        raise ValueError("watts_to_dbm requires a positive power")
    return 10.0 * math.log10(p_watts) + 30.0


def min_rate_for_latency(payload_bits: float, bandwidth_hz: float,
                         latency_s: float) -> float:
    """Spectral-efficiency floor (bit/s/Hz) needed to deliver a payload of
    ``payload_bits`` over ``bandwidth_hz`` within ``latency_s``."""
    if bandwidth_hz <= 0 or latency_s <= 0:
        raise ValueError("bandwidth and latency must be positive")
    return payload_bits / (bandwidth_hz * latency_s)


# ---------------------------------------------------------------------------
# network constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NetworkConfig:
    """Physical and system constants for one network instance.

    Power quantities are linear watts.  The nominal power budget of
    10 dBm and the -113 dBm noise floor are converted via
    :func:`dbm_to_watts`.
    """

    K: int = 2                      # aerial base stations
    N: int = 8                      # ground users
    Nt: int = 2                     # transmit antennas per AeBS
    area_x: tuple[float, float] = (0.0, 1000.0)   # m
    area_y: tuple[float, float] = (0.0, 1000.0)   # m
    H: float = 50.0                 # flight altitude, m (fixed)
    R_comm: float = 200.0           # communication radius, m
    d_min: float = 10.0             # AeBS-AeBS safety distance, m
    N_a: int = 10                   # max GUs served by one AeBS
    fc: float = 2.4e9               # carrier frequency, Hz
    c_light: float = 3.0e8          # m/s
    zeta_los: float = 1.0           # LoS excess loss, dB
    zeta_nlos: float = 20.0         # NLoS excess loss, dB
    eta: float = 9.61               # environment parameter (degree scale)
    varsigma: float = 0.16          # environment parameter
    sigma2: float = dbm_to_watts(-113.0)   # noise power, W
    P_max: float = dbm_to_watts(10.0)      # per-AeBS power budget, W
    Dc: int = 1000                  # common-stream blocklength
    Dp: int = 1000                  # private-stream blocklength
    eps_dec: float = 1e-5           # decoding error probability
    R_min: float = 1.0              # per-GU rate floor, bit/s/Hz
    lambda1: float = 1.0            # utility weight on coverage
    lambda2: float = 1.0            # utility weight on normalized sum rate
    R_N: Optional[float] = None     # sum-rate normalization; default 2N
    S_big: Optional[float] = None   # big-M for the range constraint

    def __post_init__(self) -> None:
        object.__setattr__(self, "area_x", tuple(float(v) for v in self.area_x))
        object.__setattr__(self, "area_y", tuple(float(v) for v in self.area_y))
        if self.R_N is None:
            # per-GU scale of 2 bit/s/Hz keeps both utility terms comparable
            object.__setattr__(self, "R_N", 2.0 * self.N)
        if self.S_big is None:
            object.__setattr__(self, "S_big", 10.0 * self.area_diagonal())
        self._validate()

    def _validate(self) -> None:
        checks = [
            (self.K >= 1, "K must be >= 1"),
            (self.N >= 2 * self.K, "N must be >= 2K so every AeBS can serve two GUs"),
            (self.Nt >= 1, "Nt must be >= 1"),
            (len(self.area_x) == 2 and self.area_x[1] > self.area_x[0],
             "area_x must be an increasing (min, max) pair"),
            (len(self.area_y) == 2 and self.area_y[1] > self.area_y[0],
             "area_y must be an increasing (min, max) pair"),
            (self.H > 0, "H must be positive"),
            (self.R_comm > 0, "R_comm must be positive"),
            (self.d_min > 0, "d_min must be positive"),
            (self.N_a >= 2, "N_a must be >= 2"),
            (self.fc > 0, "fc must be positive"),
            (self.c_light > 0, "c_light must be positive"),
            (self.sigma2 > 0, "sigma2 must be positive"),
            (self.P_max > 0, "P_max must be positive"),
            (self.Dc >= 100, "Dc must be >= 100"),
            (self.Dp >= 100, "Dp must be >= 100"),
            (0.0 < self.eps_dec < 0.5, "eps_dec must lie in (0, 0.5)"),
            (self.R_min >= 0, "R_min must be nonnegative"),
            (self.R_N > 0, "R_N must be positive"),
            (self.S_big > self.max_link_distance(),
             "S_big must dominate every achievable link distance"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ConfigError(msg)

    # geometry helpers -----------------------------------------------------

    def area_size(self) -> tuple[float, float]:
        return (self.area_x[1] - self.area_x[0],
                self.area_y[1] - self.area_y[0])

    def area_diagonal(self) -> float:
        lx, ly = self.area_size()
        return math.hypot(lx, ly)

    def max_link_distance(self) -> float:
        """Largest possible AeBS-GU distance inside the task area."""
        return math.hypot(self.area_diagonal(), self.H)

    def replace(self, **kw: Any) -> "NetworkConfig":
        return dataclasses.replace(self, **kw)

    # serialization --------------------------------------------------------

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "NetworkConfig":
        return _build(cls, data, section="network")

    @classmethod
    def from_file(cls, path: str | Path) -> "NetworkConfig":
        data = _read_config_file(path)
        # allow either a bare mapping or a file with a [network] section
        if "network" in data and isinstance(data["network"], dict):
            data = data["network"]
        return cls.from_mapping(data)

    def to_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        d["area_x"] = list(self.area_x)
        d["area_y"] = list(self.area_y)
        return d


# ---------------------------------------------------------------------------
# component settings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScenarioConfig:
    """Ground-user layout generation.

    ``clusters`` draws GUs in hotspot disks (deployable by a few AeBSs);
    ``uniform`` spreads them over the whole task area.
    """

    layout: str = "clusters"        # "clusters" | "uniform"
    clusters: Optional[int] = None  # hotspot count; None -> one per AeBS
    cluster_radius: float = 110.0   # m
    min_cluster_separation: float = 275.0  # m, between hotspot centres

    def __post_init__(self) -> None:
        if self.layout not in ("clusters", "uniform"):
            raise ConfigError(f"unknown GU layout {self.layout!r}")
        if self.clusters is not None and self.clusters < 1:
            raise ConfigError("clusters must be >= 1")
        if self.cluster_radius <= 0:
            raise ConfigError("cluster_radius must be positive")

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "ScenarioConfig":
        return _build(cls, data, section="scenario")


@dataclass(frozen=True)
class GraphConfig:
    """Discretization of the deployment state."""

    grid: int = 10                  # placement alphabet is grid x grid cells

    def __post_init__(self) -> None:
        if self.grid < 1:
            raise ConfigError("grid must be >= 1")

    @property
    def num_node_states(self) -> int:
        return self.grid * self.grid

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "GraphConfig":
        return _build(cls, data, section="graph")


@dataclass(frozen=True)
class DiffusionConfig:
    steps: int = 15                 # denoising steps T
    stationary: str = "uniform"     # "uniform" | "marginal"
    cosine_s: float = 0.008         # cosine schedule offset
    edge_density: Optional[float] = None  # marginal mode: P(edge on); None -> 1/K

    def __post_init__(self) -> None:
        if self.steps < 0:
            raise ConfigError("steps must be >= 0")
        if self.stationary not in ("uniform", "marginal"):
            raise ConfigError(f"unknown stationary mode {self.stationary!r}")
        if self.edge_density is not None and not (0.0 < self.edge_density < 1.0):
            raise ConfigError("edge_density must lie in (0, 1)")

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "DiffusionConfig":
        return _build(cls, data, section="diffusion")


@dataclass(frozen=True)
class DenoiserConfig:
    layers: int = 3
    hidden: int = 128
    heads: int = 4
    time_dim: int = 16
    extra_context_dim: int = 0      # resource-conditioning scalars (0 = off)

    def __post_init__(self) -> None:
        if self.layers < 1 or self.hidden < 1 or self.heads < 1:
            raise ConfigError("layers, hidden and heads must be >= 1")
        if self.hidden % self.heads != 0:
            raise ConfigError("hidden must be divisible by heads")
        if self.time_dim < 2 or self.time_dim % 2 != 0:
            raise ConfigError("time_dim must be a positive even number")
        if self.extra_context_dim < 0:
            raise ConfigError("extra_context_dim must be >= 0")

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "DenoiserConfig":
        return _build(cls, data, section="denoiser")


@dataclass(frozen=True)
class RewardConfig:
    """Penalty weights for the constraint indicators in the graph reward."""

    w_assoc: float = 1.0
    w_mobility: float = 1.0
    w_collision: float = 1.0
    w_range: float = 1.0

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.w_assoc, self.w_mobility, self.w_collision, self.w_range)

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "RewardConfig":
        return _build(cls, data, section="reward")


@dataclass(frozen=True)
class TrainConfig:
    trajectories: int = 8           # M sampled trajectories per step
    timestep_samples: int = 4       # |T_m| subsampled timesteps per trajectory
    steps: int = 100                # L training steps
    lr: float = 1e-4                # learning rate
    optimizer: str = "adam"         # "adam" | "sgd" (plain ascent)
    baseline: bool = True           # subtract running mean reward
    estimator: str = "eager"        # "eager" | "stepwise"
    batch_size: int = 64            # max (trajectory, timestep) pairs per chunk
    reward_mode: str = "surrogate"  # "surrogate" | "exact"
    checkpoint_interval: int = 0    # steps between checkpoints; 0 = final only

    def __post_init__(self) -> None:
        if self.trajectories < 1:
            raise ConfigError("trajectories must be >= 1")
        if self.timestep_samples < 1:
            raise ConfigError("timestep_samples must be >= 1")
        if self.steps < 0:
            raise ConfigError("steps must be >= 0")
        if self.lr <= 0:
            raise ConfigError("lr must be positive")
        if self.optimizer not in ("adam", "sgd"):
            raise ConfigError(f"unknown optimizer {self.optimizer!r}")
        if self.estimator not in ("eager", "stepwise"):
            raise ConfigError(f"unknown estimator {self.estimator!r}")
        if self.batch_size < 1:
            raise ConfigError("batch_size must be >= 1")
        if self.reward_mode not in ("surrogate", "exact"):
            raise ConfigError(f"unknown reward_mode {self.reward_mode!r}")
        if self.checkpoint_interval < 0:
            raise ConfigError("checkpoint_interval must be >= 0")

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "TrainConfig":
        return _build(cls, data, section="train")


@dataclass(frozen=True)
class SolveConfig:
    """Test-time alternation between sampling and beamforming."""

    tau: float = 1e-5               # convergence tolerance on utility
    k_max: int = 6                  # max alternation rounds
    init_samples: int = 0           # extra sampled candidates for the start point

    def __post_init__(self) -> None:
        if self.tau <= 0:
            raise ConfigError("tau must be positive")
        if self.k_max < 1:
            raise ConfigError("k_max must be >= 1")
        if self.init_samples < 0:
            raise ConfigError("init_samples must be >= 0")

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "SolveConfig":
        return _build(cls, data, section="solve")


@dataclass(frozen=True)
class SweepConfig:
    """Training budget used inside parameter sweeps (kept light)."""

    train_steps: int = 25
    trajectories: int = 6

    def __post_init__(self) -> None:
        if self.train_steps < 0 or self.trajectories < 1:
            raise ConfigError("invalid sweep budget")

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "SweepConfig":
        return _build(cls, data, section="sweep")


# ---------------------------------------------------------------------------
# experiment file
# ---------------------------------------------------------------------------

_SECTIONS = {
    "network": NetworkConfig,
    "scenario": ScenarioConfig,
    "graph": GraphConfig,
    "diffusion": DiffusionConfig,
    "denoiser": DenoiserConfig,
    "reward": RewardConfig,
    "train": TrainConfig,
    "solve": SolveConfig,
    "sweep": SweepConfig,
}


@dataclass(frozen=True)
class ExperimentConfig:
    network: NetworkConfig = field(default_factory=NetworkConfig)
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    graph: GraphConfig = field(default_factory=GraphConfig)
    diffusion: DiffusionConfig = field(default_factory=DiffusionConfig)
    denoiser: DenoiserConfig = field(default_factory=DenoiserConfig)
    reward: RewardConfig = field(default_factory=RewardConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    solve: SolveConfig = field(default_factory=SolveConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "ExperimentConfig":
        unknown = set(data) - set(_SECTIONS)
        if unknown:
            raise ConfigError(f"unknown config sections: {sorted(unknown)}")
        kwargs = {}
        for name, section_cls in _SECTIONS.items():
            if name in data:
                if not isinstance(data[name], dict):
                    raise ConfigError(f"section {name!r} must be a table/object")
                kwargs[name] = section_cls.from_mapping(data[name])
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_mapping(_read_config_file(path))

    def replace(self, **kw: Any) -> "ExperimentConfig":
        return dataclasses.replace(self, **kw)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        for name in _SECTIONS:
            section = getattr(self, name)
            if name == "network":
                out[name] = section.to_dict()
            else:
                out[name] = dataclasses.asdict(section)
        return out

    def dump_json(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True))


# ---------------------------------------------------------------------------
# shared builders
# ---------------------------------------------------------------------------

def _build(cls, data: dict[str, Any], section: str):
    if not isinstance(data, dict):
        raise ConfigError(f"section {section!r} must be a mapping")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(
            f"unknown keys in section {section!r}: {sorted(unknown)}")
    try:
        return cls(**data)
    except TypeError as exc:
        raise ConfigError(f"bad section {section!r}: {exc}") from exc


def _read_config_file(path: str | Path) -> dict[str, Any]:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    text = p.read_bytes()
    if p.suffix.lower() == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {p}: {exc}") from exc
    elif p.suffix.lower() == ".toml":
        try:
            data = tomllib.loads(text.decode("utf-8"))
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {p}: {exc}") from exc
    else:
        raise ConfigError(f"unsupported config extension {p.suffix!r} "
                          "(use .json or .toml)")
    if not isinstance(data, dict):
        raise ConfigError("config root must be a mapping")
    return data
