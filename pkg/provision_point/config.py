"""
Run configuration: one YAML document per run, validated before any computation.

Every section is optional. Unknown keys are rejected. Seeds that are not
given fall back to the PROVISION_POINT_SEED environment variable, then 0.

    project:    {provision_point: 100, deadline: 10, budget: 20}
    schemes:    {pprg: {a: 1, gamma: 2}, ppre: {k2: 1}, pprp: {k3: 1}, pps: {liquidity: 10}}
    sample:     {num_points: 1000, x_range: [1, 20], t_range: [0.1, 9], seed: 0}
    equilibrium: {scheme: pprg, budget_fraction: 0.5, n_players: 25}
    simulation: {policy: equilibrium, budget_fractions: [0.25, 0.5, 1.0], multipliers: [5, 10, 20]}
    plot:       {contribution: 5, n_players: 10, k: 1, gamma: 2}
    gas:        {exp_operand: 1, log_bytes: 0, exp_mode: bytes}
    refund:     {scheme: ppr, players: [{id: 1, valuation: 30, arrival: 0, amount: 10}]}
"""

import logging
import os
from typing import Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from provision_point.analysis.conditions import SampleSpec
from provision_point.analysis.gas_cost import OpCostTable
from provision_point.errors import ConfigError
from provision_point.mechanisms.model import (
    SCHEME_TYPES, Player, ProjectSpec, SchemeParams, StrategyProfile, make_scheme,
)
from provision_point.simulation.simulator import SimConfig

logger = logging.getLogger(__name__)

SEED_ENV = "PROVISION_POINT_SEED"

SchemeName = Literal["ppm", "ppr", "pprg", "ppre", "pprp", "pps"]


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV} must be an integer, got '{raw}'")


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ProjectSection(_Section):
    provision_point: float = Field(default=100.0, gt=0)
    deadline: float = Field(default=10.0, gt=0)
    budget: float = Field(default=20.0, ge=0)


class PPRGParams(_Section):
    a: float = Field(default=1.0, gt=0)
    gamma: float = Field(default=2.0, gt=1)


class PPREParams(_Section):
    k2: float = Field(default=1.0, gt=0)


class PPRPParams(_Section):
    k3: float = Field(default=1.0, gt=0)


class PPSParams(_Section):
    liquidity: float = Field(default=10.0, gt=0)


class SchemesSection(_Section):
    pprg: PPRGParams = Field(default_factory=PPRGParams)
    ppre: PPREParams = Field(default_factory=PPREParams)
    pprp: PPRPParams = Field(default_factory=PPRPParams)
    pps: PPSParams = Field(default_factory=PPSParams)

    def params(self, name: str) -> dict:
        section = getattr(self, name, None)
        return section.model_dump() if section is not None else {}


class SampleSection(_Section):
    num_points: int = Field(default=1000, ge=1)
    x_range: tuple[float, float] = (1.0, 20.0)
    t_range: tuple[float, float] = (0.1, 9.0)
    seed: int = Field(default_factory=default_seed)
    fd_step: float = Field(default=1e-6, gt=0)
    num_players: int = Field(default=5, ge=1)
    max_contributors: int = Field(default=6, ge=2)
    time_shift: float = Field(default=0.1, gt=0, le=1)


class PlayerEntry(_Section):
    id: int
    valuation: float = Field(ge=0)
    arrival: float = Field(ge=0)
    amount: float = Field(default=0.0, ge=0)
    at: Optional[float] = None


class EquilibriumSection(_Section):
    scheme: SchemeName = "pprg"
    budget: Optional[float] = Field(default=None, gt=0)
    budget_fraction: Optional[float] = Field(default=None, gt=0)
    players: list[PlayerEntry] = Field(default_factory=list)
    n_players: int = Field(default=25, ge=1)
    expected_valuation_multiplier: float = Field(default=5.0, gt=0)
    arrival_window: tuple[float, float] = (0.0, 1.0)
    seed: int = Field(default_factory=default_seed)

    @model_validator(mode="after")
    def one_budget_source(self):
        if self.budget is not None and self.budget_fraction is not None:
            raise ValueError("Give either budget or budget_fraction, not both")
        return self


class SimulationSection(_Section):
    n_players: int = Field(default=25, ge=1)
    expected_valuation_multiplier: float = Field(default=5.0, gt=0)
    multipliers: Optional[list[float]] = None
    valuation_distribution: Literal["uniform", "exponential"] = "uniform"
    budget_fractions: list[float] = Field(default_factory=lambda: [0.1, 0.25, 0.5, 0.75, 1.0])
    runs_per_point: int = Field(default=100, ge=1)
    seed: int = Field(default_factory=default_seed)
    policy: Literal["equilibrium", "learner", "free_rider_mix"] = "equilibrium"
    free_rider_probability: float = Field(default=0.5, ge=0, le=1)
    mechanisms: list[SchemeName] = Field(default_factory=lambda: ["pprg", "ppre", "pprp", "pps"])
    arrival_window: tuple[float, float] = (0.0, 1.0)
    episodes: int = Field(default=5000, ge=0)
    alpha: float = Field(default=0.1, gt=0, le=1)
    alpha_decay: bool = True
    epsilon_start: float = Field(default=0.3, ge=0, le=1)
    epsilon_end: float = Field(default=0.01, ge=0, le=1)
    state_buckets: int = Field(default=5, ge=1)

    @field_validator("budget_fractions")
    @classmethod
    def fractions_in_range(cls, v):
        if not v or any(not 0 < f <= 1 for f in v):
            raise ValueError(f"budget_fractions must be non-empty and lie in (0, 1], got {v}")
        return v


class PlotSection(_Section):
    contribution: float = Field(default=5.0, gt=0)
    n_players: int = Field(default=10, ge=1)
    time_step: float = Field(default=1.0, gt=0)
    k: float = Field(default=1.0, gt=0)
    gamma: float = Field(default=2.0, gt=1)
    liquidity: float = Field(default=10.0, gt=0)
    budget: Optional[float] = Field(default=None, ge=0)


class GasSection(_Section):
    exp_operand: int = Field(default=1, ge=1)
    log_bytes: int = Field(default=0, ge=0)
    exp_mode: Literal["bytes", "log2"] = "bytes"


class RefundSection(_Section):
    scheme: SchemeName = "ppr"
    players: list[PlayerEntry] = Field(default_factory=list)


class RunConfig(_Section):
    project: ProjectSection = Field(default_factory=ProjectSection)
    schemes: SchemesSection = Field(default_factory=SchemesSection)
    sample: SampleSection = Field(default_factory=SampleSection)
    equilibrium: EquilibriumSection = Field(default_factory=EquilibriumSection)
    simulation: SimulationSection = Field(default_factory=SimulationSection)
    plot: PlotSection = Field(default_factory=PlotSection)
    gas: GasSection = Field(default_factory=GasSection)
    refund: RefundSection = Field(default_factory=RefundSection)

    def to_scheme(self, name: str) -> SchemeParams:
        key = name.strip().lower()
        if key not in SCHEME_TYPES:
            raise ConfigError(f"Unknown scheme '{name}'. Supported: {', '.join(SCHEME_TYPES)}")
        return make_scheme(key, **self.schemes.params(key))

    def to_project_spec(self, scheme_name: str = "ppm") -> ProjectSpec:
        return ProjectSpec(
            provision_point=self.project.provision_point,
            deadline=self.project.deadline,
            budget=self.project.budget,
            scheme=self.to_scheme(scheme_name),
        )

    def to_sample_spec(self) -> SampleSpec:
        s = self.sample
        return SampleSpec(
            num_points=s.num_points, x_range=tuple(s.x_range), t_range=tuple(s.t_range),
            seed=s.seed, fd_step=s.fd_step, num_players=s.num_players,
            max_contributors=s.max_contributors, time_shift=s.time_shift,
        )

    def to_sim_config(self) -> SimConfig:
        s = self.simulation
        return SimConfig(
            n_players=s.n_players,
            expected_valuation_multiplier=s.expected_valuation_multiplier,
            valuation_distribution=s.valuation_distribution,
            budget_fractions=tuple(s.budget_fractions),
            runs_per_point=s.runs_per_point,
            seed=s.seed,
            policy=s.policy,
            free_rider_probability=s.free_rider_probability,
            mechanisms=tuple(s.mechanisms),
            scheme_params={name: self.schemes.params(name) for name in s.mechanisms},
            provision_point=self.project.provision_point,
            deadline=self.project.deadline,
            arrival_window=tuple(s.arrival_window),
            episodes=s.episodes,
            alpha=s.alpha,
            alpha_decay=s.alpha_decay,
            epsilon_start=s.epsilon_start,
            epsilon_end=s.epsilon_end,
            state_buckets=s.state_buckets,
        )

    def to_cost_table(self) -> OpCostTable:
        return OpCostTable(exp_mode=self.gas.exp_mode)

    def to_refund_profile(self) -> StrategyProfile:
        entries = self.refund.players
        if not entries:
            raise ConfigError("The refund section lists no players")
        players = [Player(id=e.id, valuation=e.valuation, arrival=e.arrival) for e in entries]
        pledges = [(e.id, e.amount, e.arrival if e.at is None else e.at) for e in entries]
        return StrategyProfile.build(players, pledges)


def load_config(path: str | None) -> RunConfig:
    """
    Read and validate a run config; None gives the all-defaults config.

    Raises:
        FileNotFoundError / OSError: the file cannot be read.
        ConfigError: the document is not a mapping or fails validation.
    """
    if path is None:
        return RunConfig()

    logger.info("Loading config from %s", path)
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Invalid YAML in {path}: {e}")

    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping, got {type(data).__name__}")
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"{path}: {e}")
