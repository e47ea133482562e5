"""
Monte-Carlo engine for the sequential contribution game.

For every (mechanism, budget fraction) point the simulator draws fresh
populations, sizes the budget B from the realized total valuation, plays
the game with the configured policy and counts how many projects reach
H. Every run draws from its own stream (seed, point, phase, run), so the
result depends on the configuration only.

Usage:
    config = SimConfig(policy="equilibrium", budget_fractions=(0.25, 0.5, 1.0))
    result = train_and_evaluate(config)
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np
from scipy.optimize import brentq
from scipy.stats import spearmanr

from provision_point.analysis.equilibrium import max_budget
from provision_point.errors import InvalidParameter
from provision_point.mechanisms.model import (
    PPRE, PPRG, PPRP, PPS,
    Outcome, Player, ProjectSpec, SchemeParams, StrategyProfile, make_scheme,
)
from provision_point.mechanisms.refund_schemes import payoffs, refund_weight
from provision_point.mechanisms.securities import outstanding_securities, pps_refund
from provision_point.simulation.policies import (
    Decision, EquilibriumPolicy, FreeRiderMixPolicy, LearnerPolicy, Observation, Policy,
)
from provision_point.simulation.q_learner import QLearner, epsilon_at

logger = logging.getLogger(__name__)

POLICIES = ("equilibrium", "learner", "free_rider_mix")
VALUATION_DISTRIBUTIONS = ("uniform", "exponential")

# Liquidity search bracket, as multiples of H.
LIQUIDITY_BRACKET = (1e-6, 1e3)

TRAIN, EVALUATE = 0, 1


@dataclass(frozen=True)
class SimConfig:
    n_players: int = 25
    expected_valuation_multiplier: float = 5.0
    valuation_distribution: str = "uniform"
    budget_fractions: tuple[float, ...] = (0.1, 0.25, 0.5, 0.75, 1.0)
    runs_per_point: int = 100
    seed: int = 0
    policy: str = "equilibrium"
    free_rider_probability: float = 0.5
    mechanisms: tuple[str, ...] = ("pprg", "ppre", "pprp", "pps")
    scheme_params: dict = field(default_factory=dict)
    provision_point: float = 100.0
    deadline: float = 10.0
    arrival_window: tuple[float, float] = (0.0, 1.0)
    episodes: int = 5000
    alpha: float = 0.1
    alpha_decay: bool = True
    epsilon_start: float = 0.3
    epsilon_end: float = 0.01
    state_buckets: int = 5

    def __post_init__(self):
        if self.n_players < 1:
            raise InvalidParameter(f"n_players must be >= 1, got {self.n_players}")
        if not self.expected_valuation_multiplier > 0:
            raise InvalidParameter(
                f"expected_valuation_multiplier must be > 0, got {self.expected_valuation_multiplier}"
            )
        if self.valuation_distribution not in VALUATION_DISTRIBUTIONS:
            raise InvalidParameter(
                f"Unknown valuation_distribution '{self.valuation_distribution}'. "
                f"Supported: {', '.join(VALUATION_DISTRIBUTIONS)}"
            )
        if not self.budget_fractions or any(not 0 < f <= 1 for f in self.budget_fractions):
            raise InvalidParameter(f"budget_fractions must lie in (0, 1], got {self.budget_fractions}")
        if self.runs_per_point < 1:
            raise InvalidParameter(f"runs_per_point must be >= 1, got {self.runs_per_point}")
        if self.policy not in POLICIES:
            raise InvalidParameter(f"Unknown policy '{self.policy}'. Supported: {', '.join(POLICIES)}")
        if not 0 <= self.free_rider_probability <= 1:
            raise InvalidParameter(
                f"free_rider_probability must be in [0, 1], got {self.free_rider_probability}"
            )
        lo, hi = self.arrival_window
        if not 0 <= lo <= hi <= 1:
            raise InvalidParameter(f"arrival_window must satisfy 0 <= lo <= hi <= 1, got {self.arrival_window}")
        if not self.provision_point > 0 or not self.deadline > 0:
            raise InvalidParameter("provision_point and deadline must be > 0")
        if self.episodes < 0:
            raise InvalidParameter(f"episodes must be >= 0, got {self.episodes}")
        for name in ("epsilon_start", "epsilon_end"):
            if not 0 <= getattr(self, name) <= 1:
                raise InvalidParameter(f"{name} must be in [0, 1], got {getattr(self, name)}")
        for name in self.mechanisms:
            self.scheme(name)

    def scheme(self, name: str) -> SchemeParams:
        return make_scheme(name, **self.scheme_params.get(name, {}))

    @property
    def mean_valuation(self) -> float:
        return self.expected_valuation_multiplier * self.provision_point / self.n_players


@dataclass(frozen=True)
class AccuracyRow:
    mechanism: str
    budget_fraction: float
    accuracy: float
    runs: int
    seed: int


@dataclass(frozen=True)
class AccuracyResult:
    rows: tuple[AccuracyRow, ...]
    expected_valuation_multiplier: float = 5.0
    policy: str = "equilibrium"

    def series(self, mechanism: str) -> tuple[list[float], list[float]]:
        rows = [r for r in self.rows if r.mechanism == mechanism]
        return [r.budget_fraction for r in rows], [r.accuracy for r in rows]


# ──────────────────────────── Populations ────────────────────────────

def sample_players(config: SimConfig, rng: np.random.Generator) -> list[Player]:
    """
    n players in arrival order with i.i.d. valuations of mean m*H/n.

    Uniform valuations are drawn on [0, 2*mean]; arrivals are uniform on
    the configured share of [0, T].
    """
    mean = config.mean_valuation
    n = config.n_players
    if config.valuation_distribution == "exponential":
        valuations = rng.exponential(mean, size=n)
    else:
        valuations = rng.uniform(0.0, 2.0 * mean, size=n)
    lo, hi = config.arrival_window
    arrivals = rng.uniform(lo * config.deadline, hi * config.deadline, size=n)

    players = [Player(id=i + 1, valuation=float(v), arrival=float(y))
               for i, (v, y) in enumerate(zip(valuations, arrivals))]
    return sorted(players, key=lambda p: (p.arrival, p.id))


def calibrate_liquidity(H: float, n: int, budget: float) -> float:
    """
    Liquidity b whose total refund, when n players split H equally, equals budget.

    Returns the bracket end when budget is out of reach.
    """
    amounts = [H / n] * n

    def excess(b: float) -> float:
        states = outstanding_securities(amounts, b)
        return math.fsum(pps_refund(x, q, b) for x, q in zip(amounts, states)) - budget

    lo, hi = LIQUIDITY_BRACKET[0] * H, LIQUIDITY_BRACKET[1] * H
    if excess(hi) <= 0:
        logger.debug("PPS budget %.6g is out of reach; liquidity clamped to %.6g", budget, hi)
        return hi
    if excess(lo) >= 0:
        return lo
    return float(brentq(excess, lo, hi, xtol=1e-12 * H))


def run_budget(scheme: SchemeParams, H: float, theta_sum: float, fraction: float) -> float:
    """fraction of the largest budget that still guarantees provision; 0 when theta_sum <= H."""
    if theta_sum <= H:
        return 0.0
    if isinstance(scheme, (PPRG, PPRE, PPRP)):
        return fraction * max_budget(scheme, H, theta_sum).max_budget
    return fraction * (theta_sum - H)


def run_spec(config: SimConfig, scheme: SchemeParams, players: list[Player], fraction: float) -> ProjectSpec | None:
    """The project terms of one run, or None when no positive budget exists."""
    H = config.provision_point
    budget = run_budget(scheme, H, math.fsum(p.valuation for p in players), fraction)
    if budget <= 0:
        return None
    if isinstance(scheme, PPS):
        scheme = replace(scheme, liquidity=calibrate_liquidity(H, config.n_players, budget))
    return ProjectSpec(provision_point=H, deadline=config.deadline, budget=budget, scheme=scheme)


# ──────────────────────────── Game ────────────────────────────

def _market_state(amounts: list[float], b: float) -> float:
    # q after all amounts: the state a further zero payment would see
    return outstanding_securities(amounts + [0.0], b)[-1]


def play(
    spec: ProjectSpec, players: Iterable[Player], policy: Policy, rng: np.random.Generator,
) -> tuple[StrategyProfile, dict[int, Decision]]:
    """
    Let each player decide in arrival order.

    A player sees the contributions made up to its arrival time; pledges
    delayed past that time are not visible yet.
    """
    ordered = sorted(players, key=lambda p: (p.arrival, p.id))
    H = spec.provision_point
    pledges: list[tuple[int, float, float]] = []
    decisions: dict[int, Decision] = {}

    for seq, p in enumerate(ordered, start=1):
        visible = sorted((at, amount) for _, amount, at in pledges if at <= p.arrival)
        raised = math.fsum(amount for _, amount in visible)
        market = 0.0
        if isinstance(spec.scheme, PPS):
            market = _market_state([amount for _, amount in visible], spec.scheme.liquidity)
        obs = Observation(
            spec=spec, remaining=max(H - raised, 0.0), arrival=p.arrival,
            theta=p.valuation, seq=seq, market_state=market,
        )
        decision = policy.decide(obs, rng)
        amount = min(max(decision.amount, 0.0), H)
        at = min(max(decision.at, p.arrival), spec.deadline)
        pledges.append((p.id, amount, at))
        decisions[p.id] = decision

    return StrategyProfile.build(ordered, pledges), decisions


def run_game(spec: ProjectSpec, players: Iterable[Player], policy: Policy, rng: np.random.Generator) -> Outcome:
    """Play one game and settle it at the deadline."""
    profile, _ = play(spec, players, policy, rng)
    return payoffs(spec, profile)


# ──────────────────────────── Sweeps ────────────────────────────

def _stream(config: SimConfig, point: int, phase: int, run: int) -> np.random.Generator:
    return np.random.default_rng([config.seed, point, phase, run])


def _fixed_policy(config: SimConfig) -> Policy:
    if config.policy == "free_rider_mix":
        return FreeRiderMixPolicy(config.free_rider_probability)
    return EquilibriumPolicy()


def learning_reward(outcome: Outcome, player: Player) -> float:
    """
    Payoff over what free riding would have earned at the same outcome.

    That is -x_i when the project is provisioned and the refund R_i when it
    is not, so theta_i drops out.
    """
    public_good = player.valuation if outcome.provisioned else 0.0
    return outcome.payoff_of(player.id) - public_good


def _train(config: SimConfig, scheme: SchemeParams, fraction: float, point: int) -> QLearner:
    learner = QLearner(config.state_buckets, config.alpha, config.epsilon_start, config.alpha_decay)
    for episode in range(config.episodes):
        rng = _stream(config, point, TRAIN, episode)
        players = sample_players(config, rng)
        spec = run_spec(config, scheme, players, fraction)
        if spec is None:
            continue
        eps = epsilon_at(episode, config.episodes, config.epsilon_start, config.epsilon_end)
        profile, decisions = play(spec, players, LearnerPolicy(learner, epsilon=eps), rng)
        outcome = payoffs(spec, profile)
        for p in players:
            d = decisions[p.id]
            learner.update(d.state, d.action, learning_reward(outcome, p))
    return learner


def _weights_exceed_k(scheme: SchemeParams, players: list[Player]) -> bool:
    if not isinstance(scheme, PPRE):
        return False
    return math.fsum(refund_weight(scheme, 1, p.arrival) for p in players) > scheme.k


def _liquidity_clamped(spec: ProjectSpec) -> bool:
    if not isinstance(spec.scheme, PPS):
        return False
    return spec.scheme.liquidity >= LIQUIDITY_BRACKET[1] * spec.provision_point


def evaluate_point(config: SimConfig, scheme: SchemeParams, fraction: float, point: int,
                   policy: Policy) -> AccuracyRow:
    provisioned = 0
    overweight = 0
    clamped = 0
    for run in range(config.runs_per_point):
        rng = _stream(config, point, EVALUATE, run)
        players = sample_players(config, rng)
        spec = run_spec(config, scheme, players, fraction)
        if spec is None:
            continue
        overweight += _weights_exceed_k(scheme, players)
        clamped += _liquidity_clamped(spec)
        provisioned += run_game(spec, players, policy, rng).provisioned

    if clamped:
        logger.warning(
            "pps at B fraction %s: budget out of reach in %d/%d runs; liquidity clamped to %.6g*H",
            fraction, clamped, config.runs_per_point, LIQUIDITY_BRACKET[1],
        )
    if overweight:
        logger.warning(
            "%s at B fraction %s: time weights exceed K in %d/%d runs; provision is not guaranteed",
            scheme.name, fraction, overweight, config.runs_per_point,
        )
    return AccuracyRow(
        mechanism=scheme.name,
        budget_fraction=fraction,
        accuracy=provisioned / config.runs_per_point,
        runs=config.runs_per_point,
        seed=config.seed,
    )


def train_and_evaluate(config: SimConfig) -> AccuracyResult:
    """
    Provision accuracy for every (mechanism, budget fraction) point.

    With policy "learner" a fresh QLearner is trained for each point over
    config.episodes games, rewarded with learning_reward, and then
    evaluated greedily.
    """
    rows = []
    fractions = config.budget_fractions
    for m, name in enumerate(config.mechanisms):
        scheme = config.scheme(name)
        for f, fraction in enumerate(fractions):
            point = m * len(fractions) + f
            if config.policy == "learner":
                policy = LearnerPolicy(_train(config, scheme, fraction, point), epsilon=0.0)
            else:
                policy = _fixed_policy(config)
            row = evaluate_point(config, scheme, fraction, point, policy)
            logger.info("%s B=%s*max: accuracy %.3f over %d runs", name, fraction, row.accuracy, row.runs)
            rows.append(row)
    return AccuracyResult(
        rows=tuple(rows),
        expected_valuation_multiplier=config.expected_valuation_multiplier,
        policy=config.policy,
    )


def spearman_trend(result: AccuracyResult, mechanism: str) -> float:
    """Spearman rank correlation between budget fraction and accuracy; 0 for a flat series."""
    fractions, accuracies = result.series(mechanism)
    if len(set(fractions)) < 2 or len(set(accuracies)) < 2:
        return 0.0
    rho, _ = spearmanr(fractions, accuracies)
    return 0.0 if np.isnan(rho) else float(rho)


def sweep_multipliers(config: SimConfig, multipliers: Iterable[float]) -> list[AccuracyResult]:
    return [train_and_evaluate(replace(config, expected_valuation_multiplier=m)) for m in multipliers]
