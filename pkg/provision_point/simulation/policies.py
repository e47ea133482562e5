"""
Player policies for the sequential game.

A policy sees only what a real backer would: the project terms, the
amount still missing when it arrives, the current market state (PPS),
the time, its position in the arrival order and its own valuation. It
returns how much to contribute and when.
"""

import logging
from dataclasses import dataclass
from typing import Protocol

import numpy as np
from scipy.optimize import brentq

from provision_point.analysis.equilibrium import equilibrium_cap
from provision_point.errors import InvalidParameter
from provision_point.mechanisms.model import PPM, PPRE, PPS, ProjectSpec
from provision_point.mechanisms.securities import pps_refund
from provision_point.simulation.q_learner import ACTIONS, QLearner

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Observation:
    spec: ProjectSpec
    remaining: float
    arrival: float
    theta: float
    seq: int
    market_state: float = 0.0


@dataclass(frozen=True)
class Decision:
    amount: float
    at: float
    state: tuple[int, int, int] | None = None
    action: int | None = None


class Policy(Protocol):
    def decide(self, obs: Observation, rng: np.random.Generator) -> Decision: ...


def pps_indifference_amount(theta: float, q: float, b: float) -> float:
    """x with theta - x = pps_refund(x, q, b), found by Brent's method on [0, theta]."""
    if theta <= 0:
        return 0.0
    return float(brentq(lambda x: theta - x - pps_refund(x, q, b), 0.0, theta, xtol=1e-12))


class EquilibriumPolicy:
    """Contribute min(cap, h) on arrival."""

    def cap(self, obs: Observation) -> float:
        spec = obs.spec
        scheme = spec.scheme
        if isinstance(scheme, PPM) or spec.budget <= 0:
            return obs.theta
        if isinstance(scheme, PPS):
            return pps_indifference_amount(obs.theta, obs.market_state, scheme.liquidity)
        position = obs.arrival if isinstance(scheme, PPRE) else obs.seq
        return equilibrium_cap(scheme, obs.theta, position, spec.provision_point, spec.budget)

    def decide(self, obs: Observation, rng: np.random.Generator) -> Decision:
        if obs.remaining <= 0:
            return Decision(amount=0.0, at=obs.arrival)
        return Decision(amount=min(self.cap(obs), obs.remaining), at=obs.arrival)


class FreeRiderMixPolicy:
    """Free-ride with probability p, otherwise play the equilibrium."""

    def __init__(self, probability: float, fallback: Policy | None = None):
        if not 0 <= probability <= 1:
            raise InvalidParameter(f"Free-rider probability must be in [0, 1], got {probability}")
        self.probability = probability
        self.fallback = fallback or EquilibriumPolicy()

    def decide(self, obs: Observation, rng: np.random.Generator) -> Decision:
        if rng.random() < self.probability:
            return Decision(amount=0.0, at=obs.arrival)
        return self.fallback.decide(obs, rng)


class LearnerPolicy:
    """
    Acts through a shared QLearner.

    epsilon=None uses the learner's own exploration rate; pass 0 for
    greedy evaluation.
    """

    def __init__(self, learner: QLearner, epsilon: float | None = None):
        self.learner = learner
        self.epsilon = epsilon

    def decide(self, obs: Observation, rng: np.random.Generator) -> Decision:
        spec = obs.spec
        coverage = obs.theta / obs.remaining if obs.remaining > 0 else 1.0
        state = self.learner.state_of(
            obs.remaining / spec.provision_point, obs.arrival / spec.deadline, coverage,
        )
        action = self.learner.choose(state, rng, self.epsilon)
        share, delay = ACTIONS[action]
        amount = share * min(obs.theta, obs.remaining)
        at = obs.arrival + delay * (spec.deadline - obs.arrival)
        return Decision(amount=amount, at=at, state=state, action=action)
