"""
Tabular epsilon-greedy learner shared by all simulated players.

A player's state is its bucketed (h/H, y/T, min(theta/h, 1)); an action
picks a share of min(theta, h) to contribute and a share of the window
[y, T] to wait. Each player acts once per game, so the update is the
one-step rule

    Q(s, a) <- (1 - alpha_n) * Q(s, a) + alpha_n * reward

With alpha_decay, alpha_n = alpha / (1 + alpha * (n - 1)) on the n-th visit
of (s, a): Q becomes a running mean of the rewards behind a prior of 0.
Otherwise alpha_n = alpha.
"""

import logging
from itertools import product

import numpy as np

from provision_point.errors import InvalidParameter

logger = logging.getLogger(__name__)

CONTRIBUTION_SHARES = (0.0, 0.25, 0.5, 0.75, 1.0)
DELAY_SHARES = (0.0, 0.5, 1.0)

# Action index -> (contribution share, delay share); free-riding actions come first
ACTIONS = tuple(product(CONTRIBUTION_SHARES, DELAY_SHARES))

State = tuple[int, int, int]


def epsilon_at(episode: int, episodes: int, start: float, end: float) -> float:
    """Linear annealing from start (first episode) to end (last episode)."""
    if episodes <= 1:
        return end
    return start + (end - start) * episode / (episodes - 1)


class QLearner:
    """
    Usage:
        learner = QLearner(state_buckets=5, alpha=0.1, epsilon=0.3)
        state = learner.state_of(remaining / H, arrival / T, theta / remaining)
        action = learner.choose(state, rng)
        learner.update(state, action, reward)
    """

    def __init__(self, state_buckets: int = 5, alpha: float = 0.1, epsilon: float = 0.3,
                 alpha_decay: bool = True):
        if state_buckets < 1:
            raise InvalidParameter(f"state_buckets must be >= 1, got {state_buckets}")
        if not 0 < alpha <= 1:
            raise InvalidParameter(f"alpha must be in (0, 1], got {alpha}")
        if not 0 <= epsilon <= 1:
            raise InvalidParameter(f"epsilon must be in [0, 1], got {epsilon}")
        self.state_buckets = state_buckets
        self.alpha = alpha
        self.epsilon = epsilon
        self.alpha_decay = alpha_decay
        shape = (state_buckets, state_buckets, state_buckets, len(ACTIONS))
        self.q_table = np.zeros(shape)
        self.visits = np.zeros(shape, dtype=np.int64)

    def _bucket(self, share: float) -> int:
        n = self.state_buckets
        return min(int(np.clip(share, 0.0, 1.0) * n), n - 1)

    def state_of(self, remaining_share: float, time_share: float, coverage: float) -> State:
        """coverage is theta/h; anything at or above 1 (including h = 0) is the top bucket."""
        return self._bucket(remaining_share), self._bucket(time_share), self._bucket(coverage)

    def greedy(self, state: State) -> int:
        # ties go to the lowest index, i.e. to free riding
        return int(np.argmax(self.q_table[state]))

    def choose(self, state: State, rng: np.random.Generator, epsilon: float | None = None) -> int:
        eps = self.epsilon if epsilon is None else epsilon
        if eps > 0 and rng.random() < eps:
            return int(rng.integers(len(ACTIONS)))
        return self.greedy(state)

    def rate(self, visits: int) -> float:
        if not self.alpha_decay:
            return self.alpha
        return self.alpha / (1.0 + self.alpha * (visits - 1))

    def update(self, state: State, action: int, reward: float) -> None:
        if not np.isfinite(reward):
            raise InvalidParameter(f"Reward must be finite, got {reward}")
        index = (*state, action)
        self.visits[index] += 1
        rate = self.rate(int(self.visits[index]))
        self.q_table[index] = (1 - rate) * self.q_table[index] + rate * reward
