"""
Game model for provision point crowdfunding.

A project maker announces a provision point H, a deadline T and a refund
bonus budget B together with a refund scheme. Players arrive over time,
observe their valuation and contribute once. The types here are plain
immutable values; all behaviour lives in refund_schemes.py.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Union

from provision_point.errors import InvalidParameter, InvalidProfile, InvalidSeq


# ──────────────────────────── Refund schemes ────────────────────────────

@dataclass(frozen=True)
class PPM:
    """Plain provision point mechanism, no refund bonus."""

    name: str = field(default="ppm", init=False)


@dataclass(frozen=True)
class PPR:
    """Refund bonus proportional to contribution."""

    name: str = field(default="ppr", init=False)


@dataclass(frozen=True)
class PPRG:
    """Refund bonus with a geometric progression term a*(1/gamma)^(i-1)."""

    a: float = 1.0
    gamma: float = 2.0
    name: str = field(default="pprg", init=False)

    def __post_init__(self):
        if not self.a > 0:
            raise InvalidParameter(f"PPRG requires a > 0, got a={self.a}")
        if not self.gamma > 1:
            raise InvalidParameter(f"PPRG requires gamma > 1, got gamma={self.gamma}")

    @property
    def k(self) -> float:
        """K1 = a*gamma/(gamma-1), the sum of the infinite GP."""
        return self.a * self.gamma / (self.gamma - 1.0)


@dataclass(frozen=True)
class PPRE:
    """Refund bonus with an exponential time-decay term K2*e^(-t_i)."""

    k2: float = 1.0
    name: str = field(default="ppre", init=False)

    def __post_init__(self):
        if not self.k2 > 0:
            raise InvalidParameter(f"PPRE requires k2 > 0, got k2={self.k2}")

    @property
    def k(self) -> float:
        return self.k2


@dataclass(frozen=True)
class PPRP:
    """Refund bonus with a polynomial term K3/(i(i+1))."""

    k3: float = 1.0
    name: str = field(default="pprp", init=False)

    def __post_init__(self):
        if not self.k3 > 0:
            raise InvalidParameter(f"PPRP requires k3 > 0, got k3={self.k3}")

    @property
    def k(self) -> float:
        return self.k3


@dataclass(frozen=True)
class PPS:
    """Refund through securities of a cost-function market with liquidity b."""

    liquidity: float = 1.0
    name: str = field(default="pps", init=False)

    def __post_init__(self):
        if not self.liquidity > 0:
            raise InvalidParameter(f"PPS requires liquidity b > 0, got b={self.liquidity}")


SchemeParams = Union[PPM, PPR, PPRG, PPRE, PPRP, PPS]

SCHEME_TYPES = {
    "ppm": PPM,
    "ppr": PPR,
    "pprg": PPRG,
    "ppre": PPRE,
    "pprp": PPRP,
    "pps": PPS,
}


def make_scheme(name: str, **params) -> SchemeParams:
    """Build scheme parameters from a lowercase mechanism name."""
    key = name.strip().lower()
    if key not in SCHEME_TYPES:
        raise InvalidParameter(
            f"Unknown scheme '{name}'. Supported: {', '.join(SCHEME_TYPES)}"
        )
    return SCHEME_TYPES[key](**params)


# ──────────────────────────── Project and players ────────────────────────────

@dataclass(frozen=True)
class ProjectSpec:
    """Provision point H, deadline T, bonus budget B and the refund scheme."""

    provision_point: float
    deadline: float
    budget: float
    scheme: SchemeParams = field(default_factory=PPM)

    def __post_init__(self):
        if not self.provision_point > 0:
            raise InvalidParameter(f"Provision point must be > 0, got {self.provision_point}")
        if not self.deadline > 0:
            raise InvalidParameter(f"Deadline must be > 0, got {self.deadline}")
        if not self.budget >= 0:
            raise InvalidParameter(f"Budget must be >= 0, got {self.budget}")

    def is_provisioned(self, total: float) -> bool:
        """C >= H, with a relative tolerance of 1e-9 on H."""
        return total >= self.provision_point - 1e-9 * self.provision_point


@dataclass(frozen=True)
class Player:
    id: int
    valuation: float
    arrival: float

    def __post_init__(self):
        if not self.valuation >= 0:
            raise InvalidParameter(f"Player {self.id}: valuation must be >= 0, got {self.valuation}")
        if not self.arrival >= 0:
            raise InvalidParameter(f"Player {self.id}: arrival must be >= 0, got {self.arrival}")


@dataclass(frozen=True)
class Contribution:
    player_id: int
    amount: float
    at: float
    seq: int


@dataclass(frozen=True)
class StrategyProfile:
    """
    Ordered single-shot contributions of a population of players.

    Build profiles with StrategyProfile.build(), which assigns the 1-based
    seq in order of contribution time (stable for equal times).
    """

    contributions: tuple[Contribution, ...]
    players: tuple[Player, ...]

    @classmethod
    def build(
        cls,
        players: Iterable[Player],
        pledges: Iterable[tuple[int, float, float]],
    ) -> "StrategyProfile":
        """
        Args:
            players: the population.
            pledges: (player_id, amount, time) tuples in insertion order.
        """
        players = tuple(players)
        by_id = {p.id: p for p in players}
        if len(by_id) != len(players):
            raise InvalidProfile("Player ids must be unique")

        seen = set()
        entries = []
        for player_id, amount, at in pledges:
            if player_id not in by_id:
                raise InvalidProfile(f"Contribution from unknown player {player_id}")
            if player_id in seen:
                raise InvalidProfile(f"Player {player_id} contributes more than once")
            seen.add(player_id)
            if not amount >= 0:
                raise InvalidProfile(f"Player {player_id}: contribution must be >= 0, got {amount}")
            if at < by_id[player_id].arrival:
                raise InvalidProfile(
                    f"Player {player_id} contributes at t={at} before arriving at y={by_id[player_id].arrival}"
                )
            entries.append((float(at), player_id, float(amount)))

        # sorted() is stable: equal times keep insertion order
        ordered = sorted(entries, key=lambda e: e[0])
        contributions = tuple(
            Contribution(player_id=pid, amount=amount, at=at, seq=i)
            for i, (at, pid, amount) in enumerate(ordered, start=1)
        )
        return cls(contributions=contributions, players=players)

    @property
    def total(self) -> float:
        """C, the sum of all contributions."""
        return math.fsum(c.amount for c in self.contributions)

    @property
    def theta_sum(self) -> float:
        """The total valuation of the population."""
        return math.fsum(p.valuation for p in self.players)

    def __len__(self) -> int:
        return len(self.contributions)

    def contribution(self, seq: int) -> Contribution:
        if not 1 <= seq <= len(self.contributions):
            raise InvalidSeq(f"seq {seq} out of range 1..{len(self.contributions)}")
        return self.contributions[seq - 1]

    def contribution_of(self, player_id: int) -> Contribution | None:
        for c in self.contributions:
            if c.player_id == player_id:
                return c
        return None

    def player(self, player_id: int) -> Player:
        for p in self.players:
            if p.id == player_id:
                return p
        raise InvalidProfile(f"Unknown player {player_id}")

    def validate(self, spec: ProjectSpec) -> None:
        """Check contributions against the project's H and T."""
        for c in self.contributions:
            if c.at > spec.deadline:
                raise InvalidProfile(
                    f"Player {c.player_id} contributes at t={c.at} after the deadline T={spec.deadline}"
                )
            if c.amount > spec.provision_point:
                raise InvalidProfile(
                    f"Player {c.player_id} contributes {c.amount} > H={spec.provision_point}"
                )
        for p in self.players:
            if p.arrival > spec.deadline:
                raise InvalidProfile(f"Player {p.id} arrives at y={p.arrival} after T={spec.deadline}")

    def with_pledge(self, player_id: int, amount: float | None = None, at: float | None = None,
                    move_last: bool = False) -> "StrategyProfile":
        """
        Return a copy where one player's contribution amount and/or time changes.

        With move_last=True the changed pledge is re-inserted after all
        others, so it sorts behind any contribution made at the same time.
        """
        pledges = []
        changed = None
        for c in self.contributions:
            if c.player_id == player_id:
                changed = (
                    player_id,
                    c.amount if amount is None else amount,
                    c.at if at is None else at,
                )
                if not move_last:
                    pledges.append(changed)
            else:
                pledges.append((c.player_id, c.amount, c.at))
        if changed is None:
            raise InvalidProfile(f"Player {player_id} has no contribution to change")
        if move_last:
            pledges.append(changed)
        return StrategyProfile.build(self.players, pledges)


@dataclass(frozen=True)
class Outcome:
    """
    Payoffs and refunds at the deadline.

    refunds and payoffs are aligned with player_ids (the profile's player order).
    """

    provisioned: bool
    total: float
    player_ids: tuple[int, ...]
    refunds: tuple[float, ...]
    payoffs: tuple[float, ...]

    def payoff_of(self, player_id: int) -> float:
        return self.payoffs[self.player_ids.index(player_id)]

    def refund_of(self, player_id: int) -> float:
        return self.refunds[self.player_ids.index(player_id)]
