"""
Budget bounds and sub-game perfect equilibrium contributions.

In equilibrium every player contributes as soon as it arrives. A player
with valuation theta contributes up to the amount where the provisioned
payoff theta - x equals the refund it would get at C = H, and never more
than the amount still missing, h.

Usage:
    bound = max_budget(PPRG(a=1, gamma=2), H=100, theta_sum=200)
    profile = equilibrium_profile(PPRG(a=1, gamma=2), players, H=100, B=bound.max_budget / 2)
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from provision_point.errors import InvalidParameter, NoValidBudget, UnsupportedScheme
from provision_point.mechanisms.model import (
    PPR, PPRE, PPRG, PPRP,
    Player, SchemeParams, StrategyProfile,
)
from provision_point.mechanisms.refund_schemes import refund_weight

logger = logging.getLogger(__name__)


class Binding(str, Enum):
    INTERIOR = "interior"
    CAPPED_BY_REMAINING = "capped_by_remaining"
    ZERO_REMAINING = "zero_remaining"


@dataclass(frozen=True)
class EquilibriumCap:
    player_id: int
    seq: int
    arrival: float
    theta: float
    formula_cap: float
    cap: float
    binding: Binding


@dataclass(frozen=True)
class BudgetBound:
    scheme: str
    k: float
    max_budget: float
    simplified: float


def _weighted(scheme: SchemeParams) -> None:
    if not isinstance(scheme, (PPRG, PPRE, PPRP)):
        raise UnsupportedScheme(
            f"Budget bounds exist for pprg, ppre and pprp only, got '{scheme.name}'"
        )


def max_budget(scheme: SchemeParams, H: float, theta_sum: float) -> BudgetBound:
    """
    Largest budget B for which the equilibrium still provisions the project.

    ((H+K)*theta_sum - H^2 - H*K)/(H+K), which reduces to theta_sum - H.
    """
    _weighted(scheme)
    if not H > 0:
        raise InvalidParameter(f"Provision point must be > 0, got {H}")
    if not theta_sum >= 0:
        raise InvalidParameter(f"Total valuation must be >= 0, got {theta_sum}")

    k = scheme.k
    bound = ((H + k) * theta_sum - H * H - H * k) / (H + k)
    if not bound > 0:
        raise NoValidBudget(
            f"No valid budget: total valuation {theta_sum} does not exceed H={H}"
        )
    return BudgetBound(scheme=scheme.name, k=k, max_budget=bound, simplified=theta_sum - H)


def equilibrium_cap(scheme: SchemeParams, theta: float, seq_or_arrival: float, H: float, B: float) -> float:
    """
    Contribution at which theta - x equals the refund at C = H.

    seq_or_arrival is the arrival time y_i for PPRE and the 1-based
    position i for PPRG and PPRP; PPR ignores it. Negative values clamp to 0.
    """
    if not B > 0:
        raise InvalidParameter(f"Budget must be > 0, got {B}")
    if not theta >= 0:
        raise InvalidParameter(f"Valuation must be >= 0, got {theta}")

    if isinstance(scheme, PPR):
        cap = theta * H / (H + B)
    elif isinstance(scheme, (PPRG, PPRE, PPRP)):
        if isinstance(scheme, PPRE):
            g = refund_weight(scheme, seq=1, at=seq_or_arrival)
        else:
            g = refund_weight(scheme, seq=int(seq_or_arrival), at=0.0)
        k = scheme.k
        cap = (theta * (H + k) - B * g) / (H + k + B)
    else:
        raise UnsupportedScheme(f"No equilibrium cap for scheme '{scheme.name}'")
    return max(cap, 0.0)


def rationality_slack(scheme: SchemeParams, theta: float, x: float, seq_or_arrival: float,
                      H: float, B: float) -> float:
    """theta - x minus the refund x would earn at C = H; zero at the cap, >= 0 below it."""
    if isinstance(scheme, PPR):
        refund = x / H * B
    else:
        _weighted(scheme)
        if isinstance(scheme, PPRE):
            g = refund_weight(scheme, seq=1, at=seq_or_arrival)
        else:
            g = refund_weight(scheme, seq=int(seq_or_arrival), at=0.0)
        refund = (x + g) / (H + scheme.k) * B
    return theta - x - refund


def _arrival_order(players: Iterable[Player]) -> list[Player]:
    return sorted(players, key=lambda p: (p.arrival, p.id))


def gp_tail(a: float, gamma: float, n: int) -> float:
    """Sum of the GP terms a*(1/gamma)^(i-1) beyond the first n."""
    return a * (1.0 / gamma) ** n * gamma / (gamma - 1.0)


def refund_weight_sum(scheme: SchemeParams, players: Iterable[Player]) -> float:
    """Sum of the weight terms g_i the players would carry contributing at arrival."""
    _weighted(scheme)
    ordered = _arrival_order(players)
    total = math.fsum(refund_weight(scheme, i, p.arrival) for i, p in enumerate(ordered, start=1))
    if total > scheme.k:
        logger.warning(
            "%s weights sum to %.6g > K=%.6g; provision at equilibrium is not guaranteed",
            scheme.name, total, scheme.k,
        )
    return total


def equilibrium_caps(scheme: SchemeParams, players: Iterable[Player], H: float, B: float) -> list[EquilibriumCap]:
    """
    Walk the players in arrival order (ties by id) and fix each contribution.

    Each player gives min(cap, h) where h is what is still missing from H;
    once h reaches 0 everybody after gives nothing.
    """
    ordered = _arrival_order(players)
    if not ordered:
        return []

    theta_sum = math.fsum(p.valuation for p in ordered)
    if isinstance(scheme, (PPRG, PPRE, PPRP)):
        try:
            bound = max_budget(scheme, H, theta_sum)
            if B > bound.max_budget:
                logger.warning(
                    "Budget B=%s exceeds the equilibrium bound %.6g for %s; C = H is not guaranteed",
                    B, bound.max_budget, scheme.name,
                )
        except NoValidBudget:
            logger.warning("Total valuation %.6g does not exceed H=%s; the project cannot be provisioned",
                           theta_sum, H)
        refund_weight_sum(scheme, ordered)

    caps = []
    raised = []
    remaining = H
    for i, p in enumerate(ordered, start=1):
        position = p.arrival if isinstance(scheme, PPRE) else i
        formula = equilibrium_cap(scheme, p.valuation, position, H, B)

        if remaining <= 0:
            amount, binding = 0.0, Binding.ZERO_REMAINING
        elif formula >= remaining:
            amount, binding = remaining, Binding.CAPPED_BY_REMAINING
        else:
            amount, binding = formula, Binding.INTERIOR

        raised.append(amount)
        remaining = 0.0 if binding is not Binding.INTERIOR else max(H - math.fsum(raised), 0.0)
        caps.append(EquilibriumCap(
            player_id=p.id, seq=i, arrival=p.arrival, theta=p.valuation,
            formula_cap=formula, cap=amount, binding=binding,
        ))
        logger.debug("Player %s (seq %d): formula cap %.6g, contributes %.6g (%s)",
                     p.id, i, formula, amount, binding.value)
    return caps


def equilibrium_profile(scheme: SchemeParams, players: Iterable[Player], H: float, B: float) -> StrategyProfile:
    """Equilibrium strategy profile; every player contributes at its arrival time."""
    players = list(players)
    caps = equilibrium_caps(scheme, players, H, B)
    by_id = {p.id: p for p in players}
    return StrategyProfile.build(players, [(c.player_id, c.cap, by_id[c.player_id].arrival) for c in caps])
