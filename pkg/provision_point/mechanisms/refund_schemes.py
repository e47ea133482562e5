"""
Refund bonus schemes and the provision point payoff.

    pi_i = I[C >= H] * (theta_i - x_i) + I[C < H] * R_i(sigma)

Usage:
    spec = ProjectSpec(provision_point=100, deadline=10, budget=20, scheme=PPRG(a=1, gamma=2))
    outcome = payoffs(spec, profile)
"""

import logging
import math

from provision_point.errors import EmptyProfile, InvalidParameter, InvalidSeq, TimeOutOfRange
from provision_point.mechanisms.model import (
    PPM, PPR, PPRE, PPRG, PPRP, PPS,
    Outcome, ProjectSpec, SchemeParams, StrategyProfile,
)
from provision_point.mechanisms.securities import outstanding_securities, pps_refund

logger = logging.getLogger(__name__)


def refund_weight(scheme: SchemeParams, seq: int, at: float) -> float:
    """
    The early-contribution term g_i added to x_i in the weighted schemes.

    PPRG: a*(1/gamma)^(i-1)   PPRE: K2*e^(-t_i)   PPRP: K3/(i(i+1))
    """
    if isinstance(scheme, PPRG):
        return scheme.a * (1.0 / scheme.gamma) ** (seq - 1)
    if isinstance(scheme, PPRE):
        return scheme.k2 * math.exp(-at)
    if isinstance(scheme, PPRP):
        return scheme.k3 / (seq * (seq + 1))
    return 0.0


def scheme_refund(
    scheme: SchemeParams,
    x: float,
    total: float,
    budget: float,
    seq: int = 1,
    at: float = 0.0,
    q: float = 0.0,
) -> float:
    """
    Evaluate R_i from the scalar inputs each scheme depends on.

    PPR reads (x, C); PPRG and PPRP read (x, seq, C); PPRE reads (x, t, C);
    PPS reads (x, q). Other arguments are ignored.
    """
    if isinstance(scheme, PPM):
        return 0.0
    if isinstance(scheme, PPR):
        if total <= 0:
            raise EmptyProfile("PPR refund is undefined when the total contribution C is 0")
        return x / total * budget
    if isinstance(scheme, (PPRG, PPRE, PPRP)):
        return (x + refund_weight(scheme, seq, at)) / (total + scheme.k) * budget
    if isinstance(scheme, PPS):
        return pps_refund(x, q, scheme.liquidity)
    raise InvalidParameter(f"Unknown scheme {scheme!r}")


def refund_share(scheme: SchemeParams, profile: StrategyProfile, budget: float, seq: int) -> float:
    """R_i for the contribution at position seq (1-based) of the profile."""
    if not budget >= 0:
        raise InvalidParameter(f"Budget must be >= 0, got {budget}")
    if not 1 <= seq <= len(profile):
        raise InvalidSeq(f"seq {seq} out of range 1..{len(profile)}")

    c = profile.contribution(seq)
    q = 0.0
    if isinstance(scheme, PPS):
        amounts = [k.amount for k in profile.contributions[:seq]]
        q = outstanding_securities(amounts, scheme.liquidity)[-1]
    return scheme_refund(scheme, c.amount, profile.total, budget, seq=seq, at=c.at, q=q)


def refund_vector(scheme: SchemeParams, profile: StrategyProfile, budget: float) -> list[float]:
    """R_i for every contribution in seq order, in a single pass."""
    if not budget >= 0:
        raise InvalidParameter(f"Budget must be >= 0, got {budget}")
    total = profile.total
    amounts = [c.amount for c in profile.contributions]
    states = (
        outstanding_securities(amounts, scheme.liquidity)
        if isinstance(scheme, PPS) else [0.0] * len(amounts)
    )
    return [
        scheme_refund(scheme, c.amount, total, budget, seq=c.seq, at=c.at, q=q)
        for c, q in zip(profile.contributions, states)
    ]


def time_weight_sum(profile: StrategyProfile) -> float:
    """Sum of e^(-t_i) over positive contributions; PPRE stays within B iff this is <= 1."""
    return math.fsum(math.exp(-c.at) for c in profile.contributions if c.amount > 0)


def payoffs(spec: ProjectSpec, profile: StrategyProfile) -> Outcome:
    """
    Evaluate the deadline payoff pi_i for every player of the profile.

    Players without a positive contribution are free riders: they get
    theta_i if the project is provisioned and nothing otherwise.
    """
    profile.validate(spec)
    total = profile.total
    provisioned = spec.is_provisioned(total)

    contributor_refunds = {}
    if not provisioned and any(c.amount > 0 for c in profile.contributions):
        if isinstance(spec.scheme, PPRE):
            weight_sum = time_weight_sum(profile)
            if weight_sum > 1.0:
                logger.debug(
                    "PPRE time weights sum to %.6g > 1; refunds may exceed the budget B=%s",
                    weight_sum, spec.budget,
                )
        vector = refund_vector(spec.scheme, profile, spec.budget)
        contributor_refunds = {
            c.player_id: r for c, r in zip(profile.contributions, vector) if c.amount > 0
        }

    refunds = []
    values = []
    for player in profile.players:
        c = profile.contribution_of(player.id)
        x = c.amount if c is not None else 0.0
        if provisioned:
            refunds.append(0.0)
            values.append(player.valuation - x)
        else:
            r = contributor_refunds.get(player.id, 0.0)
            refunds.append(r)
            values.append(r)

    return Outcome(
        provisioned=provisioned,
        total=total,
        player_ids=tuple(p.id for p in profile.players),
        refunds=tuple(refunds),
        payoffs=tuple(values),
    )


def remaining_amount(spec: ProjectSpec, profile: StrategyProfile, t: float) -> float:
    """h^t = max(H - sum of contributions made by time t, 0)."""
    if t < 0 or t > spec.deadline:
        raise TimeOutOfRange(f"t={t} outside [0, T={spec.deadline}]")
    raised = math.fsum(c.amount for c in profile.contributions if c.at <= t)
    return max(spec.provision_point - raised, 0.0)
