from .model import (
    PPM, PPR, PPRE, PPRG, PPRP, PPS,
    Contribution, Outcome, Player, ProjectSpec, SchemeParams, StrategyProfile,
    make_scheme,
)
from .refund_schemes import (
    payoffs, refund_share, refund_vector, refund_weight, remaining_amount,
    scheme_refund, time_weight_sum,
)
from .securities import (
    outstanding_securities, pps_cost, pps_cost_inverse, pps_refund, securities_issued,
)

__all__ = [
    "PPM", "PPR", "PPRE", "PPRG", "PPRP", "PPS",
    "Contribution", "Outcome", "Player", "ProjectSpec", "SchemeParams", "StrategyProfile",
    "make_scheme",
    "payoffs", "refund_share", "refund_vector", "refund_weight", "remaining_amount",
    "scheme_refund", "time_weight_sum",
    "outstanding_securities", "pps_cost", "pps_cost_inverse", "pps_refund", "securities_issued",
]
