"""
Numerical checks of the two refund-scheme conditions and of the race condition.

  Contribution Monotonicity: R_i strictly increases with x_i.
  Time Monotonicity:         R_i never increases when t_i grows, and strictly
                             decreases somewhere.
  Race condition:            more than one player loses nothing by waiting
                             for the latest arrival time.

Every check draws seeded random profiles; point k uses its own stream
derived from (seed, k), so reports do not depend on evaluation order.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from provision_point.errors import InvalidParameter
from provision_point.mechanisms.model import (
    PPM, PPR, PPRE, PPRG, PPRP, PPS,
    Player, ProjectSpec, SchemeParams, StrategyProfile,
)
from provision_point.mechanisms.refund_schemes import refund_share, refund_weight, scheme_refund
from provision_point.mechanisms.securities import outstanding_securities

logger = logging.getLogger(__name__)

POSITIVE_SLOPE_TOLERANCE = 1e-12
RACE_TOLERANCE = 1e-12
ANALYTIC_RELATIVE_TOLERANCE = 1e-6


@dataclass(frozen=True)
class SampleSpec:
    num_points: int = 1000
    x_range: tuple[float, float] = (1.0, 20.0)
    t_range: tuple[float, float] = (0.1, 9.0)
    seed: int = 0
    fd_step: float = 1e-6
    num_players: int = 5
    max_contributors: int = 6
    time_shift: float = 0.1

    def __post_init__(self):
        if self.num_points < 1:
            raise InvalidParameter(f"num_points must be >= 1, got {self.num_points}")
        for label, (lo, hi) in (("x_range", self.x_range), ("t_range", self.t_range)):
            if not 0 < lo < hi:
                raise InvalidParameter(f"{label} must satisfy 0 < lo < hi, got ({lo}, {hi})")
        if not self.fd_step > 0:
            raise InvalidParameter(f"fd_step must be > 0, got {self.fd_step}")
        if self.num_players < 1:
            raise InvalidParameter(f"num_players must be >= 1, got {self.num_players}")
        if self.max_contributors < 2:
            raise InvalidParameter(f"max_contributors must be >= 2, got {self.max_contributors}")
        if not 0 < self.time_shift <= 1:
            raise InvalidParameter(f"time_shift must be in (0, 1], got {self.time_shift}")

    def check_against(self, spec: ProjectSpec) -> None:
        if self.x_range[1] >= spec.provision_point:
            raise InvalidParameter(f"x_range {self.x_range} must lie within (0, H={spec.provision_point})")
        if self.t_range[1] >= spec.deadline:
            raise InvalidParameter(f"t_range {self.t_range} must lie within (0, T={spec.deadline})")


@dataclass(frozen=True)
class Violation:
    point: int
    coordinate: str
    value: float
    slope: float


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    scheme: str
    points_checked: int
    violations: tuple[Violation, ...] = ()
    claimed_slopes: tuple[float, ...] = field(default=(), repr=False)

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class RaceReport:
    scheme: str
    race_detected: bool
    witness_set_size: int
    populations_checked: int


# ──────────────────────────── Slopes ────────────────────────────

def analytic_contribution_slope(
    scheme: SchemeParams, x: float, others: float, budget: float,
    seq: int = 1, at: float = 0.0, q: float = 0.0,
) -> float:
    """
    Total derivative dR_i/dx_i with C = x_i + others moving together with x_i.
    """
    total = x + others
    if isinstance(scheme, PPM):
        return 0.0
    if isinstance(scheme, PPR):
        return budget * others / total ** 2
    if isinstance(scheme, (PPRG, PPRE, PPRP)):
        g = refund_weight(scheme, seq, at)
        return budget * (others + scheme.k - g) / (total + scheme.k) ** 2
    if isinstance(scheme, PPS):
        b = scheme.liquidity
        y = np.exp(-q / b) * -np.expm1(-x / b)
        return float(np.exp(-(q + x) / b) / (1.0 + y))
    raise InvalidParameter(f"Unknown scheme {scheme!r}")


def claimed_contribution_slope(scheme: SchemeParams, total: float, budget: float) -> float | None:
    """
    dR_i/dx_i with C held fixed: B/(C+K) for the weighted schemes, B/C for PPR.

    Returns None for PPS, whose refund has no C in it.
    """
    if isinstance(scheme, PPM):
        return 0.0
    if isinstance(scheme, PPR):
        return budget / total
    if isinstance(scheme, (PPRG, PPRE, PPRP)):
        return budget / (total + scheme.k)
    return None


# ──────────────────────────── Sampling ────────────────────────────

def _point_rng(sample: SampleSpec, k: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([sample.seed, stream, k])


def _sample_profile(sample: SampleSpec, rng: np.random.Generator, size: int) -> StrategyProfile:
    """size players contributing at their arrival, with random amounts and times."""
    amounts = rng.uniform(*sample.x_range, size=size)
    times = np.sort(rng.uniform(*sample.t_range, size=size))
    players = [Player(id=i + 1, valuation=float(a), arrival=float(t))
               for i, (a, t) in enumerate(zip(amounts, times))]
    return StrategyProfile.build(players, [(p.id, p.valuation, p.arrival) for p in players])


def _focal_point(sample: SampleSpec, k: int) -> tuple[StrategyProfile, int]:
    rng = _point_rng(sample, k, stream=0)
    size = int(rng.integers(2, sample.max_contributors + 1))
    profile = _sample_profile(sample, rng, size)
    seq = int(rng.integers(1, size + 1))
    return profile, seq


# ──────────────────────────── Checks ────────────────────────────

def check_contribution_monotonicity(
    scheme: SchemeParams, spec: ProjectSpec, sample: SampleSpec,
) -> ConditionReport:
    """
    Central finite difference of R_i in x_i at every sample point.

    A point violates the condition if the slope is not above 1e-12, or if
    it disagrees with the closed-form total derivative by more than 1e-6
    relative.
    """
    sample.check_against(spec)
    budget = spec.budget
    violations = []
    claimed = []

    for k in range(sample.num_points):
        profile, seq = _focal_point(sample, k)
        c = profile.contribution(seq)
        h = sample.fd_step * c.amount

        up = profile.with_pledge(c.player_id, amount=c.amount + h)
        down = profile.with_pledge(c.player_id, amount=c.amount - h)
        numeric = (refund_share(scheme, up, budget, seq) - refund_share(scheme, down, budget, seq)) / (2 * h)

        others = profile.total - c.amount
        q = 0.0
        if isinstance(scheme, PPS):
            amounts = [x.amount for x in profile.contributions[:seq]]
            q = outstanding_securities(amounts, scheme.liquidity)[-1]
        analytic = analytic_contribution_slope(scheme, c.amount, others, budget, seq=seq, at=c.at, q=q)

        fixed = claimed_contribution_slope(scheme, profile.total, budget)
        if fixed is not None:
            claimed.append(fixed)

        if not numeric > POSITIVE_SLOPE_TOLERANCE:
            violations.append(Violation(k, "x", c.amount, numeric))
        elif abs(numeric - analytic) > ANALYTIC_RELATIVE_TOLERANCE * abs(analytic) + 1e-12:
            violations.append(Violation(k, "x_analytic", c.amount, numeric - analytic))

    logger.info("Condition 1 for %s: %d/%d points violate", scheme.name, len(violations), sample.num_points)
    return ConditionReport(
        condition="contribution_monotonicity",
        scheme=scheme.name,
        points_checked=sample.num_points,
        violations=tuple(violations),
        claimed_slopes=tuple(claimed),
    )


def _seq_shift(scheme, profile: StrategyProfile, seq: int, budget: float) -> tuple[float, float]:
    """R_i at position seq and seq+1 with x_i and C unchanged."""
    c = profile.contribution(seq)
    total = profile.total
    now = scheme_refund(scheme, c.amount, total, budget, seq=seq, at=c.at)
    later = scheme_refund(scheme, c.amount, total, budget, seq=seq + 1, at=c.at)
    return now, later


def _time_shift(scheme, spec: ProjectSpec, profile: StrategyProfile, seq: int,
                budget: float, shift: float) -> tuple[float, float, float]:
    """R_i before and after delaying the contribution by shift (bounded by T)."""
    c = profile.contribution(seq)
    delay = min(shift, spec.deadline - c.at)
    delayed = profile.with_pledge(c.player_id, at=c.at + delay, move_last=True)
    new_seq = delayed.contribution_of(c.player_id).seq
    return refund_share(scheme, profile, budget, seq), refund_share(scheme, delayed, budget, new_seq), delay


def check_time_monotonicity(
    scheme: SchemeParams, spec: ProjectSpec, sample: SampleSpec,
) -> ConditionReport:
    """
    Condition 2 by perturbation.

    PPRG and PPRP are indexed by contribution order, so their position is
    shifted by one and a strict decrease is required at every point. The
    other schemes have their contribution delayed by time_shift*T (PPS
    sees the extra securities issued to contributions it now follows);
    the refund must never rise, and must fall at one point at least.
    """
    sample.check_against(spec)
    budget = spec.budget
    shift = sample.time_shift * spec.deadline
    violations = []
    unchanged = []
    decreased = False

    for k in range(sample.num_points):
        profile, seq = _focal_point(sample, k)

        if isinstance(scheme, (PPRG, PPRP)):
            now, later = _seq_shift(scheme, profile, seq, budget)
            if not later < now:
                violations.append(Violation(k, "seq", seq, later - now))
            continue

        now, later, delay = _time_shift(scheme, spec, profile, seq, budget, shift)
        if delay <= 0:
            continue
        slope = (later - now) / delay
        at = profile.contribution(seq).at
        if later > now:
            violations.append(Violation(k, "t", at, slope))
        elif later < now:
            decreased = True
        else:
            unchanged.append(Violation(k, "t", at, slope))

    if not isinstance(scheme, (PPRG, PPRP)) and not decreased:
        violations.extend(unchanged)

    logger.info("Condition 2 for %s: %d/%d points violate", scheme.name, len(violations), sample.num_points)
    return ConditionReport(
        condition="time_monotonicity",
        scheme=scheme.name,
        points_checked=sample.num_points,
        violations=tuple(violations),
    )


def detect_race_condition(
    scheme: SchemeParams, spec: ProjectSpec, sample: SampleSpec,
) -> RaceReport:
    """
    Look for populations where several players lose nothing by waiting.

    Each sampled population contributes at arrival. A player is a witness
    if delaying its contribution to the latest arrival time (behind the
    latest arriver) leaves its refund within 1e-12 or raises it. The
    latest arriver is always a witness, so a race needs two or more.
    """
    sample.check_against(spec)
    budget = spec.budget
    largest = 0

    for k in range(sample.num_points):
        rng = _point_rng(sample, k, stream=1)
        profile = _sample_profile(sample, rng, sample.num_players)
        latest = max(p.arrival for p in profile.players)

        witnesses = 0
        for c in profile.contributions:
            now = refund_share(scheme, profile, budget, c.seq)
            delayed = profile.with_pledge(c.player_id, at=latest, move_last=True)
            later = refund_share(scheme, delayed, budget, delayed.contribution_of(c.player_id).seq)
            if later >= now - RACE_TOLERANCE:
                witnesses += 1
        largest = max(largest, witnesses)

    return RaceReport(
        scheme=scheme.name,
        race_detected=largest > 1,
        witness_set_size=largest,
        populations_checked=sample.num_points,
    )


# ──────────────────────────── Suite ────────────────────────────

def expected_pattern(scheme: SchemeParams) -> tuple[bool, bool, bool]:
    """(Condition 1 passes, Condition 2 passes, race detected) as the theory predicts."""
    if isinstance(scheme, PPM):
        return False, False, True
    if isinstance(scheme, PPR):
        return True, False, True
    return True, True, False


def run_condition_suite(
    scheme: SchemeParams, spec: ProjectSpec, sample: SampleSpec,
) -> tuple[ConditionReport, ConditionReport, RaceReport]:
    return (
        check_contribution_monotonicity(scheme, spec, sample),
        check_time_monotonicity(scheme, spec, sample),
        detect_race_condition(scheme, spec, sample),
    )
