import logging
import math

import numpy as np
import pytest

from provision_point.analysis.equilibrium import (
    Binding,
    equilibrium_cap,
    equilibrium_caps,
    equilibrium_profile,
    gp_tail,
    max_budget,
    rationality_slack,
    refund_weight_sum,
)
from provision_point.errors import InvalidParameter, NoValidBudget, UnsupportedScheme
from provision_point.mechanisms.model import PPM, PPR, PPRE, PPRG, PPRP, PPS, Player

H = 100.0


def random_instance(rng, scheme, n=25):
    """n players whose valuations sum to a total drawn from (1.5H, 20H)."""
    theta_sum = rng.uniform(1.5 * H, 20 * H)
    weights = rng.uniform(0.0, 1.0, size=n)
    valuations = weights / weights.sum() * theta_sum
    low = 4.0 if isinstance(scheme, PPRE) else 0.0
    arrivals = np.sort(rng.uniform(low, 10.0, size=n))
    players = [Player(id=i + 1, valuation=float(v), arrival=float(y))
               for i, (v, y) in enumerate(zip(valuations, arrivals))]
    return players, math.fsum(p.valuation for p in players)


class TestMaxBudget:

    def test_pprg_example(self):
        bound = max_budget(PPRG(a=1.0, gamma=2.0), H, 200.0)
        assert bound.k == pytest.approx(2.0)
        assert bound.max_budget == pytest.approx(100.0)

    def test_ppre_example(self):
        assert max_budget(PPRE(k2=5.0), H, 150.0).max_budget == pytest.approx(50.0)

    def test_no_valid_budget_at_boundary(self):
        with pytest.raises(NoValidBudget):
            max_budget(PPRG(), H, H)
        with pytest.raises(NoValidBudget):
            max_budget(PPRP(), H, 40.0)

    @pytest.mark.parametrize("scheme", [PPM(), PPR(), PPS()])
    def test_unsupported_schemes(self, scheme):
        with pytest.raises(UnsupportedScheme):
            max_budget(scheme, H, 200.0)

    def test_rejects_bad_inputs(self):
        with pytest.raises(InvalidParameter):
            max_budget(PPRG(), 0.0, 200.0)
        with pytest.raises(InvalidParameter):
            max_budget(PPRG(), H, -1.0)

    def test_bound_does_not_depend_on_k(self):
        """Property: the bound reduces to theta_sum - H for any K."""
        rng = np.random.default_rng(5)
        for _ in range(100):
            h = rng.uniform(1.0, 1000.0)
            theta_sum = h + rng.uniform(0.01, 10 * h)
            scheme = [PPRG(a=rng.uniform(0.1, 5), gamma=rng.uniform(1.1, 4)),
                      PPRE(k2=rng.uniform(0.1, 10)),
                      PPRP(k3=rng.uniform(0.1, 10))][int(rng.integers(3))]
            bound = max_budget(scheme, h, theta_sum)
            assert bound.max_budget == pytest.approx(bound.simplified, rel=1e-9)
            assert bound.simplified == pytest.approx(theta_sum - h, rel=1e-12)


class TestEquilibriumCap:

    def test_pprg_example(self):
        cap = equilibrium_cap(PPRG(a=1.0, gamma=2.0), 10.0, 1, H, 50.0)
        assert cap == pytest.approx(970.0 / 152.0)
        assert cap == pytest.approx(6.381579, abs=1e-6)

    def test_ppr_example(self):
        assert equilibrium_cap(PPR(), 10.0, 1, H, 50.0) == pytest.approx(1000.0 / 150.0)

    def test_zero_valuation(self):
        for scheme in (PPR(), PPRG(), PPRE(), PPRP()):
            assert equilibrium_cap(scheme, 0.0, 1, H, 50.0) == 0.0

    def test_cap_is_the_indifference_point(self):
        for scheme, position in ((PPR(), 1), (PPRG(a=1.0, gamma=2.0), 3), (PPRE(k2=2.0), 1.5), (PPRP(k3=2.0), 2)):
            cap = equilibrium_cap(scheme, 40.0, position, H, 30.0)
            assert rationality_slack(scheme, 40.0, cap, position, H, 30.0) == pytest.approx(0.0, abs=1e-12)
            assert rationality_slack(scheme, 40.0, cap / 2, position, H, 30.0) > 0

    def test_later_positions_may_give_more(self):
        scheme = PPRG(a=1.0, gamma=2.0)
        caps = [equilibrium_cap(scheme, 50.0, i, H, 20.0) for i in (1, 2, 3)]
        assert caps == sorted(caps)

    def test_errors(self):
        with pytest.raises(InvalidParameter):
            equilibrium_cap(PPRG(), 10.0, 1, H, 0.0)
        with pytest.raises(InvalidParameter):
            equilibrium_cap(PPRG(), -1.0, 1, H, 10.0)
        with pytest.raises(UnsupportedScheme):
            equilibrium_cap(PPS(), 10.0, 1, H, 10.0)
        with pytest.raises(UnsupportedScheme):
            equilibrium_cap(PPM(), 10.0, 1, H, 10.0)


class TestEquilibriumProfile:

    def test_two_player_example(self):
        players = [Player(id=1, valuation=200.0, arrival=0.0), Player(id=2, valuation=50.0, arrival=1.0)]
        caps = equilibrium_caps(PPRG(a=1.0, gamma=2.0), players, H, 10.0)
        assert caps[0].formula_cap == pytest.approx((200.0 * 102 - 10.0) / 112.0)
        assert caps[0].cap == pytest.approx(100.0)
        assert caps[0].binding is Binding.CAPPED_BY_REMAINING
        assert caps[1].cap == 0.0
        assert caps[1].binding is Binding.ZERO_REMAINING

        profile = equilibrium_profile(PPRG(a=1.0, gamma=2.0), players, H, 10.0)
        assert profile.total == pytest.approx(H)

    def test_all_zero_valuations(self, caplog):
        players = [Player(id=i, valuation=0.0, arrival=float(i)) for i in range(1, 4)]
        with caplog.at_level(logging.WARNING):
            profile = equilibrium_profile(PPRG(), players, H, 10.0)
        assert profile.total == 0.0
        assert "cannot be provisioned" in caplog.text

    def test_empty_population(self):
        assert equilibrium_caps(PPRG(), [], H, 10.0) == []

    def test_players_walked_in_arrival_order(self):
        players = [Player(id=1, valuation=60.0, arrival=2.0), Player(id=2, valuation=60.0, arrival=1.0)]
        caps = equilibrium_caps(PPRP(), players, H, 5.0)
        assert [c.player_id for c in caps] == [2, 1]
        assert [c.seq for c in caps] == [1, 2]

    def test_budget_above_bound_warns(self, caplog):
        players = [Player(id=1, valuation=80.0, arrival=0.0), Player(id=2, valuation=70.0, arrival=1.0)]
        with caplog.at_level(logging.WARNING):
            equilibrium_caps(PPRG(), players, H, 80.0)
        assert "exceeds the equilibrium bound" in caplog.text

    @pytest.mark.parametrize("scheme", [PPRG(a=1.0, gamma=2.0), PPRE(k2=1.0), PPRP(k3=2.0)], ids=lambda s: s.name)
    def test_random_instances_are_provisioned(self, scheme):
        """Property: 0 < B <= max_budget provisions exactly H, at arrival, within individual rationality."""
        rng = np.random.default_rng([17, len(scheme.name)])
        for _ in range(100):
            players, theta_sum = random_instance(rng, scheme)
            budget = rng.uniform(0.0, 1.0) * max_budget(scheme, H, theta_sum).max_budget
            budget = max(budget, 1e-6)
            caps = equilibrium_caps(scheme, players, H, budget)
            profile = equilibrium_profile(scheme, players, H, budget)

            assert profile.total == pytest.approx(H, abs=1e-9 * H)
            by_id = {p.id: p for p in players}
            for c in profile.contributions:
                assert c.at == by_id[c.player_id].arrival
            for cap in caps:
                if cap.cap > 0:
                    position = cap.arrival if isinstance(scheme, PPRE) else cap.seq
                    slack = rationality_slack(scheme, cap.theta, cap.cap, position, H, budget)
                    assert slack >= -1e-9 * max(1.0, cap.theta)

    @pytest.mark.parametrize("n", [1, 2, 3, 6, 10])
    def test_tail_identity_at_the_bound(self, n):
        """Property: sum of formula caps - H = B* tau_n / (H + K1 + B*) at B = B*."""
        scheme = PPRG(a=1.0, gamma=2.0)
        players = [Player(id=i, valuation=200.0 / n, arrival=float(i)) for i in range(1, n + 1)]
        bound = max_budget(scheme, H, 200.0).max_budget
        caps = equilibrium_caps(scheme, players, H, bound)
        excess = math.fsum(c.formula_cap for c in caps) - H
        expected = bound * gp_tail(1.0, 2.0, n) / (H + scheme.k + bound)
        assert excess == pytest.approx(expected, rel=1e-9)


class TestWeights:

    def test_gp_tail(self):
        assert gp_tail(1.0, 2.0, 0) == pytest.approx(2.0)
        assert gp_tail(1.0, 2.0, 3) == pytest.approx(0.25)

    def test_ppre_weight_warning(self, caplog):
        players = [Player(id=1, valuation=10.0, arrival=0.0), Player(id=2, valuation=10.0, arrival=0.1)]
        with caplog.at_level(logging.WARNING):
            total = refund_weight_sum(PPRE(k2=1.0), players)
        assert total > 1.0
        assert "weights sum to" in caplog.text

    def test_gp_weights_stay_below_k(self):
        players = [Player(id=i, valuation=1.0, arrival=float(i)) for i in range(1, 30)]
        assert refund_weight_sum(PPRG(a=1.0, gamma=2.0), players) < 2.0
        assert refund_weight_sum(PPRP(k3=2.0), players) < 2.0
