import pytest

from provision_point.errors import InvalidParameter, InvalidProfile, InvalidSeq
from provision_point.mechanisms.model import (
    PPM, PPR, PPRE, PPRG, PPRP, PPS,
    Player, ProjectSpec, StrategyProfile, make_scheme,
)


class TestSchemes:

    def test_pprg_constant(self):
        assert PPRG(a=1.0, gamma=2.0).k == pytest.approx(2.0)
        assert PPRG(a=3.0, gamma=4.0).k == pytest.approx(4.0)

    def test_make_scheme_by_name(self):
        assert make_scheme("PPRE", k2=5.0) == PPRE(k2=5.0)
        assert make_scheme("ppm") == PPM()
        assert make_scheme("pps", liquidity=2.0).liquidity == 2.0
        assert make_scheme(" ppr ").name == "ppr"

    @pytest.mark.parametrize("build", [
        lambda: PPRG(a=0.0),
        lambda: PPRG(gamma=1.0),
        lambda: PPRE(k2=-1.0),
        lambda: PPRP(k3=0.0),
        lambda: PPS(liquidity=0.0),
        lambda: make_scheme("ppx"),
    ])
    def test_invalid_parameters(self, build):
        with pytest.raises(InvalidParameter):
            build()


class TestProjectSpec:

    def test_validation(self):
        with pytest.raises(InvalidParameter):
            ProjectSpec(provision_point=0, deadline=1, budget=1)
        with pytest.raises(InvalidParameter):
            ProjectSpec(provision_point=1, deadline=0, budget=1)
        with pytest.raises(InvalidParameter):
            ProjectSpec(provision_point=1, deadline=1, budget=-1)

    def test_provision_tolerance(self):
        spec = ProjectSpec(provision_point=100.0, deadline=1.0, budget=0.0)
        assert spec.is_provisioned(100.0)
        assert spec.is_provisioned(100.0 - 1e-8)
        assert not spec.is_provisioned(99.999)

    def test_default_scheme_is_ppm(self):
        assert isinstance(ProjectSpec(provision_point=1, deadline=1, budget=0).scheme, PPM)


class TestStrategyProfile:

    def test_seq_follows_time(self):
        players = [Player(id=i, valuation=10.0, arrival=0.0) for i in (1, 2, 3)]
        profile = StrategyProfile.build(players, [(1, 5.0, 3.0), (2, 4.0, 1.0), (3, 6.0, 2.0)])
        assert [c.player_id for c in profile.contributions] == [2, 3, 1]
        assert [c.seq for c in profile.contributions] == [1, 2, 3]
        assert profile.total == pytest.approx(15.0)
        assert len(profile) == 3

    def test_equal_times_keep_insertion_order(self):
        players = [Player(id=i, valuation=10.0, arrival=0.0) for i in (1, 2)]
        profile = StrategyProfile.build(players, [(2, 1.0, 1.0), (1, 1.0, 1.0)])
        assert [c.player_id for c in profile.contributions] == [2, 1]

    def test_rejects_second_contribution(self):
        players = [Player(id=1, valuation=10.0, arrival=0.0)]
        with pytest.raises(InvalidProfile):
            StrategyProfile.build(players, [(1, 1.0, 1.0), (1, 2.0, 2.0)])

    def test_rejects_contribution_before_arrival(self):
        players = [Player(id=1, valuation=10.0, arrival=2.0)]
        with pytest.raises(InvalidProfile):
            StrategyProfile.build(players, [(1, 1.0, 1.0)])

    def test_rejects_unknown_player_and_negative_amount(self):
        players = [Player(id=1, valuation=10.0, arrival=0.0)]
        with pytest.raises(InvalidProfile):
            StrategyProfile.build(players, [(9, 1.0, 1.0)])
        with pytest.raises(InvalidProfile):
            StrategyProfile.build(players, [(1, -1.0, 1.0)])

    def test_validate_against_project(self, spec):
        players = [Player(id=1, valuation=10.0, arrival=0.0)]
        late = StrategyProfile.build(players, [(1, 1.0, spec.deadline + 1)])
        with pytest.raises(InvalidProfile):
            late.validate(spec)
        too_much = StrategyProfile.build(players, [(1, spec.provision_point + 1, 1.0)])
        with pytest.raises(InvalidProfile):
            too_much.validate(spec)

    def test_contribution_lookup(self, three_backers):
        assert three_backers.contribution(2).player_id == 2
        assert three_backers.contribution_of(3).amount == 10.0
        assert three_backers.player(1).valuation == 50.0
        with pytest.raises(InvalidSeq):
            three_backers.contribution(4)
        with pytest.raises(InvalidSeq):
            three_backers.contribution(0)

    def test_with_pledge(self, three_backers):
        moved = three_backers.with_pledge(1, at=3.0)
        assert [c.player_id for c in moved.contributions] == [2, 1, 3]
        behind = three_backers.with_pledge(1, at=3.0, move_last=True)
        assert [c.player_id for c in behind.contributions] == [2, 3, 1]
        bigger = three_backers.with_pledge(2, amount=25.0)
        assert bigger.total == pytest.approx(65.0)
        assert three_backers.total == pytest.approx(60.0)

    def test_theta_sum(self, three_backers):
        assert three_backers.theta_sum == pytest.approx(150.0)
