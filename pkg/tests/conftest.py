import os
import sys

import pytest

# Add repository root to path for module resolution
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from provision_point.analysis.conditions import SampleSpec  # noqa: E402
from provision_point.mechanisms.model import Player, ProjectSpec, StrategyProfile  # noqa: E402


@pytest.fixture
def spec():
    return ProjectSpec(provision_point=100.0, deadline=10.0, budget=20.0)


@pytest.fixture
def small_sample():
    return SampleSpec(num_points=200, seed=3)


@pytest.fixture
def three_backers():
    """Three players contributing 30 + 20 + 10 = 60 < H at t = 1, 2, 3."""
    players = [Player(id=i, valuation=50.0, arrival=float(i)) for i in (1, 2, 3)]
    return StrategyProfile.build(players, [(1, 30.0, 1.0), (2, 20.0, 2.0), (3, 10.0, 3.0)])
