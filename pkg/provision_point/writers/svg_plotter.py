"""
Refund evolution chart: refund share against contribution position.

Every player contributes the same amount, one per time step, so the only
thing that differs along a curve is how early the contribution came.
"""

import logging
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from provision_point.mechanisms.model import (  # noqa: E402
    PPR, PPRE, PPRG, PPRP, PPS, Player, SchemeParams, StrategyProfile,
)
from provision_point.mechanisms.refund_schemes import refund_vector  # noqa: E402

logger = logging.getLogger(__name__)

STYLES = {
    "pprg": {"color": "#2F5496", "marker": "o"},
    "ppre": {"color": "#C00000", "marker": "s"},
    "pprp": {"color": "#548235", "marker": "^"},
    "ppr": {"color": "#7F7F7F", "linestyle": "--"},
    "pps": {"color": "#BF9000", "marker": "d"},
}


def comparison_schemes(k: float, gamma: float, liquidity: float) -> list[SchemeParams]:
    """The five schemes with a common K: K1 = K2 = K3 = k, so a = k*(gamma-1)/gamma."""
    return [
        PPRG(a=k * (gamma - 1.0) / gamma, gamma=gamma),
        PPRE(k2=k),
        PPRP(k3=k),
        PPR(),
        PPS(liquidity=liquidity),
    ]


def refund_evolution(
    schemes: list[SchemeParams],
    budget: float,
    contribution: float,
    n_players: int,
    time_step: float = 1.0,
) -> pd.DataFrame:
    """Long-format table (scheme, position, time, refund) for equal contributions."""
    players = [Player(id=i, valuation=contribution, arrival=(i - 1) * time_step) for i in range(1, n_players + 1)]
    profile = StrategyProfile.build(players, [(p.id, contribution, p.arrival) for p in players])

    frames = []
    for scheme in schemes:
        frames.append(pd.DataFrame({
            "scheme": scheme.name,
            "position": [c.seq for c in profile.contributions],
            "time": [c.at for c in profile.contributions],
            "refund": refund_vector(scheme, profile, budget),
        }))
    return pd.concat(frames, ignore_index=True)


def plot_refund_evolution(df: pd.DataFrame, output_path: str, title: str | None = None) -> str:
    """Draw one line per scheme and save as SVG."""
    output_path = os.path.abspath(output_path)
    os.makedirs(os.path.dirname(output_path), exist_ok=True)

    plt.rcParams["svg.hashsalt"] = "provision-point"
    fig, ax = plt.subplots(figsize=(8, 5))
    for name, group in df.groupby("scheme", sort=False):
        ax.plot(group["position"], group["refund"], label=name.upper(), **STYLES.get(name, {}))
    ax.set_xlabel("Contribution position i", fontsize=12)
    ax.set_ylabel("Refund share R_i", fontsize=12)
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(output_path, format="svg", metadata={"Date": None})
    plt.close(fig)

    logger.info("Refund evolution chart written to %s", output_path)
    return output_path
