"""
Result tables - DataFrame builders and the fixed CSV format.
"""

import os

import pandas as pd

from provision_point.analysis.conditions import ConditionReport, RaceReport
from provision_point.analysis.equilibrium import EquilibriumCap
from provision_point.analysis.gas_cost import GasReport
from provision_point.mechanisms.model import Outcome
from provision_point.simulation.simulator import AccuracyResult

CSV_FLOAT_FORMAT = "%.9g"

ACCURACY_COLUMNS = ["mechanism", "budget_fraction", "accuracy", "runs", "seed"]
GAS_OPS = ["add", "sub", "mul", "div", "exp", "log"]


def write_csv(df: pd.DataFrame, path: str) -> str:
    """Write df with a fixed header and 9 significant digits; returns the absolute path."""
    path = os.path.abspath(path)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    df.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return path


def to_csv_text(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def format_table(df: pd.DataFrame) -> str:
    """Plain-text rendering for the terminal."""
    if df.empty:
        return "(no rows)"
    return df.to_string(index=False, float_format=lambda v: f"{v:.6g}")


def condition_frame(suites: list[tuple[ConditionReport, ConditionReport, RaceReport]],
                    expected: list[tuple[bool, bool, bool]]) -> pd.DataFrame:
    rows = []
    for (c1, c2, race), want in zip(suites, expected):
        got = (c1.passed, c2.passed, race.race_detected)
        rows.append({
            "scheme": c1.scheme,
            "condition1": "PASS" if c1.passed else "FAIL",
            "condition2": "PASS" if c2.passed else "FAIL",
            "race": "YES" if race.race_detected else "NO",
            "condition1_violations": len(c1.violations),
            "condition2_violations": len(c2.violations),
            "witness_set_size": race.witness_set_size,
            "points": c1.points_checked,
            "as_expected": got == want,
        })
    return pd.DataFrame(rows)


def violations_frame(report: ConditionReport) -> pd.DataFrame:
    return pd.DataFrame(
        [(v.point, v.coordinate, v.value, v.slope) for v in report.violations],
        columns=["point", "coordinate", "value", "slope"],
    )


def equilibrium_frame(caps: list[EquilibriumCap], total: float) -> pd.DataFrame:
    """One row per player in arrival order plus a closing row with the realized C."""
    df = pd.DataFrame([{
        "player_id": str(c.player_id),
        "seq": c.seq,
        "arrival": c.arrival,
        "theta": c.theta,
        "formula_cap": c.formula_cap,
        "cap": c.cap,
        "binding": c.binding.value,
    } for c in caps], columns=["player_id", "seq", "arrival", "theta", "formula_cap", "cap", "binding"])
    closing = pd.DataFrame([{"player_id": "total", "cap": total}])
    return pd.concat([df, closing], ignore_index=True)


def gas_frame(reports: list[GasReport]) -> pd.DataFrame:
    rows = []
    for r in reports:
        row = {"mechanism": r.mechanism.upper()}
        row.update({op: r.op_counts.get(op, 0) for op in GAS_OPS})
        row.update({
            "total_min": r.total_min,
            "total_evaluated": r.total_evaluated,
            "published_total": r.published_total,
            "published_note": r.published_note,
            "consistent": r.consistent,
        })
        rows.append(row)
    return pd.DataFrame(rows)


def accuracy_frame(result: AccuracyResult) -> pd.DataFrame:
    return pd.DataFrame(
        [(r.mechanism, r.budget_fraction, r.accuracy, r.runs, r.seed) for r in result.rows],
        columns=ACCURACY_COLUMNS,
    )


def outcome_frame(outcome: Outcome, contributions: dict[int, float]) -> pd.DataFrame:
    return pd.DataFrame({
        "player_id": list(outcome.player_ids),
        "contribution": [contributions.get(pid, 0.0) for pid in outcome.player_ids],
        "refund": list(outcome.refunds),
        "payoff": list(outcome.payoffs),
    })
