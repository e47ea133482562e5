"""
ExperimentPipeline - Orchestrates every experiment of a run config:
  1. Condition suite per refund scheme
  2. Equilibrium contributions for one population
  3. Provision accuracy sweeps
  4. Gas table
  5. Refund evolution chart
  6. Payoffs of a hand-written profile
and exports the tables as CSV, Excel or a PDF report.
"""

import logging
import math
import os

import numpy as np
import pandas as pd

from provision_point.analysis.conditions import expected_pattern, run_condition_suite
from provision_point.analysis.equilibrium import equilibrium_caps, max_budget
from provision_point.analysis.gas_cost import gas_table
from provision_point.config import RunConfig
from provision_point.errors import UnsupportedScheme
from provision_point.mechanisms.model import SCHEME_TYPES, Player
from provision_point.mechanisms.refund_schemes import payoffs
from provision_point.simulation.simulator import SimConfig, sample_players, sweep_multipliers
from provision_point.utils.tables import (
    accuracy_frame,
    condition_frame,
    equilibrium_frame,
    gas_frame,
    outcome_frame,
)
from provision_point.writers.excel_writer import ExcelWriter
from provision_point.writers.pdf_writer import PDFWriter
from provision_point.writers.svg_plotter import comparison_schemes, plot_refund_evolution, refund_evolution

logger = logging.getLogger(__name__)


class ExperimentPipeline:
    """
    Usage:
        pipeline = ExperimentPipeline(load_config("configs/default.yaml"))
        result = pipeline.run_checks(["pprg", "ppr"])
        print(result["table"])
    """

    def __init__(self, config: RunConfig):
        self.config = config

    # ──────────────────────────── Conditions ────────────────────────────

    def run_checks(self, schemes: list[str]) -> dict:
        spec = self.config.to_project_spec()
        sample = self.config.to_sample_spec()
        suites, expected = [], []
        for name in schemes:
            scheme = self.config.to_scheme(name)
            suites.append(run_condition_suite(scheme, spec, sample))
            expected.append(expected_pattern(scheme))
        table = condition_frame(suites, expected)
        return {
            "table": table,
            "suites": suites,
            "all_expected": bool(table["as_expected"].all()),
        }

    # ──────────────────────────── Equilibrium ────────────────────────────

    def equilibrium_players(self) -> list[Player]:
        section = self.config.equilibrium
        if section.players:
            return [Player(id=p.id, valuation=p.valuation, arrival=p.arrival) for p in section.players]
        sim = SimConfig(
            n_players=section.n_players,
            expected_valuation_multiplier=section.expected_valuation_multiplier,
            provision_point=self.config.project.provision_point,
            deadline=self.config.project.deadline,
            arrival_window=tuple(section.arrival_window),
            mechanisms=(),
        )
        return sample_players(sim, np.random.default_rng(section.seed))

    def equilibrium_budget(self, players: list[Player]) -> tuple[float, object]:
        """The budget to play with and the bound it was measured against (None for PPR)."""
        section = self.config.equilibrium
        H = self.config.project.provision_point
        scheme = self.config.to_scheme(section.scheme)
        theta_sum = math.fsum(p.valuation for p in players)
        try:
            bound = max_budget(scheme, H, theta_sum)
            ceiling = bound.max_budget
        except UnsupportedScheme:
            bound, ceiling = None, theta_sum - H

        if section.budget is not None:
            return section.budget, bound
        if section.budget_fraction is not None:
            return section.budget_fraction * ceiling, bound
        return self.config.project.budget, bound

    def run_equilibrium(self) -> dict:
        section = self.config.equilibrium
        H = self.config.project.provision_point
        scheme = self.config.to_scheme(section.scheme)
        players = self.equilibrium_players()
        budget, bound = self.equilibrium_budget(players)

        caps = equilibrium_caps(scheme, players, H, budget)
        total = math.fsum(c.cap for c in caps)
        return {
            "table": equilibrium_frame(caps, total),
            "caps": caps,
            "total": total,
            "budget": budget,
            "bound": bound,
            "provisioned": self.config.to_project_spec().is_provisioned(total),
        }

    # ──────────────────────────── Simulation ────────────────────────────

    def run_simulation(self) -> list[tuple[float, pd.DataFrame]]:
        """One accuracy table per valuation multiplier."""
        base = self.config.to_sim_config()
        multipliers = self.config.simulation.multipliers or [base.expected_valuation_multiplier]
        logger.info("Simulating E[theta] = %s*H with policy %s", multipliers, base.policy)
        return [(m, accuracy_frame(result)) for m, result in zip(multipliers, sweep_multipliers(base, multipliers))]

    # ──────────────────────────── Gas ────────────────────────────

    def run_gas(self) -> pd.DataFrame:
        gas = self.config.gas
        return gas_frame(gas_table(self.config.to_cost_table(), gas.exp_operand, gas.log_bytes))

    # ──────────────────────────── Plot ────────────────────────────

    def refund_evolution_table(self) -> pd.DataFrame:
        plot = self.config.plot
        budget = self.config.project.budget if plot.budget is None else plot.budget
        schemes = comparison_schemes(plot.k, plot.gamma, plot.liquidity)
        return refund_evolution(schemes, budget, plot.contribution, plot.n_players, plot.time_step)

    def run_plot(self, output_path: str) -> str:
        return plot_refund_evolution(self.refund_evolution_table(), output_path, title="Refund share by position")

    # ──────────────────────────── Refund ────────────────────────────

    def run_refund(self) -> dict:
        spec = self.config.to_project_spec(self.config.refund.scheme)
        profile = self.config.to_refund_profile()
        outcome = payoffs(spec, profile)
        amounts = {c.player_id: c.amount for c in profile.contributions}
        return {"table": outcome_frame(outcome, amounts), "outcome": outcome}

    # ──────────────────────────── Exports ────────────────────────────

    @staticmethod
    def export_xlsx(path: str, sheets: list[tuple[str, pd.DataFrame, str, tuple | None]]) -> str:
        writer = ExcelWriter(path)
        for name, df, title, chart in sheets:
            writer.add_table_sheet(df, name, title=title, chart=chart)
        return writer.save()

    def write_report(self, output_path: str) -> str:
        """PDF with the gas table, the condition suite for all schemes and an equilibrium run."""
        project = self.config.project
        writer = PDFWriter(output_path, "Provision point refund schemes",
                           subtitle=f"H = {project.provision_point:g}, T = {project.deadline:g}, B = {project.budget:g}")

        writer.add_heading("Gas per contribution")
        writer.add_table(self.run_gas())
        writer.add_paragraph(
            "total_min prices EXP and LOG at their floors. A published total that disagrees "
            "with its own opcode counts is marked consistent = no."
        )

        writer.add_heading("Refund scheme conditions")
        checks = self.run_checks(list(SCHEME_TYPES))
        writer.add_table(checks["table"])
        sample = self.config.to_sample_spec()
        writer.add_key_values([
            ("Sample points", sample.num_points),
            ("Seed", sample.seed),
            ("All schemes as expected", "yes" if checks["all_expected"] else "no"),
        ])

        writer.add_heading("Equilibrium")
        eq = self.run_equilibrium()
        items = [
            ("Scheme", self.config.equilibrium.scheme),
            ("Players", len(eq["caps"])),
            ("Budget B", f"{eq['budget']:.6g}"),
            ("Raised C", f"{eq['total']:.6g}"),
            ("Provisioned", "yes" if eq["provisioned"] else "no"),
        ]
        if eq["bound"] is not None:
            items.append(("Budget bound", f"{eq['bound'].max_budget:.6g}"))
        writer.add_key_values(items)
        writer.add_table(eq["table"], max_rows=30)

        path = writer.save()
        logger.info("Report written to %s", os.path.abspath(path))
        return path
