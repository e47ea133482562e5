#!/usr/bin/env python3
"""
Command-line runner for the provision point experiments.

Usage:
    python -m provision_point check --scheme pprg --config configs/default.yaml
    python -m provision_point equilibrium --config configs/equilibrium.yaml --out out/caps.csv
    python -m provision_point simulate --config configs/simulate.yaml --out out/accuracy.csv
    python -m provision_point gas
    python -m provision_point plot refund-evolution --config configs/default.yaml --out out/refunds.svg
    python -m provision_point refund --config configs/refund.yaml
    python -m provision_point report --config configs/default.yaml --out out/report.pdf

Exit codes: 0 success, 1 domain or validation error (or an unexpected
condition pattern from check), 2 I/O error.
"""

import argparse
import logging
import os
import sys

from provision_point import __version__
from provision_point.config import load_config
from provision_point.errors import MechanismError
from provision_point.mechanisms.model import SCHEME_TYPES
from provision_point.pipeline import ExperimentPipeline
from provision_point.utils.tables import format_table, to_csv_text, violations_frame, write_csv

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2


def _banner(title: str, **fields) -> None:
    print(f"\n{'=' * 60}")
    print(f"  {title}")
    print(f"{'=' * 60}")
    for key, value in fields.items():
        print(f"  {key}: {value}")
    print(f"{'=' * 60}\n")


def _emit(df, out: str | None, xlsx: str | None, sheet: str, title: str, chart=None) -> None:
    print(format_table(df))
    print()
    if out:
        print(f"  CSV saved: {write_csv(df, out)}")
    else:
        print(to_csv_text(df), end="")
    if xlsx:
        print(f"  Excel saved: {ExperimentPipeline.export_xlsx(xlsx, [(sheet, df, title, chart)])}")


def _suffixed(path: str, multiplier: float) -> str:
    stem, ext = os.path.splitext(path)
    return f"{stem}_m{multiplier:g}{ext or '.csv'}"


# ──────────────────────────── Commands ────────────────────────────

def cmd_check(args, pipeline: ExperimentPipeline) -> int:
    schemes = list(SCHEME_TYPES) if "all" in args.scheme else args.scheme
    sample = pipeline.config.to_sample_spec()
    _banner("Refund scheme conditions", Schemes=", ".join(schemes),
            Points=sample.num_points, Seed=sample.seed)

    print("[1/2] Checking contribution, time monotonicity and race condition...")
    result = pipeline.run_checks(schemes)
    print("[2/2] Results\n")
    _emit(result["table"], args.out, args.xlsx, "Conditions", "Refund scheme conditions")

    if args.violations:
        for c1, c2, _ in result["suites"]:
            for report in (c1, c2):
                if report.violations:
                    print(f"\n{report.scheme} {report.condition}: first violations")
                    print(format_table(violations_frame(report).head(10)))

    if not result["all_expected"]:
        unexpected = result["table"].loc[~result["table"]["as_expected"], "scheme"].tolist()
        print(f"\nUnexpected pattern for: {', '.join(unexpected)}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_equilibrium(args, pipeline: ExperimentPipeline) -> int:
    section = pipeline.config.equilibrium
    _banner("Equilibrium contributions", Scheme=section.scheme,
            H=pipeline.config.project.provision_point)

    result = pipeline.run_equilibrium()
    bound = result["bound"]
    print(f"  Budget B:  {result['budget']:.6g}")
    if bound is not None:
        print(f"  Bound:     {bound.max_budget:.6g} (theta_sum - H = {bound.simplified:.6g})")
    print(f"  Raised C:  {result['total']:.6g} ({'provisioned' if result['provisioned'] else 'not provisioned'})\n")
    _emit(result["table"], args.out, args.xlsx, "Equilibrium", f"Equilibrium caps ({section.scheme})")
    return EXIT_OK


def cmd_simulate(args, pipeline: ExperimentPipeline) -> int:
    sim = pipeline.config.simulation
    multipliers = sim.multipliers or [sim.expected_valuation_multiplier]
    _banner("Provision accuracy", Policy=sim.policy, Mechanisms=", ".join(sim.mechanisms),
            Multipliers=", ".join(f"{m:g}" for m in multipliers), Seed=sim.seed)

    results = pipeline.run_simulation()
    sheets = []
    for step, (m, df) in enumerate(results, start=1):
        print(f"[{step}/{len(results)}] E[theta] = {m:g}*H")
        print(format_table(df))
        print()
        if args.out:
            path = args.out if len(results) == 1 else _suffixed(args.out, m)
            print(f"  CSV saved: {write_csv(df, path)}\n")
        else:
            print(to_csv_text(df))
        sheets.append((f"m={m:g}", df, f"Provision accuracy, E[theta] = {m:g}*H",
                       ("budget_fraction", "accuracy", "mechanism")))
    if args.xlsx:
        print(f"  Excel saved: {ExperimentPipeline.export_xlsx(args.xlsx, sheets)}")
    return EXIT_OK


def cmd_gas(args, pipeline: ExperimentPipeline) -> int:
    _banner("Gas per contribution", Mode=pipeline.config.gas.exp_mode)
    df = pipeline.run_gas()
    _emit(df, args.out, args.xlsx, "Gas", "Gas per contribution")
    for row in df.itertuples(index=False):
        if not row.consistent:
            print(f"  {row.mechanism}: computed floor {row.total_min:g} differs from "
                  f"published total {row.published_total} ({row.published_note})")
    return EXIT_OK


def cmd_plot(args, pipeline: ExperimentPipeline) -> int:
    _banner("Refund evolution", Output=os.path.abspath(args.out))
    print("[1/2] Evaluating refunds...")
    df = pipeline.refund_evolution_table()
    if args.csv:
        print(f"  CSV saved: {write_csv(df, args.csv)}")
    print("[2/2] Drawing chart...")
    print(f"  SVG saved: {pipeline.run_plot(args.out)}")
    return EXIT_OK


def cmd_refund(args, pipeline: ExperimentPipeline) -> int:
    _banner("Payoffs at the deadline", Scheme=pipeline.config.refund.scheme)
    result = pipeline.run_refund()
    outcome = result["outcome"]
    print(f"  Raised C: {outcome.total:.6g} ({'provisioned' if outcome.provisioned else 'not provisioned'})\n")
    _emit(result["table"], args.out, args.xlsx, "Payoffs", "Payoffs")
    return EXIT_OK


def cmd_report(args, pipeline: ExperimentPipeline) -> int:
    _banner("Report", Output=os.path.abspath(args.out))
    print(f"  PDF saved: {pipeline.write_report(args.out)}")
    return EXIT_OK


# ──────────────────────────── Parser ────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="provision_point", description="Provision point refund scheme experiments")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, out_help="CSV output path", xlsx=True):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", "-c", default=None, help="Run config YAML (defaults when omitted)")
        p.add_argument("--out", "-o", default=None, help=out_help)
        if xlsx:
            p.add_argument("--xlsx", default=None, help="Also write a formatted Excel workbook")
        p.set_defaults(func=func)
        return p

    check = add("check", cmd_check, "Numerical condition and race checks")
    check.add_argument("--scheme", "-s", action="append", required=True,
                       choices=list(SCHEME_TYPES) + ["all"], help="Scheme to check (repeatable)")
    check.add_argument("--violations", action="store_true", help="Print the first violations per condition")

    add("equilibrium", cmd_equilibrium, "Equilibrium contribution caps")
    add("simulate", cmd_simulate, "Provision accuracy sweep")
    add("gas", cmd_gas, "Gas per contribution")
    add("refund", cmd_refund, "Payoffs of the profile in the refund section")
    add("report", cmd_report, "PDF report", out_help="PDF output path", xlsx=False).set_defaults(out="report.pdf")

    plot = sub.add_parser("plot", help="Charts")
    plot.add_argument("chart", choices=["refund-evolution"])
    plot.add_argument("--config", "-c", default=None, help="Run config YAML (defaults when omitted)")
    plot.add_argument("--out", "-o", default="refund_evolution.svg", help="SVG output path")
    plot.add_argument("--csv", default=None, help="Also write the plotted values as CSV")
    plot.set_defaults(func=cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )

    try:
        pipeline = ExperimentPipeline(load_config(args.config))
        return args.func(args, pipeline)
    except MechanismError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
