import xml.etree.ElementTree as ET

import numpy as np
import pandas as pd
import pytest
from openpyxl import load_workbook

from provision_point.writers import (
    ExcelWriter,
    PDFWriter,
    comparison_schemes,
    plot_refund_evolution,
    refund_evolution,
)
from provision_point.writers.pdf_writer import latin1


@pytest.fixture
def evolution():
    return refund_evolution(comparison_schemes(1.0, 2.0, 10.0), budget=20.0, contribution=5.0, n_players=10)


def curve(df, name):
    return df.loc[df["scheme"] == name, "refund"].to_numpy()


class TestRefundEvolution:

    def test_shape(self, evolution):
        assert list(evolution.columns) == ["scheme", "position", "time", "refund"]
        assert len(evolution) == 5 * 10
        assert evolution.loc[evolution["scheme"] == "pprg", "time"].tolist() == [float(i) for i in range(10)]

    def test_common_k(self):
        schemes = {s.name: s for s in comparison_schemes(1.0, 2.0, 10.0)}
        assert schemes["pprg"].k == pytest.approx(1.0)
        assert schemes["ppre"].k == schemes["pprp"].k == 1.0

    @pytest.mark.parametrize("name", ["pprg", "ppre", "pprp", "pps"])
    def test_early_contributions_earn_more(self, evolution, name):
        assert np.all(np.diff(curve(evolution, name)) < 0)

    def test_ppr_is_flat(self, evolution):
        assert curve(evolution, "ppr") == pytest.approx([2.0] * 10)

    def test_pprg_decays_slowest_at_first(self, evolution):
        drops = {name: curve(evolution, name)[0] - curve(evolution, name)[1] for name in ("pprg", "ppre", "pprp")}
        assert drops["pprg"] < drops["pprp"] < drops["ppre"]

    def test_svg(self, evolution, tmp_path):
        path = plot_refund_evolution(evolution, str(tmp_path / "charts" / "refunds.svg"), title="Refunds")
        root = ET.parse(path).getroot()
        assert root.tag.endswith("svg")

    def test_svg_is_reproducible(self, evolution, tmp_path):
        a = plot_refund_evolution(evolution, str(tmp_path / "a.svg"))
        b = plot_refund_evolution(evolution, str(tmp_path / "b.svg"))
        assert open(a, "rb").read() == open(b, "rb").read()


class TestExcelWriter:

    def test_sheets_and_values(self, tmp_path):
        df = pd.DataFrame({
            "mechanism": ["pprg", "pprg", "pprp", "pprp"],
            "budget_fraction": [0.5, 1.0, 0.5, 1.0],
            "accuracy": [1.0, 1.0, 0.9, 1.0],
        })
        writer = ExcelWriter(str(tmp_path / "out" / "acc.xlsx"))
        writer.add_table_sheet(df, "Accuracy", title="Provision accuracy",
                               chart=("budget_fraction", "accuracy", "mechanism"))
        writer.add_key_value_sheet([("Seed", np.int64(3)), ("Policy", "equilibrium")], "Run")
        path = writer.save()

        wb = load_workbook(path)
        assert wb.sheetnames == ["Accuracy", "Run"]
        ws = wb["Accuracy"]
        assert ws["A1"].value == "Provision accuracy"
        assert [c.value for c in ws[3]] == ["mechanism", "budget_fraction", "accuracy"]
        assert ws["C6"].value == pytest.approx(0.9)
        assert wb["Run"]["B1"].value == 3


class TestPDFWriter:

    def test_writes_pdf(self, tmp_path):
        writer = PDFWriter(str(tmp_path / "report.pdf"), "Refund schemes", subtitle="H = 100")
        writer.add_heading("Gas")
        writer.add_paragraph("Floors only; θ is the valuation.")
        writer.add_key_values([("Seed", 0), ("Provisioned", "yes")])
        writer.add_table(pd.DataFrame({"scheme": ["pprg"] * 80, "value": np.arange(80.0)}), max_rows=20)
        path = writer.save()
        with open(path, "rb") as f:
            assert f.read(4) == b"%PDF"

    def test_latin1(self):
        assert latin1("payoff ≥ 0") == "payoff ? 0"
