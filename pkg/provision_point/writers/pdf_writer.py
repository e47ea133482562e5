"""
PDFWriter - Reproducibility report: headings, notes and result tables.
"""

import os
import unicodedata

import pandas as pd
from fpdf import FPDF

PRIMARY = (47, 84, 150)
GRAY = (100, 100, 100)
BAND = (242, 242, 242)
WHITE = (255, 255, 255)


def latin1(text: str) -> str:
    """Core PDF fonts are latin-1 only; decompose and replace everything else."""
    text = unicodedata.normalize("NFKD", str(text))
    return text.encode("latin-1", errors="replace").decode("latin-1")


class _ReportPDF(FPDF):
    report_title = ""

    def header(self):
        if self.page_no() == 1:
            return
        self.set_font("Helvetica", "I", 8)
        self.set_text_color(*GRAY)
        self.cell(0, 6, latin1(self.report_title), align="R", new_x="LMARGIN", new_y="NEXT")
        self.ln(2)

    def footer(self):
        self.set_y(-15)
        self.set_font("Helvetica", "I", 8)
        self.set_text_color(*GRAY)
        self.cell(0, 10, f"Page {self.page_no()}/{{nb}}", align="C")


class PDFWriter:
    """
    Usage:
        writer = PDFWriter("out/report.pdf", title="Refund scheme report")
        writer.add_heading("Gas")
        writer.add_table(gas_df)
        writer.save()
    """

    def __init__(self, output_path: str, title: str, subtitle: str | None = None):
        self.output_path = os.path.abspath(output_path)
        self.pdf = _ReportPDF(orientation="P", unit="mm", format="A4")
        self.pdf.report_title = title
        self.pdf.set_auto_page_break(auto=True, margin=20)
        self.pdf.add_page()
        self._width = self.pdf.w - 2 * self.pdf.l_margin

        self.pdf.set_font("Helvetica", "B", 22)
        self.pdf.set_text_color(*PRIMARY)
        self.pdf.cell(0, 14, latin1(title), align="C", new_x="LMARGIN", new_y="NEXT")
        if subtitle:
            self.pdf.set_font("Helvetica", "", 12)
            self.pdf.set_text_color(*GRAY)
            self.pdf.cell(0, 8, latin1(subtitle), align="C", new_x="LMARGIN", new_y="NEXT")
        self.pdf.ln(6)

    def add_heading(self, text: str, level: int = 1) -> None:
        self.pdf.ln(4)
        self.pdf.set_font("Helvetica", "B", 15 if level == 1 else 12)
        self.pdf.set_text_color(*PRIMARY)
        self.pdf.cell(0, 9, latin1(text), new_x="LMARGIN", new_y="NEXT")
        if level == 1:
            y = self.pdf.get_y()
            self.pdf.set_draw_color(*PRIMARY)
            self.pdf.line(self.pdf.l_margin, y, self.pdf.l_margin + self._width, y)
            self.pdf.ln(2)

    def add_paragraph(self, text: str) -> None:
        self.pdf.set_font("Helvetica", "", 10)
        self.pdf.set_text_color(0, 0, 0)
        self.pdf.multi_cell(0, 5, latin1(text), new_x="LMARGIN", new_y="NEXT")
        self.pdf.ln(2)

    def add_key_values(self, items: list[tuple[str, object]]) -> None:
        for key, value in items:
            self.pdf.set_font("Helvetica", "B", 10)
            self.pdf.cell(60, 6, latin1(f"{key}:"), new_x="END")
            self.pdf.set_font("Helvetica", "", 10)
            self.pdf.cell(0, 6, latin1(value), new_x="LMARGIN", new_y="NEXT")
        self.pdf.ln(2)

    @staticmethod
    def _format(value) -> str:
        if hasattr(value, "item"):
            value = value.item()
        if isinstance(value, bool):
            return "yes" if value else "no"
        if isinstance(value, float):
            return "" if pd.isna(value) else f"{value:.6g}"
        return str(value)[:24]

    def add_table(self, df: pd.DataFrame, max_rows: int = 60) -> None:
        """Render df as a banded table; longer tables are cut at max_rows."""
        shown = df.head(max_rows)
        col_width = self._width / max(len(shown.columns), 1)
        font_size = 8 if len(shown.columns) > 6 else 9

        self.pdf.set_font("Helvetica", "B", font_size)
        self.pdf.set_fill_color(*PRIMARY)
        self.pdf.set_text_color(*WHITE)
        for name in shown.columns:
            self.pdf.cell(col_width, 7, latin1(str(name)[:20]), border=1, fill=True, align="C", new_x="END")
        self.pdf.ln()

        self.pdf.set_font("Helvetica", "", font_size)
        self.pdf.set_text_color(0, 0, 0)
        for i, row in enumerate(shown.itertuples(index=False)):
            self.pdf.set_fill_color(*(BAND if i % 2 else WHITE))
            for value in row:
                self.pdf.cell(col_width, 6, latin1(self._format(value)), border=1, fill=True, align="C", new_x="END")
            self.pdf.ln()

        if len(df) > max_rows:
            self.pdf.set_font("Helvetica", "I", 8)
            self.pdf.set_text_color(*GRAY)
            self.pdf.cell(0, 5, f"Showing {max_rows} of {len(df)} rows.", new_x="LMARGIN", new_y="NEXT")
        self.pdf.ln(4)

    def save(self) -> str:
        """Save the PDF and return the output path."""
        os.makedirs(os.path.dirname(self.output_path), exist_ok=True)
        self.pdf.output(self.output_path)
        return self.output_path
