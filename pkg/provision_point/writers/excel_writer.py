"""
ExcelWriter - Formatted .xlsx export of result tables.
"""

import os

import pandas as pd
from openpyxl import Workbook
from openpyxl.chart import LineChart, Reference
from openpyxl.chart.series import SeriesLabel
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter

THIN = Side(style="thin", color="D9D9D9")


class ExcelWriter:
    """
    One sheet per result table, with a styled header and optional line chart.

    Usage:
        writer = ExcelWriter("out/accuracy.xlsx")
        writer.add_table_sheet(df, "Accuracy", title="Provision accuracy",
                               chart=("budget_fraction", "accuracy", "mechanism"))
        writer.save()
    """

    HEADER_FONT = Font(name="Calibri", bold=True, size=11, color="FFFFFF")
    HEADER_FILL = PatternFill(start_color="2F5496", end_color="2F5496", fill_type="solid")
    TITLE_FONT = Font(name="Calibri", bold=True, size=14, color="2F5496")
    CELL_FONT = Font(name="Calibri", size=10)
    BAND_FILL = PatternFill(start_color="F2F2F2", end_color="F2F2F2", fill_type="solid")
    BORDER = Border(left=THIN, right=THIN, top=THIN, bottom=THIN)
    NUMBER_FORMAT = "0.000000"

    def __init__(self, output_path: str):
        self.output_path = os.path.abspath(output_path)
        self.wb = Workbook()
        self.wb.remove(self.wb.active)

    @staticmethod
    def _native(value):
        if hasattr(value, "item"):
            return value.item()
        if isinstance(value, (list, tuple, dict)):
            return str(value)
        return None if pd.isna(value) else value

    def add_table_sheet(
        self,
        df: pd.DataFrame,
        sheet_name: str,
        title: str | None = None,
        chart: tuple[str, str, str] | None = None,
    ) -> None:
        """
        Args:
            df: the table.
            sheet_name: Excel sheet name (truncated to 31 characters).
            title: optional heading above the table.
            chart: (x column, y column, series column) for a line chart
                with one line per value of the series column.
        """
        ws = self.wb.create_sheet(title=sheet_name[:31])
        header_row = 1
        if title:
            ws.cell(row=1, column=1, value=title).font = self.TITLE_FONT
            header_row = 3

        for col, name in enumerate(df.columns, start=1):
            cell = ws.cell(row=header_row, column=col, value=str(name))
            cell.font = self.HEADER_FONT
            cell.fill = self.HEADER_FILL
            cell.alignment = Alignment(horizontal="center")
            cell.border = self.BORDER

        for offset, values in enumerate(df.itertuples(index=False), start=1):
            for col, value in enumerate(values, start=1):
                cell = ws.cell(row=header_row + offset, column=col, value=self._native(value))
                cell.font = self.CELL_FONT
                cell.border = self.BORDER
                if offset % 2 == 0:
                    cell.fill = self.BAND_FILL
                if isinstance(cell.value, float):
                    cell.number_format = self.NUMBER_FORMAT

        for col, name in enumerate(df.columns, start=1):
            width = max([len(str(name))] + [len(str(v)) for v in df.iloc[:, col - 1]])
            ws.column_dimensions[get_column_letter(col)].width = min(width + 4, 40)
        ws.freeze_panes = f"A{header_row + 1}"

        if chart and len(df):
            self._add_line_chart(ws, df, header_row, *chart)

    def add_key_value_sheet(self, items: list[tuple[str, object]], sheet_name: str, title: str | None = None) -> None:
        ws = self.wb.create_sheet(title=sheet_name[:31])
        row = 1
        if title:
            ws.cell(row=1, column=1, value=title).font = self.TITLE_FONT
            row = 3
        for label, value in items:
            ws.cell(row=row, column=1, value=label).font = Font(bold=True, size=10)
            ws.cell(row=row, column=2, value=self._native(value)).font = self.CELL_FONT
            row += 1
        ws.column_dimensions["A"].width = 32
        ws.column_dimensions["B"].width = 24

    def _add_line_chart(self, ws, df: pd.DataFrame, header_row: int, x_col: str, y_col: str, series_col: str) -> None:
        chart = LineChart()
        chart.title = f"{y_col} by {x_col}"
        chart.x_axis.title = x_col
        chart.y_axis.title = y_col
        chart.width, chart.height = 20, 12

        columns = list(df.columns)
        x_idx = columns.index(x_col) + 1
        y_idx = columns.index(y_col) + 1
        # rows of one series are contiguous in every table we write
        positions = df.reset_index(drop=True).groupby(series_col, sort=False).indices
        for name, rows in positions.items():
            first = header_row + 1 + int(rows[0])
            last = header_row + 1 + int(rows[-1])
            data = Reference(ws, min_col=y_idx, min_row=first, max_row=last)
            chart.add_data(data, titles_from_data=False)
            chart.series[-1].tx = SeriesLabel(v=str(name))
            if len(chart.series) == 1:
                chart.set_categories(Reference(ws, min_col=x_idx, min_row=first, max_row=last))

        ws.add_chart(chart, f"{get_column_letter(len(columns) + 2)}{header_row}")

    def save(self) -> str:
        """Save the workbook and return the output path."""
        os.makedirs(os.path.dirname(self.output_path), exist_ok=True)
        self.wb.save(self.output_path)
        return self.output_path
