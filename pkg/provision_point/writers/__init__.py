from .excel_writer import ExcelWriter
from .pdf_writer import PDFWriter
from .svg_plotter import comparison_schemes, plot_refund_evolution, refund_evolution

__all__ = ["ExcelWriter", "PDFWriter", "comparison_schemes", "plot_refund_evolution", "refund_evolution"]
