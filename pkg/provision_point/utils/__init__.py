from .tables import (
    accuracy_frame,
    condition_frame,
    equilibrium_frame,
    format_table,
    gas_frame,
    outcome_frame,
    violations_frame,
    write_csv,
)

__all__ = [
    "accuracy_frame",
    "condition_frame",
    "equilibrium_frame",
    "format_table",
    "gas_frame",
    "outcome_frame",
    "violations_frame",
    "write_csv",
]
