"""
Per-contribution gas accounting for the on-chain refund computations.

Each scheme evaluates its refund with a fixed mix of arithmetic opcodes;
PPRG keeps the previous GP term in storage, so it multiplies instead of
exponentiating.
"""

import logging
import math
from dataclasses import dataclass, field

from provision_point.errors import DomainError, InvalidParameter, UnsupportedMechanism

logger = logging.getLogger(__name__)

EXP_MODES = ("bytes", "log2")


@dataclass(frozen=True)
class OpCostTable:
    add: int = 3
    sub: int = 3
    mul: int = 5
    div: int = 5
    exp_base: int = 10
    exp_per_unit: int = 10
    log_base: int = 365
    log_per_byte: int = 8
    exp_mode: str = "bytes"

    def __post_init__(self):
        costs = (self.add, self.sub, self.mul, self.div,
                 self.exp_base, self.exp_per_unit, self.log_base, self.log_per_byte)
        if any(c < 0 for c in costs):
            raise InvalidParameter("Opcode costs must be >= 0")
        if self.exp_mode not in EXP_MODES:
            raise InvalidParameter(f"Unknown exp_mode '{self.exp_mode}'. Supported: {', '.join(EXP_MODES)}")


DEFAULT_COSTS = OpCostTable()

# Opcode counts per contribution.
OP_COUNTS = {
    "pps": {"add": 2, "sub": 2, "mul": 2, "div": 2, "exp": 2, "log": 2},
    "pprg": {"add": 2, "mul": 2, "div": 1},
    "ppre": {"add": 2, "mul": 2, "div": 1, "exp": 1},
    "pprp": {"add": 2, "mul": 3, "div": 2},
}

# Published totals, kept verbatim.
PUBLISHED_TOTALS = {
    "pps": (407, "at least"),
    "pprg": (21, ""),
    "ppre": (31, "at least"),
    "pprp": (31, ""),
}


@dataclass(frozen=True)
class GasReport:
    mechanism: str
    op_counts: dict[str, int] = field(default_factory=dict)
    total_min: float = 0
    total_evaluated: float = 0
    published_total: int = 0
    published_note: str = ""

    @property
    def consistent(self) -> bool:
        return self.total_min == self.published_total


def exp_gas(x: int, table: OpCostTable = DEFAULT_COSTS) -> float:
    """
    Cost of EXP with exponent x: 10 + 10*L(x).

    In "bytes" mode L(x) is the byte length of x minus one, so exp_gas(1) = 10;
    in "log2" mode L(x) = log2(x).
    """
    if x < 1:
        raise DomainError(f"EXP operand must be >= 1, got {x}")
    if table.exp_mode == "log2":
        units = math.log2(x)
    else:
        units = (int(x).bit_length() + 7) // 8 - 1
    return table.exp_base + table.exp_per_unit * units


def log_gas(num_bytes: int, table: OpCostTable = DEFAULT_COSTS) -> int:
    """Cost of LOG over num_bytes of data: 365 + 8*bytes."""
    if num_bytes < 0:
        raise DomainError(f"LOG byte count must be >= 0, got {num_bytes}")
    return table.log_base + table.log_per_byte * num_bytes


def _op_cost(op: str, table: OpCostTable, exp_operand: int, log_bytes: int) -> float:
    if op == "exp":
        return exp_gas(exp_operand, table)
    if op == "log":
        return log_gas(log_bytes, table)
    return getattr(table, op)


def mechanism_gas(
    mech: str,
    table: OpCostTable = DEFAULT_COSTS,
    exp_operand: int = 1,
    log_bytes: int = 0,
) -> GasReport:
    """
    Gas report for one refund computation of mech.

    total_min prices EXP and LOG at their floors; total_evaluated prices
    them for the given exponent and logged byte count.
    """
    key = mech.strip().lower()
    if key not in OP_COUNTS:
        raise UnsupportedMechanism(
            f"No gas model for '{mech}'. Supported: {', '.join(OP_COUNTS)}"
        )
    counts = OP_COUNTS[key]
    total_min = sum(n * _op_cost(op, table, 1, 0) for op, n in counts.items())
    total_evaluated = sum(n * _op_cost(op, table, exp_operand, log_bytes) for op, n in counts.items())
    published_total, note = PUBLISHED_TOTALS[key]

    report = GasReport(
        mechanism=key,
        op_counts=dict(counts),
        total_min=total_min,
        total_evaluated=total_evaluated,
        published_total=published_total,
        published_note=note,
    )
    if not report.consistent:
        logger.info("%s: computed floor %s differs from the published total %s",
                    key, total_min, published_total)
    return report


def gas_table(table: OpCostTable = DEFAULT_COSTS, exp_operand: int = 1, log_bytes: int = 0) -> list[GasReport]:
    return [mechanism_gas(m, table, exp_operand, log_bytes) for m in OP_COUNTS]
