import logging

import pytest

from provision_point.analysis.gas_cost import (
    DEFAULT_COSTS,
    OpCostTable,
    exp_gas,
    gas_table,
    log_gas,
    mechanism_gas,
)
from provision_point.errors import DomainError, InvalidParameter, UnsupportedMechanism


class TestOpcodes:

    def test_exp_floor(self):
        assert exp_gas(1) == 10

    def test_exp_byte_length(self):
        assert exp_gas(255) == 10
        assert exp_gas(256) == 20
        assert exp_gas(2 ** 16) == 30

    def test_exp_log2_mode(self):
        table = OpCostTable(exp_mode="log2")
        assert exp_gas(1, table) == pytest.approx(10.0)
        assert exp_gas(256, table) == pytest.approx(90.0)

    def test_log(self):
        assert log_gas(0) == 365
        assert log_gas(32) == 621

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            exp_gas(0)
        with pytest.raises(DomainError):
            log_gas(-1)

    def test_table_validation(self):
        with pytest.raises(InvalidParameter):
            OpCostTable(exp_mode="words")
        with pytest.raises(InvalidParameter):
            OpCostTable(add=-1)


class TestMechanismGas:

    @pytest.mark.parametrize("mech, total", [("pprg", 21), ("ppre", 31), ("pprp", 31), ("pps", 782)])
    def test_floor_totals(self, mech, total):
        assert mechanism_gas(mech).total_min == total

    def test_published_totals_carried(self):
        reports = {r.mechanism: r for r in gas_table()}
        assert reports["pprg"].published_total == 21
        assert reports["ppre"].published_note == "at least"
        assert reports["pps"].published_total == 407
        assert reports["pprg"].consistent and reports["pprp"].consistent and reports["ppre"].consistent

    def test_pps_floor_disagrees_with_published_total(self, caplog):
        with caplog.at_level(logging.INFO, logger="provision_point.analysis.gas_cost"):
            report = mechanism_gas("PPS")
        assert not report.consistent
        assert "differs from the published total" in caplog.text

    def test_pprg_avoids_exp(self):
        assert "exp" not in mechanism_gas("pprg").op_counts
        assert mechanism_gas("ppre").op_counts["exp"] == 1

    def test_cost_ordering(self):
        totals = {r.mechanism: r.total_min for r in gas_table()}
        assert totals["pprg"] < totals["ppre"] < totals["pps"]
        assert totals["pprg"] < totals["pprp"] < totals["pps"]

    def test_evaluated_total_grows_with_operands(self):
        report = mechanism_gas("pps", DEFAULT_COSTS, exp_operand=256, log_bytes=32)
        assert report.total_evaluated == 782 + 2 * 10 + 2 * 256
        assert report.total_min == 782

    def test_unknown_mechanism(self):
        with pytest.raises(UnsupportedMechanism):
            mechanism_gas("ppm")
