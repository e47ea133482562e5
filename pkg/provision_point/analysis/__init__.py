from provision_point.analysis.conditions import (
    ConditionReport,
    RaceReport,
    SampleSpec,
    Violation,
    analytic_contribution_slope,
    check_contribution_monotonicity,
    check_time_monotonicity,
    claimed_contribution_slope,
    detect_race_condition,
    expected_pattern,
    run_condition_suite,
)
from provision_point.analysis.equilibrium import (
    Binding,
    BudgetBound,
    EquilibriumCap,
    equilibrium_cap,
    equilibrium_caps,
    equilibrium_profile,
    gp_tail,
    max_budget,
    rationality_slack,
    refund_weight_sum,
)
from provision_point.analysis.gas_cost import (
    DEFAULT_COSTS,
    GasReport,
    OpCostTable,
    exp_gas,
    gas_table,
    log_gas,
    mechanism_gas,
)
