from provision_point.simulation.policies import (
    Decision,
    EquilibriumPolicy,
    FreeRiderMixPolicy,
    LearnerPolicy,
    Observation,
    pps_indifference_amount,
)
from provision_point.simulation.q_learner import ACTIONS, QLearner, epsilon_at
from provision_point.simulation.simulator import (
    AccuracyResult,
    AccuracyRow,
    SimConfig,
    calibrate_liquidity,
    learning_reward,
    play,
    run_budget,
    run_game,
    run_spec,
    sample_players,
    spearman_trend,
    sweep_multipliers,
    train_and_evaluate,
)
