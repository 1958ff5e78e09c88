"""Match-constrained recommendation with active preference elicitation.

Thin wrapper over the compiled core: a degree-constrained bipartite matching
solver, a Bayesian low-rank score model, Monte-Carlo probabilistic matchings
and the query-selection strategies evaluated in a simulated elicitation loop.
"""

from ._core import (
    BpmfModel,
    ComparisonResult,
    InfeasibleError,
    MatchConstraints,
    Matching,
    ModelConfig,
    ModelError,
    NumericalError,
    ParseError,
    ProbabilisticMatching,
    Query,
    RngStream,
    RoundRecord,
    ScorePosterior,
    SelectionContext,
    SimConfig,
    StrategyKind,
    StrategyRoundSummary,
    SuitabilityMatrix,
    bernoulli_entropy,
    brute_force_matching,
    check_feasible,
    cholesky,
    compare_strategies,
    criterion_score,
    estimate_prob_matching,
    estimate_prob_matching_gaussian,
    evaluate_objective,
    gaussian_entropy,
    generate_synthetic,
    load_ratings_csv,
    map_matching,
    objective_value,
    run_trial,
    select_batch,
    solve_matching,
    strategy_from_name,
    strategy_name,
    toy_fig2,
)

__all__ = [
    "BpmfModel",
    "ComparisonResult",
    "InfeasibleError",
    "MatchConstraints",
    "Matching",
    "ModelConfig",
    "ModelError",
    "NumericalError",
    "ParseError",
    "ProbabilisticMatching",
    "Query",
    "RngStream",
    "RoundRecord",
    "ScorePosterior",
    "SelectionContext",
    "SimConfig",
    "StrategyKind",
    "StrategyRoundSummary",
    "SuitabilityMatrix",
    "bernoulli_entropy",
    "brute_force_matching",
    "check_feasible",
    "cholesky",
    "compare_strategies",
    "criterion_score",
    "estimate_prob_matching",
    "estimate_prob_matching_gaussian",
    "evaluate_objective",
    "gaussian_entropy",
    "generate_synthetic",
    "load_ratings_csv",
    "map_matching",
    "objective_value",
    "run_trial",
    "select_batch",
    "solve_matching",
    "strategy_from_name",
    "strategy_name",
    "toy_fig2",
]
