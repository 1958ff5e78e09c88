#pragma once

#include <cstdint>
#include <vector>

#include "matchelicit/scoremodel.hpp"
#include "matchelicit/strategies.hpp"
#include "matchelicit/types.hpp"

namespace matchelicit {

// Elicitation-loop configuration. Defaults follow the library's standard
// protocol: 20 initial observations per user split 15 train / 5 validation,
// batches of 10 queries, 50 matching samples.
struct SimConfig {
  int batch_size = 10;  // K queries per user per round
  int num_rounds = 10;

  enum class Mode { kParallel, kSequential };
  Mode mode = Mode::kParallel;

  int init_observed = 20;
  int init_train = 15;
  int init_validation = 5;

  int num_trials = 1;
  std::uint64_t base_seed = 1;
  std::vector<StrategyKind> strategies = {
      StrategyKind::kRandom, StrategyKind::kScoreEntropy, StrategyKind::kYMax,
      StrategyKind::kYbarMax, StrategyKind::kYbarEntropy};

  ModelConfig model;
  MatchConstraints constraints{1, 1, 1, 1};
  int num_prob_samples = 50;
  double prob_threshold = 0.01;

  // Optional round-0 hyperparameter pass: pick the grid config with the best
  // validation RMSE, then fold validation entries into the observed set.
  bool hyper_search = false;
  std::vector<ModelConfig> hyper_grid;

  void validate() const;
};

// One recorded elicitation round. Round 0 is the initial state; round t > 0
// reflects the model refit after the t-th batch of reveals.
struct RoundRecord {
  int trial = 0;
  int round = 0;
  StrategyKind strategy = StrategyKind::kRandom;
  double cum_queries_per_user = 0.0;  // mean observed entries per user
  double objective = 0.0;
  int fallback_count = 0;  // fall-back queries issued in this round
  int num_observed = 0;
};

struct InitMasks {
  MaskGrid observed;    // train plus validation entries
  MaskGrid validation;  // subset of observed held out for the hyper pass
};

// Per user, uniformly samples init_observed ground-truth entries without
// replacement (all of them if the user has fewer), splitting train/validation
// by the configured ratio with halves rounding toward train.
InitMasks init_observed_masks(const SuitabilityMatrix& dataset, const SimConfig& config,
                              RngStream& rng);

// Matching quality of a posterior: solves on the posterior-mean grid and
// scores the result against the true dataset values, restricted to ground
// truth.
double evaluate_objective(const ScorePosterior& posterior, const SuitabilityMatrix& dataset,
                          const MatchConstraints& constraints);

// One full elicitation run for one strategy. Derivations from trial_seed:
// child(0) seeds the initial masks, child(1) the optional hyper pass, and
// child(2) the query/refit loop. All are strategy-independent: paired trials
// share masks and seeds, so strategy differences are common-random-number
// paired and round-0 evaluations coincide exactly.
std::vector<RoundRecord> run_trial(const SuitabilityMatrix& dataset, StrategyKind strategy,
                                   const SimConfig& config, std::uint64_t trial_seed);

struct StrategyRoundSummary {
  StrategyKind strategy;
  int round = 0;
  double mean_cum_queries = 0.0;
  double mean_objective = 0.0;
  double mean_diff_vs_random = 0.0;
  double stderr_diff = 0.0;  // standard error over trials of the paired difference
  double mean_fallback = 0.0;
};

struct ComparisonResult {
  std::vector<RoundRecord> records;  // every (strategy, trial, round)
  std::vector<StrategyRoundSummary> summary;

  // objective_vs_random for one record, from the paired Random run.
  double diff_vs_random(const RoundRecord& record) const;
};

// Runs num_trials paired trials per configured strategy (trial i of every
// strategy shares seeds and hence the initial observed mask) and aggregates
// per (strategy, round) statistics against the Random baseline, which must be
// among the configured strategies.
ComparisonResult compare_strategies(const SuitabilityMatrix& dataset, const SimConfig& config);

}  // namespace matchelicit
