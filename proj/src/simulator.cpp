#include "matchelicit/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "matchelicit/errors.hpp"
#include "matchelicit/matcher.hpp"
#include "matchelicit/probmatch.hpp"

namespace matchelicit {

namespace {

bool needs_prob_match(StrategyKind strategy) {
  return strategy == StrategyKind::kYbarMax || strategy == StrategyKind::kYbarEntropy;
}

bool needs_map_match(StrategyKind strategy) {
  return strategy == StrategyKind::kYMax;
}

MaskGrid candidate_mask(const SuitabilityMatrix& work) {
  MaskGrid mask(work.num_users(), work.num_items(), 0);
  for (int r = 0; r < work.num_users(); ++r) {
    for (int p = 0; p < work.num_items(); ++p) {
      mask(r, p) = work.ground_truth(r, p) && !work.observed(r, p) ? 1 : 0;
    }
  }
  return mask;
}

// Everything one querying step needs, rebuilt after each refit.
struct RoundContext {
  ScorePosterior posterior;
  ProbabilisticMatching prob;
  Matching map;
  SelectionContext selection;
};

RoundContext build_context(const BpmfModel& model, const SuitabilityMatrix& work,
                           StrategyKind strategy, const SimConfig& config, RngStream& prob_rng) {
  RoundContext ctx;
  ctx.posterior = model.predictive_moments(work);
  ctx.selection.posterior = &ctx.posterior;
  if (needs_prob_match(strategy)) {
    ctx.prob = estimate_prob_matching(model, work, config.constraints,
                                      config.num_prob_samples, prob_rng);
    ctx.selection.prob_match = &ctx.prob;
  }
  if (needs_map_match(strategy)) {
    ctx.map = map_matching(ctx.posterior, config.constraints);
    ctx.selection.map_match = &ctx.map;
  }
  ctx.selection.candidate = candidate_mask(work);
  ctx.selection.prob_threshold = config.prob_threshold;
  return ctx;
}

// Reveal the batch, asserting query legality against the dataset.
int reveal_queries(SuitabilityMatrix& work, const std::vector<Query>& queries) {
  int fallbacks = 0;
  for (const Query& q : queries) {
    if (!work.ground_truth(q.user, q.item) || work.observed(q.user, q.item)) {
      throw std::logic_error("run_trial: illegal query (" + std::to_string(q.user) + "," +
                             std::to_string(q.item) + ")");
    }
    work.set_observed(q.user, q.item);
    fallbacks += q.fallback ? 1 : 0;
  }
  return fallbacks;
}

ModelConfig select_model_config(const SuitabilityMatrix& dataset, const InitMasks& masks,
                                const SimConfig& config, RngStream& rng) {
  if (!config.hyper_search || config.hyper_grid.empty()) {
    return config.model;
  }
  // Fit on train-only entries, score by RMSE on the validation entries.
  SuitabilityMatrix train(dataset);
  MaskGrid train_mask = masks.observed;
  for (int r = 0; r < train_mask.rows(); ++r) {
    for (int p = 0; p < train_mask.cols(); ++p) {
      if (masks.validation(r, p)) {
        train_mask(r, p) = 0;
      }
    }
  }
  train.set_observed_mask(train_mask);

  double best_rmse = std::numeric_limits<double>::infinity();
  ModelConfig best = config.model;
  for (std::size_t i = 0; i < config.hyper_grid.size(); ++i) {
    RngStream fit_rng = rng.child(i);
    const BpmfModel model = BpmfModel::fit(train, config.hyper_grid[i], fit_rng);
    const ScorePosterior posterior = model.predictive_moments(train);
    double sq = 0.0;
    int count = 0;
    for (int r = 0; r < train_mask.rows(); ++r) {
      for (int p = 0; p < train_mask.cols(); ++p) {
        if (masks.validation(r, p)) {
          const double e = posterior.mean(r, p) - dataset.value(r, p);
          sq += e * e;
          ++count;
        }
      }
    }
    const double rmse = count > 0 ? std::sqrt(sq / count) : 0.0;
    if (rmse < best_rmse) {
      best_rmse = rmse;
      best = config.hyper_grid[i];
    }
  }
  return best;
}

}  // namespace

void SimConfig::validate() const {
  if (batch_size < 1) {
    throw std::invalid_argument("SimConfig: batch_size must be >= 1");
  }
  if (num_rounds < 0 || num_trials < 1) {
    throw std::invalid_argument("SimConfig: num_rounds/num_trials out of range");
  }
  if (init_observed < 0 || init_train < 0 || init_validation < 0 ||
      init_train + init_validation != init_observed) {
    throw std::invalid_argument("SimConfig: init_train + init_validation must equal init_observed");
  }
  if (num_prob_samples < 1) {
    throw std::invalid_argument("SimConfig: num_prob_samples must be >= 1");
  }
  constraints.validate();
  model.validate();
  for (const ModelConfig& m : hyper_grid) {
    m.validate();
  }
}

InitMasks init_observed_masks(const SuitabilityMatrix& dataset, const SimConfig& config,
                              RngStream& rng) {
  const int n = dataset.num_users();
  const int m = dataset.num_items();
  InitMasks masks{MaskGrid(n, m, 0), MaskGrid(n, m, 0)};
  for (int r = 0; r < n; ++r) {
    std::vector<int> available;
    for (int p = 0; p < m; ++p) {
      if (dataset.ground_truth(r, p)) {
        available.push_back(p);
      }
    }
    const int take = std::min<int>(config.init_observed, static_cast<int>(available.size()));
    for (int i = 0; i < take; ++i) {
      const std::size_t j = i + rng.uniform_int(available.size() - i);
      std::swap(available[i], available[j]);
    }
    // Train/validation split keeps the configured ratio, halves rounding
    // toward train.
    int train_count = take;
    if (config.init_observed > 0) {
      const double ratio = static_cast<double>(config.init_train) / config.init_observed;
      train_count = std::min(take, static_cast<int>(std::floor(take * ratio + 0.5)));
    }
    for (int i = 0; i < take; ++i) {
      masks.observed(r, available[i]) = 1;
      if (i >= train_count) {
        masks.validation(r, available[i]) = 1;
      }
    }
  }
  return masks;
}

double evaluate_objective(const ScorePosterior& posterior, const SuitabilityMatrix& dataset,
                          const MatchConstraints& constraints) {
  const Matching matching = solve_matching(MatchInstance{posterior.mean, constraints});
  return objective_value(matching, dataset, /*restrict_to_ground_truth=*/true);
}

std::vector<RoundRecord> run_trial(const SuitabilityMatrix& dataset, StrategyKind strategy,
                                   const SimConfig& config, std::uint64_t trial_seed) {
  config.validate();
  if (!check_feasible(dataset.num_users(), dataset.num_items(), config.constraints)) {
    throw InfeasibleError("run_trial: constraints are infeasible for this dataset");
  }

  const RngStream root(trial_seed);
  RngStream init_rng = root.child(0);
  const InitMasks masks = init_observed_masks(dataset, config, init_rng);

  SuitabilityMatrix work(dataset);
  work.set_observed_mask(masks.observed);

  RngStream hyper_rng = root.child(1);
  SimConfig effective = config;
  effective.model = select_model_config(dataset, masks, config, hyper_rng);

  // Shared across strategies: paired trials use identical masks and seeds,
  // so round-0 evaluations coincide exactly and later differences are
  // common-random-number paired.
  const RngStream loop_rng = root.child(2);
  const int n = dataset.num_users();

  std::vector<RoundRecord> records;
  records.reserve(config.num_rounds + 1);
  int fallback_this_round = 0;

  for (int round = 0; round <= config.num_rounds; ++round) {
    const RngStream round_rng = loop_rng.child(round);
    RngStream fit_rng = round_rng.child(0);
    const BpmfModel model = BpmfModel::fit(work, effective.model, fit_rng);
    const ScorePosterior posterior = model.predictive_moments(work);

    RoundRecord record;
    record.round = round;
    record.strategy = strategy;
    record.num_observed = work.count_observed();
    record.cum_queries_per_user = static_cast<double>(record.num_observed) / n;
    record.objective = evaluate_objective(posterior, dataset, config.constraints);
    record.fallback_count = fallback_this_round;
    records.push_back(record);

    if (round == config.num_rounds) {
      break;
    }

    fallback_this_round = 0;
    if (config.mode == SimConfig::Mode::kParallel) {
      RngStream prob_rng = round_rng.child(1);
      const RoundContext ctx = build_context(model, work, strategy, effective, prob_rng);
      std::vector<Query> all_queries;
      for (int r = 0; r < n; ++r) {
        RngStream select_rng = round_rng.child(2 + r).child(2);
        const std::vector<Query> queries =
            select_batch(strategy, ctx.selection, r, config.batch_size, select_rng);
        all_queries.insert(all_queries.end(), queries.begin(), queries.end());
      }
      fallback_this_round = reveal_queries(work, all_queries);
    } else {
      // Sequential round robin: refit and rebuild the context after each
      // user's batch so earlier answers steer later queries.
      for (int r = 0; r < n; ++r) {
        const RngStream user_rng = round_rng.child(2 + r);
        RngStream refit_rng = user_rng.child(0);
        RngStream prob_rng = user_rng.child(1);
        RngStream select_rng = user_rng.child(2);
        const BpmfModel user_model =
            r == 0 ? model : BpmfModel::fit(work, effective.model, refit_rng);
        const RoundContext ctx =
            build_context(user_model, work, strategy, effective, prob_rng);
        const std::vector<Query> queries =
            select_batch(strategy, ctx.selection, r, config.batch_size, select_rng);
        fallback_this_round += reveal_queries(work, queries);
      }
    }
  }
  return records;
}

double ComparisonResult::diff_vs_random(const RoundRecord& record) const {
  for (const RoundRecord& other : records) {
    if (other.strategy == StrategyKind::kRandom && other.trial == record.trial &&
        other.round == record.round) {
      return record.objective - other.objective;
    }
  }
  throw std::logic_error("diff_vs_random: missing paired Random record");
}

ComparisonResult compare_strategies(const SuitabilityMatrix& dataset, const SimConfig& config) {
  config.validate();
  if (std::find(config.strategies.begin(), config.strategies.end(), StrategyKind::kRandom) ==
      config.strategies.end()) {
    throw std::invalid_argument("compare_strategies: the Random baseline must be configured");
  }

  const RngStream seed_root(config.base_seed);
  ComparisonResult result;
  // Random runs first within each trial so differences can be paired as
  // records stream in; duplicate strategy entries collapse (they would be
  // identical runs anyway).
  std::vector<StrategyKind> ordered;
  ordered.push_back(StrategyKind::kRandom);
  for (const StrategyKind kind : config.strategies) {
    if (std::find(ordered.begin(), ordered.end(), kind) == ordered.end()) {
      ordered.push_back(kind);
    }
  }

  std::map<std::pair<int, int>, double> random_objective;  // (trial, round)
  std::map<std::pair<int, int>, std::vector<double>> diffs;       // (strategy idx, round)
  std::map<std::pair<int, int>, std::vector<double>> objectives;  // ditto
  std::map<std::pair<int, int>, std::vector<double>> fallbacks;
  std::map<std::pair<int, int>, std::vector<double>> cums;

  for (int trial = 0; trial < config.num_trials; ++trial) {
    const std::uint64_t trial_seed = seed_root.child(trial).seed();
    for (std::size_t s = 0; s < ordered.size(); ++s) {
      std::vector<RoundRecord> rounds = run_trial(dataset, ordered[s], config, trial_seed);
      for (RoundRecord& record : rounds) {
        record.trial = trial;
        if (ordered[s] == StrategyKind::kRandom) {
          random_objective[{trial, record.round}] = record.objective;
        }
        const double diff = record.objective - random_objective.at({trial, record.round});
        const auto key = std::make_pair(static_cast<int>(s), record.round);
        diffs[key].push_back(diff);
        objectives[key].push_back(record.objective);
        fallbacks[key].push_back(record.fallback_count);
        cums[key].push_back(record.cum_queries_per_user);
        result.records.push_back(record);
      }
    }
  }

  for (std::size_t s = 0; s < ordered.size(); ++s) {
    for (int round = 0; round <= config.num_rounds; ++round) {
      const auto key = std::make_pair(static_cast<int>(s), round);
      const auto& d = diffs.at(key);
      const auto mean = [](const std::vector<double>& xs) {
        double acc = 0.0;
        for (const double x : xs) {
          acc += x;
        }
        return acc / xs.size();
      };
      StrategyRoundSummary row;
      row.strategy = ordered[s];
      row.round = round;
      row.mean_cum_queries = mean(cums.at(key));
      row.mean_objective = mean(objectives.at(key));
      row.mean_diff_vs_random = mean(d);
      row.mean_fallback = mean(fallbacks.at(key));
      if (d.size() > 1) {
        const double mu = row.mean_diff_vs_random;
        double sq = 0.0;
        for (const double x : d) {
          sq += (x - mu) * (x - mu);
        }
        row.stderr_diff = std::sqrt(sq / (d.size() - 1)) / std::sqrt(static_cast<double>(d.size()));
      }
      result.summary.push_back(row);
    }
  }
  return result;
}

}  // namespace matchelicit
