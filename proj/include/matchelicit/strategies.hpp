#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "matchelicit/grid.hpp"
#include "matchelicit/rng.hpp"
#include "matchelicit/types.hpp"

namespace matchelicit {

enum class StrategyKind {
  kRandom,        // uniform over unobserved pairs (baseline)
  kScoreEntropy,  // SE: maximum predictive score entropy
  kScoreMax,      // SM: highest predicted score
  kYMax,          // YM: matched pairs of the MAP matching, by predicted score
  kYbarMax,       // YbarM: probability-weighted predicted score
  kYbarEntropy,   // YbarE: maximum match entropy
};

// Canonical short tokens: random, se, sm, ym, ybm, ybe.
std::string strategy_name(StrategyKind kind);
StrategyKind strategy_from_name(std::string_view name);
// All six kinds, in enum order.
const std::vector<StrategyKind>& all_strategies();

// Read-only inputs a strategy ranks over. prob_match is required for
// YbarM/YbarE, map_match for YM, posterior for everything except YbarE and
// Random. candidate marks queryable pairs: unobserved with ground truth.
struct SelectionContext {
  const ScorePosterior* posterior = nullptr;
  const ProbabilisticMatching* prob_match = nullptr;
  const Matching* map_match = nullptr;
  MaskGrid candidate;
  double prob_threshold = 0.01;  // pairs below this match probability fall back
};

// Ranking score of one candidate pair, or nullopt when the pair is ineligible
// for the criterion (unmatched for YM, match probability below the threshold
// for YbarM/YbarE). Pure: no side effects, repeated calls agree. The Random
// baseline ranks every candidate equally at 0.
std::optional<double> criterion_score(StrategyKind strategy, const SelectionContext& context,
                                      int user, int item);

// Greedy per-user batch: eligible candidates in descending criterion order
// (ties by ascending item index), then uniformly random distinct remaining
// candidates flagged fallback=true until batch_size or exhaustion. Random
// picks uniformly with fallback=false throughout.
std::vector<Query> select_batch(StrategyKind strategy, const SelectionContext& context,
                                int user, int batch_size, RngStream& rng);

}  // namespace matchelicit
