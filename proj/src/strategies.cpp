#include "matchelicit/strategies.hpp"

#include <algorithm>
#include <stdexcept>

#include "matchelicit/linalg.hpp"

namespace matchelicit {

namespace {

void require_context(const SelectionContext& context, StrategyKind strategy) {
  const auto need = [&](bool present, const char* what) {
    if (!present) {
      throw std::invalid_argument("criterion_score: " + strategy_name(strategy) +
                                  " requires " + what);
    }
  };
  switch (strategy) {
    case StrategyKind::kRandom:
      break;
    case StrategyKind::kScoreEntropy:
    case StrategyKind::kScoreMax:
      need(context.posterior != nullptr, "a score posterior");
      break;
    case StrategyKind::kYMax:
      need(context.map_match != nullptr, "a MAP matching");
      need(context.posterior != nullptr, "a score posterior");
      break;
    case StrategyKind::kYbarMax:
      need(context.prob_match != nullptr, "a probabilistic matching");
      need(context.posterior != nullptr, "a score posterior");
      break;
    case StrategyKind::kYbarEntropy:
      need(context.prob_match != nullptr, "a probabilistic matching");
      break;
  }
}

// Partial Fisher-Yates: choose `take` distinct elements uniformly, in place.
template <typename T>
void draw_prefix(std::vector<T>& pool, std::size_t take, RngStream& rng) {
  for (std::size_t i = 0; i < take && i + 1 < pool.size(); ++i) {
    const std::size_t j = i + rng.uniform_int(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
}

}  // namespace

std::string strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kRandom:
      return "random";
    case StrategyKind::kScoreEntropy:
      return "se";
    case StrategyKind::kScoreMax:
      return "sm";
    case StrategyKind::kYMax:
      return "ym";
    case StrategyKind::kYbarMax:
      return "ybm";
    case StrategyKind::kYbarEntropy:
      return "ybe";
  }
  throw std::invalid_argument("strategy_name: unknown kind");
}

StrategyKind strategy_from_name(std::string_view name) {
  for (const StrategyKind kind : all_strategies()) {
    if (strategy_name(kind) == name) {
      return kind;
    }
  }
  throw std::invalid_argument("unknown strategy '" + std::string(name) +
                              "' (expected one of: random, se, sm, ym, ybm, ybe)");
}

const std::vector<StrategyKind>& all_strategies() {
  static const std::vector<StrategyKind> kinds = {
      StrategyKind::kRandom,  StrategyKind::kScoreEntropy, StrategyKind::kScoreMax,
      StrategyKind::kYMax,    StrategyKind::kYbarMax,      StrategyKind::kYbarEntropy,
  };
  return kinds;
}

std::optional<double> criterion_score(StrategyKind strategy, const SelectionContext& context,
                                      int user, int item) {
  require_context(context, strategy);
  if (!context.candidate(user, item)) {
    throw std::invalid_argument("criterion_score: (" + std::to_string(user) + "," +
                                std::to_string(item) + ") is not a candidate pair");
  }
  switch (strategy) {
    case StrategyKind::kRandom:
      return 0.0;
    case StrategyKind::kScoreEntropy:
      return gaussian_entropy(context.posterior->variance(user, item));
    case StrategyKind::kScoreMax:
      return context.posterior->mean(user, item);
    case StrategyKind::kYMax:
      if (!context.map_match->assign(user, item)) {
        return std::nullopt;
      }
      return context.posterior->mean(user, item);
    case StrategyKind::kYbarMax: {
      const double prob = context.prob_match->prob(user, item);
      if (prob < context.prob_threshold) {
        return std::nullopt;
      }
      return prob * context.posterior->mean(user, item);
    }
    case StrategyKind::kYbarEntropy: {
      const double prob = context.prob_match->prob(user, item);
      if (prob < context.prob_threshold) {
        return std::nullopt;
      }
      return bernoulli_entropy(std::clamp(prob, 0.0, 1.0));
    }
  }
  throw std::invalid_argument("criterion_score: unknown strategy");
}

std::vector<Query> select_batch(StrategyKind strategy, const SelectionContext& context,
                                int user, int batch_size, RngStream& rng) {
  if (user < 0 || user >= context.candidate.rows()) {
    throw std::invalid_argument("select_batch: user index out of range");
  }
  if (batch_size < 1) {
    throw std::invalid_argument("select_batch: batch_size must be >= 1");
  }
  std::vector<int> candidates;
  for (int p = 0; p < context.candidate.cols(); ++p) {
    if (context.candidate(user, p)) {
      candidates.push_back(p);
    }
  }
  const std::size_t want = std::min<std::size_t>(batch_size, candidates.size());
  std::vector<Query> batch;
  batch.reserve(want);

  if (strategy == StrategyKind::kRandom) {
    draw_prefix(candidates, want, rng);
    for (std::size_t i = 0; i < want; ++i) {
      batch.push_back({user, candidates[i], false});
    }
    return batch;
  }

  std::vector<std::pair<double, int>> eligible;  // (score, item)
  std::vector<int> leftover;
  for (const int p : candidates) {
    if (const auto score = criterion_score(strategy, context, user, p)) {
      eligible.emplace_back(*score, p);
    } else {
      leftover.push_back(p);
    }
  }
  std::sort(eligible.begin(), eligible.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) {
      return a.first > b.first;
    }
    return a.second < b.second;
  });
  for (std::size_t i = 0; i < eligible.size() && batch.size() < want; ++i) {
    batch.push_back({user, eligible[i].second, false});
  }
  if (batch.size() < want) {
    draw_prefix(leftover, want - batch.size(), rng);
    for (std::size_t i = 0; batch.size() < want; ++i) {
      batch.push_back({user, leftover[i], true});
    }
  }
  return batch;
}

}  // namespace matchelicit
