#include "matchelicit/probmatch.hpp"

#include <cmath>
#include <stdexcept>

#include "matchelicit/matcher.hpp"

namespace matchelicit {

namespace {

template <typename DrawMatrix>
ProbabilisticMatching average_sampled_matchings(int n, int m, const MatchConstraints& constraints,
                                                int num_samples, DrawMatrix&& draw_matrix) {
  if (num_samples < 1) {
    throw std::invalid_argument("estimate_prob_matching: num_samples must be >= 1");
  }
  ProbabilisticMatching result{ScoreGrid(n, m, 0.0), num_samples};
  for (int t = 0; t < num_samples; ++t) {
    const MatchInstance instance{draw_matrix(t), constraints};
    const Matching matching = solve_matching(instance);
    for (int r = 0; r < n; ++r) {
      for (int p = 0; p < m; ++p) {
        if (matching.assign(r, p)) {
          result.prob(r, p) += 1.0;
        }
      }
    }
  }
  const double inv = 1.0 / num_samples;
  for (double& v : result.prob.data()) {
    v *= inv;
  }
  result.validate_bounds(constraints);
  return result;
}

}  // namespace

ProbabilisticMatching estimate_prob_matching(const BpmfModel& model,
                                             const SuitabilityMatrix& scores,
                                             const MatchConstraints& constraints,
                                             int num_samples, RngStream& rng) {
  return average_sampled_matchings(
      scores.num_users(), scores.num_items(), constraints, num_samples,
      [&](int) { return model.sample_score_matrix(scores, rng); });
}

ProbabilisticMatching estimate_prob_matching_gaussian(const ScorePosterior& posterior,
                                                      const MatchConstraints& constraints,
                                                      int num_samples, RngStream& rng) {
  const int n = posterior.mean.rows();
  const int m = posterior.mean.cols();
  if (!posterior.mean.same_shape(posterior.variance)) {
    throw std::invalid_argument("estimate_prob_matching_gaussian: mean/variance shape mismatch");
  }
  return average_sampled_matchings(n, m, constraints, num_samples, [&](int) {
    ScoreGrid draw(n, m, 0.0);
    for (int r = 0; r < n; ++r) {
      for (int p = 0; p < m; ++p) {
        draw(r, p) = posterior.mean(r, p) + std::sqrt(posterior.variance(r, p)) * rng.normal();
      }
    }
    return draw;
  });
}

Matching map_matching(const ScorePosterior& posterior, const MatchConstraints& constraints) {
  return solve_matching(MatchInstance{posterior.mean, constraints});
}

}  // namespace matchelicit
