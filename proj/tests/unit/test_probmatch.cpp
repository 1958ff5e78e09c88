#include <doctest.h>

#include <cmath>

#include "matchelicit/errors.hpp"
#include "matchelicit/dataio.hpp"
#include "matchelicit/matcher.hpp"
#include "matchelicit/probmatch.hpp"
#include "matchelicit/rng.hpp"
#include "matchelicit/scoremodel.hpp"

using namespace matchelicit;

namespace {

// Agreement between a probabilistic matching (rounded) and a hard matching.
double agreement(const ProbabilisticMatching& ybar, const Matching& y) {
  int agree = 0;
  for (int r = 0; r < y.assign.rows(); ++r) {
    for (int p = 0; p < y.assign.cols(); ++p) {
      const int rounded = ybar.prob(r, p) >= 0.5 ? 1 : 0;
      agree += rounded == y.assign(r, p) ? 1 : 0;
    }
  }
  return static_cast<double>(agree) / static_cast<double>(y.assign.size());
}

BpmfModel toy_model(const SuitabilityMatrix& matrix, std::uint64_t seed) {
  ModelConfig config;
  config.latent_dim = 2;
  config.alpha = 4.0;
  config.beta0_u = 1.0;
  config.beta0_v = 1.0;
  config.burn_in = 30;
  config.num_collected = 20;
  config.thinning = 1;
  RngStream rng(seed);
  return BpmfModel::fit(matrix, config, rng);
}

}  // namespace

TEST_CASE("single-sample estimate is one LP solution") {
  auto [matrix, constraints] = toy_fig2(3);
  for (int r = 0; r < 3; ++r) {
    for (int p = 0; p < 6; ++p) {
      if ((r + p) % 2 == 0) {
        matrix.set_observed(r, p);
      }
    }
  }
  const BpmfModel model = toy_model(matrix, 19);
  RngStream rng(5);
  const ProbabilisticMatching ybar = estimate_prob_matching(model, matrix, constraints, 1, rng);
  CHECK(ybar.num_samples == 1);
  for (const double v : ybar.prob.data()) {
    CHECK((v == 0.0 || v == 1.0));
  }
  ybar.validate_bounds(constraints);
}

TEST_CASE("estimates respect bounds and replay seeds") {
  auto [matrix, constraints] = toy_fig2(4);
  for (int r = 0; r < 3; ++r) {
    for (int p = 0; p < 6; ++p) {
      if (p != r) {
        matrix.set_observed(r, p);
      }
    }
  }
  const BpmfModel model = toy_model(matrix, 23);
  RngStream a(9);
  RngStream b(9);
  const ProbabilisticMatching ya = estimate_prob_matching(model, matrix, constraints, 50, a);
  const ProbabilisticMatching yb = estimate_prob_matching(model, matrix, constraints, 50, b);
  CHECK(ya.prob == yb.prob);
  ya.validate_bounds(constraints);

  // Row/column sums are exact averages of feasible integral sums.
  for (int r = 0; r < 3; ++r) {
    double s = 0.0;
    for (int p = 0; p < 6; ++p) {
      s += ya.prob(r, p);
    }
    CHECK(s == doctest::Approx(2.0).epsilon(1e-12));
  }
  for (int p = 0; p < 6; ++p) {
    double s = 0.0;
    for (int r = 0; r < 3; ++r) {
      s += ya.prob(r, p);
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("low variance concentrates on the MAP matching") {
  auto [matrix, constraints] = toy_fig2(6);
  const ScorePosterior tight{matrix.values(), ScoreGrid(3, 6, 1e-9)};
  const Matching map = map_matching(tight, constraints);

  RngStream rng(10);
  const ProbabilisticMatching ybar =
      estimate_prob_matching_gaussian(tight, constraints, 50, rng);
  CHECK(agreement(ybar, map) >= 0.99);

  // Spread variance keeps bounds but diversifies: strictly lower agreement.
  const ScorePosterior loose{matrix.values(), ScoreGrid(3, 6, 1.0)};
  RngStream rng2(10);
  const ProbabilisticMatching spread =
      estimate_prob_matching_gaussian(loose, constraints, 50, rng2);
  spread.validate_bounds(constraints);
  CHECK(agreement(spread, map) < agreement(ybar, map));
}

TEST_CASE("map_matching is the solve of the mean grid") {
  const ScorePosterior posterior{ScoreGrid::from_rows({{5.0, 1.0}, {0.5, 4.0}}),
                                 ScoreGrid(2, 2, 0.3)};
  const MatchConstraints constraints{1, 1, 1, 1};
  const Matching map = map_matching(posterior, constraints);
  const Matching direct = solve_matching(MatchInstance{posterior.mean, constraints});
  CHECK(map.assign == direct.assign);
  CHECK(map.assign(0, 0) == 1);
  CHECK(map.assign(1, 1) == 1);
}

TEST_CASE("map_matching agrees with brute force on the toy shape") {
  auto [matrix, constraints] = toy_fig2(12);
  const ScorePosterior posterior{matrix.values(), ScoreGrid(3, 6, 0.5)};
  const Matching map = map_matching(posterior, constraints);
  const Matching oracle = brute_force_matching(MatchInstance{matrix.values(), constraints});
  const auto objective = [&](const Matching& y) {
    double acc = 0.0;
    for (int r = 0; r < 3; ++r) {
      for (int p = 0; p < 6; ++p) {
        acc += y.assign(r, p) ? matrix.value(r, p) : 0.0;
      }
    }
    return acc;
  };
  CHECK(objective(map) == doctest::Approx(objective(oracle)).epsilon(1e-9));
}

TEST_CASE("infeasible constraints propagate") {
  const ScorePosterior posterior{ScoreGrid(2, 2, 1.0), ScoreGrid(2, 2, 1.0)};
  RngStream rng(1);
  CHECK_THROWS_AS(
      estimate_prob_matching_gaussian(posterior, MatchConstraints{0, 1, 2, 2}, 5, rng),
      InfeasibleError);
  CHECK_THROWS_AS(map_matching(posterior, MatchConstraints{0, 1, 2, 2}), InfeasibleError);
}
