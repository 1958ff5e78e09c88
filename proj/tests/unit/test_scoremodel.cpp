#include <doctest.h>

#include <cmath>
#include <vector>

#include "matchelicit/errors.hpp"
#include "matchelicit/rng.hpp"
#include "matchelicit/scoremodel.hpp"

using namespace matchelicit;

namespace {

// Rank-1 5x5 test matrix from fixed factor vectors.
SuitabilityMatrix rank1_matrix() {
  const std::vector<double> u = {0.5, 1.0, 1.5, 2.0, 2.5};
  const std::vector<double> v = {1.0, 0.8, -0.6, 1.2, -1.0};
  ScoreGrid values(5, 5);
  for (int r = 0; r < 5; ++r) {
    for (int p = 0; p < 5; ++p) {
      values(r, p) = u[r] * v[p];
    }
  }
  return SuitabilityMatrix::dense(values);
}

ModelConfig rank1_config() {
  ModelConfig config;
  config.latent_dim = 1;
  config.alpha = 100.0;
  config.beta0_u = 1.0;
  config.beta0_v = 1.0;
  config.burn_in = 100;
  config.num_collected = 100;
  config.thinning = 2;
  return config;
}

void observe_all(SuitabilityMatrix& m) {
  for (int r = 0; r < m.num_users(); ++r) {
    for (int p = 0; p < m.num_items(); ++p) {
      m.set_observed(r, p);
    }
  }
}

}  // namespace

TEST_CASE("fit rejects empty data and bad configs") {
  auto matrix = rank1_matrix();  // nothing observed yet
  RngStream rng(1);
  CHECK_THROWS_AS(BpmfModel::fit(matrix, rank1_config(), rng), ModelError);

  ModelConfig bad = rank1_config();
  bad.latent_dim = 0;
  observe_all(matrix);
  CHECK_THROWS_AS(BpmfModel::fit(matrix, bad, rng), std::invalid_argument);
}

TEST_CASE("fully observed rank-1 recovery within 0.1") {
  auto matrix = rank1_matrix();
  observe_all(matrix);
  RngStream rng(2);
  const BpmfModel model = BpmfModel::fit(matrix, rank1_config(), rng);

  // Moments of the raw factor product: query against a copy with an empty
  // observed mask so nothing is overridden by the observed-entry contract.
  auto hidden = rank1_matrix();
  const ScorePosterior posterior = model.predictive_moments(hidden);
  for (int r = 0; r < 5; ++r) {
    for (int p = 0; p < 5; ++p) {
      CHECK(std::fabs(posterior.mean(r, p) - matrix.value(r, p)) < 0.1);
      CHECK(posterior.variance(r, p) >= 1.0 / 100.0);
    }
  }
}

TEST_CASE("held-out rank-1 entries recovered within 0.2") {
  auto matrix = rank1_matrix();
  observe_all(matrix);
  MaskGrid mask = matrix.observed_mask();
  // Hide five scattered entries.
  const int hidden[5][2] = {{0, 1}, {1, 3}, {2, 0}, {3, 4}, {4, 2}};
  for (const auto& h : hidden) {
    mask(h[0], h[1]) = 0;
  }
  matrix.clear_observed();
  matrix.set_observed_mask(mask);

  RngStream rng(3);
  const BpmfModel model = BpmfModel::fit(matrix, rank1_config(), rng);
  const ScorePosterior posterior = model.predictive_moments(matrix);
  const auto truth = rank1_matrix();
  for (const auto& h : hidden) {
    CHECK(std::fabs(posterior.mean(h[0], h[1]) - truth.value(h[0], h[1])) < 0.2);
  }
}

TEST_CASE("observed-entry posterior contract") {
  auto matrix = rank1_matrix();
  observe_all(matrix);
  MaskGrid mask = matrix.observed_mask();
  mask(2, 2) = 0;
  matrix.clear_observed();
  matrix.set_observed_mask(mask);

  RngStream rng(4);
  const BpmfModel model = BpmfModel::fit(matrix, rank1_config(), rng);
  const ScorePosterior posterior = model.predictive_moments(matrix);
  int checked = 0;
  for (int r = 0; r < 5; ++r) {
    for (int p = 0; p < 5; ++p) {
      if (matrix.observed(r, p)) {
        CHECK(posterior.mean(r, p) == matrix.value(r, p));
        CHECK(posterior.variance(r, p) == 1e-3);
        ++checked;
      }
    }
  }
  CHECK(checked == 24);
  // Unobserved variance strictly exceeds the observed constant.
  CHECK(posterior.variance(2, 2) > 1e-3);
  CHECK(posterior.variance(2, 2) >= 1.0 / 100.0);

  // Observing that entry and refitting flips it to the observed contract.
  matrix.set_observed(2, 2);
  RngStream rng2(4);
  const BpmfModel refit = BpmfModel::fit(matrix, rank1_config(), rng2);
  const ScorePosterior posterior2 = refit.predictive_moments(matrix);
  CHECK(posterior2.mean(2, 2) == matrix.value(2, 2));
  CHECK(posterior2.variance(2, 2) == 1e-3);
}

TEST_CASE("default jokes-scale hyperparameters run end to end") {
  // k = 1, alpha = 0.1, beta0u = 0.1, beta0v = 10.
  ModelConfig config;
  config.latent_dim = 1;
  config.alpha = 0.1;
  config.beta0_u = 0.1;
  config.beta0_v = 10.0;
  config.burn_in = 20;
  config.num_collected = 10;
  config.thinning = 1;

  auto matrix = rank1_matrix();
  observe_all(matrix);
  RngStream rng(5);
  const BpmfModel model = BpmfModel::fit(matrix, config, rng);
  CHECK(model.samples().size() == 10);
  const ScorePosterior posterior = model.predictive_moments(matrix);
  for (const double v : posterior.mean.data()) {
    CHECK(std::isfinite(v));
  }
}

TEST_CASE("Gibbs chains replay exactly under the same seed") {
  auto matrix = rank1_matrix();
  observe_all(matrix);
  ModelConfig config = rank1_config();
  config.burn_in = 10;
  config.num_collected = 5;
  RngStream a(77);
  RngStream b(77);
  const BpmfModel ma = BpmfModel::fit(matrix, config, a);
  const BpmfModel mb = BpmfModel::fit(matrix, config, b);
  REQUIRE(ma.samples().size() == mb.samples().size());
  for (std::size_t i = 0; i < ma.samples().size(); ++i) {
    CHECK(ma.samples()[i].u_factors == mb.samples()[i].u_factors);
    CHECK(ma.samples()[i].v_factors == mb.samples()[i].v_factors);
  }
}

TEST_CASE("sampled matrices keep observed entries and replay seeds") {
  auto matrix = rank1_matrix();
  observe_all(matrix);
  MaskGrid mask = matrix.observed_mask();
  mask(0, 0) = 0;
  mask(4, 4) = 0;
  matrix.clear_observed();
  matrix.set_observed_mask(mask);

  RngStream rng(6);
  const BpmfModel model = BpmfModel::fit(matrix, rank1_config(), rng);
  RngStream s1(11);
  RngStream s2(11);
  const ScoreGrid d1 = model.sample_score_matrix(matrix, s1);
  const ScoreGrid d2 = model.sample_score_matrix(matrix, s2);
  CHECK(d1 == d2);
  for (int r = 0; r < 5; ++r) {
    for (int p = 0; p < 5; ++p) {
      if (matrix.observed(r, p)) {
        CHECK(d1(r, p) == matrix.value(r, p));
      }
    }
  }
}

TEST_CASE("sample mean of draws agrees with predictive moments") {
  auto matrix = rank1_matrix();
  observe_all(matrix);
  MaskGrid mask = matrix.observed_mask();
  mask(1, 2) = 0;
  mask(3, 0) = 0;
  matrix.clear_observed();
  matrix.set_observed_mask(mask);

  RngStream rng(7);
  const BpmfModel model = BpmfModel::fit(matrix, rank1_config(), rng);
  const ScorePosterior posterior = model.predictive_moments(matrix);

  const int draws = 500;
  ScoreGrid acc(5, 5, 0.0);
  RngStream sample_rng(8);
  for (int t = 0; t < draws; ++t) {
    const ScoreGrid d = model.sample_score_matrix(matrix, sample_rng);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      acc.data()[i] += d.data()[i];
    }
  }
  for (int r = 0; r < 5; ++r) {
    for (int p = 0; p < 5; ++p) {
      if (!matrix.observed(r, p)) {
        const double mc_mean = acc(r, p) / draws;
        const double tol = 3.0 * std::sqrt(posterior.variance(r, p) / draws);
        CHECK(std::fabs(mc_mean - posterior.mean(r, p)) < tol);
      }
    }
  }
}

TEST_CASE("independent-marginal sampling keeps observations and differs per entry") {
  auto matrix = rank1_matrix();
  observe_all(matrix);
  MaskGrid mask = matrix.observed_mask();
  mask(0, 1) = 0;
  mask(2, 3) = 0;
  matrix.clear_observed();
  matrix.set_observed_mask(mask);

  ModelConfig config = rank1_config();
  config.independent_entry_sampling = true;
  RngStream rng(9);
  const BpmfModel model = BpmfModel::fit(matrix, config, rng);
  RngStream s(10);
  const ScoreGrid d = model.sample_score_matrix(matrix, s);
  CHECK(d(0, 0) == matrix.value(0, 0));
  CHECK(std::isfinite(d(0, 1)));
  CHECK(std::isfinite(d(2, 3)));
}

TEST_CASE("posterior mean beats the global-mean baseline on a full matrix") {
  auto matrix = rank1_matrix();
  observe_all(matrix);
  RngStream rng(12);
  const BpmfModel model = BpmfModel::fit(matrix, rank1_config(), rng);
  auto hidden = rank1_matrix();
  const ScorePosterior posterior = model.predictive_moments(hidden);

  double global = 0.0;
  for (const double v : matrix.values().data()) {
    global += v;
  }
  global /= 25.0;
  double rmse_model = 0.0;
  double rmse_mean = 0.0;
  for (int r = 0; r < 5; ++r) {
    for (int p = 0; p < 5; ++p) {
      const double t = matrix.value(r, p);
      rmse_model += (posterior.mean(r, p) - t) * (posterior.mean(r, p) - t);
      rmse_mean += (global - t) * (global - t);
    }
  }
  CHECK(std::sqrt(rmse_model / 25.0) <= std::sqrt(rmse_mean / 25.0));
}

TEST_CASE("bias baseline recovers additive structure") {
  // s_rp = 2 + r - p exactly: biases should reproduce it.
  ScoreGrid values(4, 3);
  for (int r = 0; r < 4; ++r) {
    for (int p = 0; p < 3; ++p) {
      values(r, p) = 2.0 + r - p;
    }
  }
  auto matrix = SuitabilityMatrix::dense(values);
  observe_all(matrix);
  const BiasBaseline baseline = BiasBaseline::fit(matrix);
  const ScorePosterior posterior = baseline.predictive_moments(matrix);
  for (int r = 0; r < 4; ++r) {
    for (int p = 0; p < 3; ++p) {
      CHECK(posterior.mean(r, p) == doctest::Approx(values(r, p)).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(BiasBaseline::fit(rank1_matrix()), ModelError);  // nothing observed
}
