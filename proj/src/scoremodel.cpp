#include "matchelicit/scoremodel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "matchelicit/errors.hpp"
#include "matchelicit/linalg.hpp"

namespace matchelicit {

namespace {

double dot_row(const ScoreGrid& a, int ra, const ScoreGrid& b, int rb) {
  double acc = 0.0;
  for (int k = 0; k < a.cols(); ++k) {
    acc += a(ra, k) * b(rb, k);
  }
  return acc;
}

// Conjugate Normal-Wishart resample given the current factor rows. The prior
// mean is zero, the Wishart scale identity and dof = k, with beta0 from the
// config.
NormalWishart sample_hyper(const ScoreGrid& factors, double beta0, RngStream& rng) {
  const int n = factors.rows();
  const int k = factors.cols();

  std::vector<double> mean_row(k, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < k; ++c) {
      mean_row[c] += factors(i, c);
    }
  }
  for (auto& v : mean_row) {
    v /= n;
  }
  ScoreGrid scatter(k, k, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int a = 0; a < k; ++a) {
      const double da = factors(i, a) - mean_row[a];
      for (int b = 0; b <= a; ++b) {
        scatter(a, b) += da * (factors(i, b) - mean_row[b]);
      }
    }
  }

  const double beta_star = beta0 + n;
  const double dof_star = static_cast<double>(k) + n;
  // W*^-1 = I + N*S + beta0*N/(beta0+N) * xbar xbar^T   (prior mean zero)
  ScoreGrid w_inv(k, k, 0.0);
  const double shrink = beta0 * n / beta_star;
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b <= a; ++b) {
      double v = scatter(a, b) + shrink * mean_row[a] * mean_row[b];
      if (a == b) {
        v += 1.0;
      }
      w_inv(a, b) = v;
      w_inv(b, a) = v;
    }
  }

  NormalWishart hyper;
  hyper.precision = sample_wishart(dof_star, spd_inverse(w_inv), rng);
  std::vector<double> mu_star(k);
  for (int c = 0; c < k; ++c) {
    mu_star[c] = n * mean_row[c] / beta_star;
  }
  ScoreGrid scaled_precision(k, k, 0.0);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      scaled_precision(a, b) = beta_star * hyper.precision(a, b);
    }
  }
  hyper.mean = sample_mvn_precision(mu_star, scaled_precision, rng);
  return hyper;
}

// Gaussian conditional resample of one side's factor rows given the other
// side and the observation pattern along `index`.
void sample_factor_rows(ScoreGrid& rows, const ScoreGrid& other,
                        const std::vector<std::vector<std::pair<int, double>>>& observed_by_row,
                        const NormalWishart& hyper, double alpha, RngStream& rng) {
  const int k = rows.cols();
  std::vector<double> rhs(k);
  ScoreGrid precision(k, k, 0.0);
  for (int i = 0; i < rows.rows(); ++i) {
    for (int a = 0; a < k; ++a) {
      double acc = 0.0;
      for (int b = 0; b < k; ++b) {
        acc += hyper.precision(a, b) * hyper.mean[b];
      }
      rhs[a] = acc;
      for (int b = 0; b < k; ++b) {
        precision(a, b) = hyper.precision(a, b);
      }
    }
    for (const auto& [j, score] : observed_by_row[i]) {
      for (int a = 0; a < k; ++a) {
        const double va = other(j, a);
        rhs[a] += alpha * score * va;
        for (int b = 0; b <= a; ++b) {
          precision(a, b) += alpha * va * other(j, b);
        }
      }
    }
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < a; ++b) {
        precision(b, a) = precision(a, b);
      }
    }
    const ScoreGrid lower = cholesky(precision);
    const std::vector<double> mean = cholesky_solve(lower, rhs);
    const std::vector<double> draw = sample_mvn_precision(mean, precision, rng);
    for (int a = 0; a < k; ++a) {
      rows(i, a) = draw[a];
    }
  }
}

}  // namespace

void ModelConfig::validate() const {
  if (latent_dim < 1) {
    throw std::invalid_argument("ModelConfig: latent_dim must be >= 1");
  }
  if (!(alpha > 0.0) || !(beta0_u > 0.0) || !(beta0_v > 0.0)) {
    throw std::invalid_argument("ModelConfig: alpha and beta0 must be positive");
  }
  if (!(observed_variance > 0.0)) {
    throw std::invalid_argument("ModelConfig: observed_variance must be positive");
  }
  if (burn_in < 0 || num_collected < 1 || thinning < 1) {
    throw std::invalid_argument("ModelConfig: invalid Gibbs schedule");
  }
}

BpmfModel BpmfModel::fit(const SuitabilityMatrix& scores, const ModelConfig& config,
                         RngStream& rng) {
  config.validate();
  const int n = scores.num_users();
  const int m = scores.num_items();
  const int k = config.latent_dim;

  std::vector<std::vector<std::pair<int, double>>> by_user(n);
  std::vector<std::vector<std::pair<int, double>>> by_item(m);
  int observed_count = 0;
  for (int r = 0; r < n; ++r) {
    for (int p = 0; p < m; ++p) {
      if (scores.observed(r, p)) {
        const double v = scores.value(r, p);
        by_user[r].emplace_back(p, v);
        by_item[p].emplace_back(r, v);
        ++observed_count;
      }
    }
  }
  if (observed_count == 0) {
    throw ModelError("BpmfModel::fit: no observed entries");
  }

  BpmfModel model(config, n, m);
  ScoreGrid u(n, k);
  ScoreGrid v(m, k);
  for (auto& x : u.data()) {
    x = 0.1 * rng.normal();
  }
  for (auto& x : v.data()) {
    x = 0.1 * rng.normal();
  }

  const int total_sweeps = config.burn_in + config.num_collected * config.thinning;
  model.samples_.reserve(config.num_collected);
  try {
    for (int sweep = 1; sweep <= total_sweeps; ++sweep) {
      NormalWishart hyper_u = sample_hyper(u, config.beta0_u, rng);
      NormalWishart hyper_v = sample_hyper(v, config.beta0_v, rng);
      sample_factor_rows(u, v, by_user, hyper_u, config.alpha, rng);
      sample_factor_rows(v, u, by_item, hyper_v, config.alpha, rng);
      if (sweep > config.burn_in && (sweep - config.burn_in) % config.thinning == 0) {
        model.samples_.push_back({u, v, std::move(hyper_u), std::move(hyper_v)});
      }
    }
  } catch (const NumericalError& e) {
    throw ModelError(std::string("BpmfModel::fit: numerical blow-up in Gibbs sweep (") +
                     e.what() + ")");
  }
  return model;
}

ScorePosterior BpmfModel::predictive_moments(const SuitabilityMatrix& scores) const {
  if (scores.num_users() != num_users_ || scores.num_items() != num_items_) {
    throw std::invalid_argument("predictive_moments: dimension mismatch");
  }
  const int t = static_cast<int>(samples_.size());
  ScorePosterior posterior{ScoreGrid(num_users_, num_items_, 0.0),
                           ScoreGrid(num_users_, num_items_, 0.0)};
  const double noise = 1.0 / config_.alpha;
  for (int r = 0; r < num_users_; ++r) {
    for (int p = 0; p < num_items_; ++p) {
      if (scores.observed(r, p)) {
        posterior.mean(r, p) = scores.value(r, p);
        posterior.variance(r, p) = config_.observed_variance;
        continue;
      }
      double sum = 0.0;
      double sum_sq = 0.0;
      for (const FactorState& s : samples_) {
        const double pred = dot_row(s.u_factors, r, s.v_factors, p);
        sum += pred;
        sum_sq += pred * pred;
      }
      const double mean = sum / t;
      const double var = t > 1 ? std::max(0.0, (sum_sq - t * mean * mean) / (t - 1)) : 0.0;
      posterior.mean(r, p) = mean;
      posterior.variance(r, p) = var + noise;
    }
  }
  return posterior;
}

ScoreGrid BpmfModel::sample_score_matrix(const SuitabilityMatrix& scores, RngStream& rng) const {
  if (scores.num_users() != num_users_ || scores.num_items() != num_items_) {
    throw std::invalid_argument("sample_score_matrix: dimension mismatch");
  }
  if (samples_.empty()) {
    throw ModelError("sample_score_matrix: model has no retained samples");
  }
  const double noise_sd = std::sqrt(1.0 / config_.alpha);
  ScoreGrid draw(num_users_, num_items_, 0.0);
  const std::size_t fixed_state =
      config_.independent_entry_sampling ? 0 : rng.uniform_int(samples_.size());
  for (int r = 0; r < num_users_; ++r) {
    for (int p = 0; p < num_items_; ++p) {
      if (scores.observed(r, p)) {
        draw(r, p) = scores.value(r, p);
        continue;
      }
      const std::size_t state = config_.independent_entry_sampling
                                    ? rng.uniform_int(samples_.size())
                                    : fixed_state;
      const FactorState& s = samples_[state];
      draw(r, p) = dot_row(s.u_factors, r, s.v_factors, p) + noise_sd * rng.normal();
    }
  }
  return draw;
}

BiasBaseline BiasBaseline::fit(const SuitabilityMatrix& scores) {
  const int n = scores.num_users();
  const int m = scores.num_items();
  BiasBaseline b;
  b.user_bias.assign(n, 0.0);
  b.item_bias.assign(m, 0.0);

  double sum = 0.0;
  int count = 0;
  for (int r = 0; r < n; ++r) {
    for (int p = 0; p < m; ++p) {
      if (scores.observed(r, p)) {
        sum += scores.value(r, p);
        ++count;
      }
    }
  }
  if (count == 0) {
    throw ModelError("BiasBaseline::fit: no observed entries");
  }
  b.global_mean = sum / count;

  std::vector<int> user_count(n, 0);
  std::vector<int> item_count(m, 0);
  for (int r = 0; r < n; ++r) {
    for (int p = 0; p < m; ++p) {
      if (scores.observed(r, p)) {
        b.user_bias[r] += scores.value(r, p) - b.global_mean;
        ++user_count[r];
      }
    }
  }
  for (int r = 0; r < n; ++r) {
    if (user_count[r] > 0) {
      b.user_bias[r] /= user_count[r];
    }
  }
  for (int p = 0; p < m; ++p) {
    for (int r = 0; r < n; ++r) {
      if (scores.observed(r, p)) {
        b.item_bias[p] += scores.value(r, p) - b.global_mean - b.user_bias[r];
        ++item_count[p];
      }
    }
    if (item_count[p] > 0) {
      b.item_bias[p] /= item_count[p];
    }
  }

  double resid_sq = 0.0;
  for (int r = 0; r < n; ++r) {
    for (int p = 0; p < m; ++p) {
      if (scores.observed(r, p)) {
        const double e = scores.value(r, p) - (b.global_mean + b.user_bias[r] + b.item_bias[p]);
        resid_sq += e * e;
      }
    }
  }
  b.residual_variance = std::max(1e-6, resid_sq / count);
  return b;
}

ScorePosterior BiasBaseline::predictive_moments(const SuitabilityMatrix& scores) const {
  const int n = scores.num_users();
  const int m = scores.num_items();
  ScorePosterior posterior{ScoreGrid(n, m, 0.0), ScoreGrid(n, m, 0.0)};
  for (int r = 0; r < n; ++r) {
    for (int p = 0; p < m; ++p) {
      if (scores.observed(r, p)) {
        posterior.mean(r, p) = scores.value(r, p);
        posterior.variance(r, p) = observed_variance;
      } else {
        posterior.mean(r, p) = global_mean + user_bias[r] + item_bias[p];
        posterior.variance(r, p) = residual_variance;
      }
    }
  }
  return posterior;
}

}  // namespace matchelicit
