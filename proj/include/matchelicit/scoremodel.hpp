#pragma once

#include <vector>

#include "matchelicit/grid.hpp"
#include "matchelicit/rng.hpp"
#include "matchelicit/types.hpp"

namespace matchelicit {

// Bayesian low-rank factorization hyperparameters and Gibbs schedule.
struct ModelConfig {
  int latent_dim = 1;
  double alpha = 0.1;     // observation precision
  double beta0_u = 0.1;   // Normal-Wishart scaling, user side
  double beta0_v = 10.0;  // Normal-Wishart scaling, item side
  int burn_in = 50;
  int num_collected = 50;
  int thinning = 2;
  double observed_variance = 1e-3;
  // Sample unobserved entries from per-entry marginals instead of one factor
  // draw per matrix (see sample_score_matrix).
  bool independent_entry_sampling = false;

  void validate() const;
};

// Sampled Normal-Wishart hyperparameters for one factor side.
struct NormalWishart {
  std::vector<double> mean;
  ScoreGrid precision;
};

// One retained Gibbs state.
struct FactorState {
  ScoreGrid u_factors;  // N x k
  ScoreGrid v_factors;  // M x k
  NormalWishart hyper_u;
  NormalWishart hyper_v;
};

// Bayesian PMF fitted by block Gibbs sampling. Each sweep resamples the
// Normal-Wishart hyperparameters from their conjugate conditionals, then
// every user and item factor row from its Gaussian conditional. The fixed
// prior parts are mean 0, Wishart scale identity, dof = latent_dim.
class BpmfModel {
 public:
  // Requires at least one observed entry. Same seed, data and config yield
  // identical retained samples.
  static BpmfModel fit(const SuitabilityMatrix& scores, const ModelConfig& config,
                       RngStream& rng);

  // Per-entry predictive moments. Observed entries report (observed value,
  // observed_variance); unobserved entries report the mean and sample
  // variance of u_r . v_p across retained states plus 1/alpha observation
  // noise.
  ScorePosterior predictive_moments(const SuitabilityMatrix& scores) const;

  // Complete score matrix draw: observed entries copied verbatim, each
  // unobserved entry u_r . v_p + N(0, 1/alpha) under one uniformly chosen
  // retained state per matrix (or per entry in independent mode).
  ScoreGrid sample_score_matrix(const SuitabilityMatrix& scores, RngStream& rng) const;

  const std::vector<FactorState>& samples() const { return samples_; }
  const ModelConfig& config() const { return config_; }
  int num_users() const { return num_users_; }
  int num_items() const { return num_items_; }

 private:
  BpmfModel(ModelConfig config, int num_users, int num_items)
      : config_(config), num_users_(num_users), num_items_(num_items) {}

  ModelConfig config_;
  int num_users_;
  int num_items_;
  std::vector<FactorState> samples_;
};

// Global mean + user bias + item bias predictor with constant residual
// variance; test oracle and ablation baseline.
struct BiasBaseline {
  double global_mean = 0.0;
  std::vector<double> user_bias;
  std::vector<double> item_bias;
  double residual_variance = 1.0;
  double observed_variance = 1e-3;

  static BiasBaseline fit(const SuitabilityMatrix& scores);
  ScorePosterior predictive_moments(const SuitabilityMatrix& scores) const;
};

}  // namespace matchelicit
