// matchelicit: match-constrained recommendation with active preference
// elicitation. Subcommands: match, simulate, demo-fig2, synth.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matchelicit/app_config.hpp"
#include "matchelicit/dataio.hpp"
#include "matchelicit/errors.hpp"
#include "matchelicit/matcher.hpp"
#include "matchelicit/probmatch.hpp"
#include "matchelicit/results_io.hpp"
#include "matchelicit/simulator.hpp"

namespace {

using namespace matchelicit;

// Exit codes: 0 ok, 2 parse/config error, 3 infeasible constraints,
// 4 model failure, 1 anything else.
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitModel = 4;

LoadedRatings load_dataset(const AppConfig& config) {
  if (!config.dataset_path.empty()) {
    LoadedRatings ratings = load_ratings_csv(config.dataset_path);
    if (config.min_user_ratings > 0 || config.top_items > 0) {
      ratings = filter_ratings(ratings, config.min_user_ratings, config.top_items);
    }
    return ratings;
  }
  const SyntheticSpec& s = config.synthetic;
  SuitabilityMatrix matrix =
      generate_synthetic(s.num_users, s.num_items, s.rank, s.noise_sd,
                         {s.range_lo, s.range_hi}, s.density, s.seed);
  std::vector<std::string> user_ids;
  std::vector<std::string> item_ids;
  for (int r = 0; r < matrix.num_users(); ++r) {
    user_ids.push_back("u" + std::to_string(r));
  }
  for (int p = 0; p < matrix.num_items(); ++p) {
    item_ids.push_back("i" + std::to_string(p));
  }
  return {std::move(matrix), std::move(user_ids), std::move(item_ids)};
}

// Flags shared by `match` and `simulate`, layered over an optional config
// file: file values first, explicit flags override.
struct CommonFlags {
  std::string config_path;
  std::string dataset;
  std::optional<int> r_min, r_max, p_min, p_max;
  std::optional<int> min_user_ratings, top_items;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--data", dataset, "ratings CSV (user_id,item_id,score)");
    cmd->add_option("--r-min", r_min, "min users per item");
    cmd->add_option("--r-max", r_max, "max users per item (default: num users)");
    cmd->add_option("--p-min", p_min, "min items per user");
    cmd->add_option("--p-max", p_max, "max items per user");
    cmd->add_option("--min-user-ratings", min_user_ratings, "drop users with fewer ratings");
    cmd->add_option("--top-items", top_items, "keep only the most-rated items");
  }

  AppConfig merge() const {
    AppConfig config = config_path.empty() ? AppConfig{} : load_app_config(config_path);
    if (!dataset.empty()) {
      config.dataset_path = dataset;
    }
    if (r_min) config.r_min = *r_min;
    if (r_max) config.r_max = *r_max;
    if (p_min) config.p_min = *p_min;
    if (p_max) config.p_max = *p_max;
    if (min_user_ratings) config.min_user_ratings = *min_user_ratings;
    if (top_items) config.top_items = *top_items;
    return config;
  }
};

int run_match(const AppConfig& config, const std::string& out_path) {
  const LoadedRatings ratings = load_dataset(config);
  const SuitabilityMatrix& matrix = ratings.matrix;
  const MatchConstraints constraints = config.resolve_constraints(matrix.num_users());

  // Unscored pairs stay eligible at a neutral zero score; the reported
  // objective counts scored pairs only.
  ScoreGrid solve_grid(matrix.num_users(), matrix.num_items(), 0.0);
  for (int r = 0; r < matrix.num_users(); ++r) {
    for (int p = 0; p < matrix.num_items(); ++p) {
      if (matrix.ground_truth(r, p)) {
        solve_grid(r, p) = matrix.value(r, p);
      }
    }
  }
  const Matching matching = solve_matching(MatchInstance{solve_grid, constraints});
  const double objective = objective_value(matching, matrix, /*restrict_to_ground_truth=*/true);

  if (out_path.empty() || out_path == "-") {
    write_matching_csv(std::cout, matching, ratings.user_ids, ratings.item_ids);
  } else {
    std::ofstream out(out_path);
    if (!out) {
      throw ParseError("cannot open '" + out_path + "' for writing");
    }
    write_matching_csv(out, matching, ratings.user_ids, ratings.item_ids);
  }
  std::cout << "objective " << format_fixed(objective) << "\n";
  return 0;
}

int run_simulate(const AppConfig& config) {
  const LoadedRatings ratings = load_dataset(config);
  SimConfig sim = config.sim;
  sim.constraints = config.resolve_constraints(ratings.matrix.num_users());

  const ComparisonResult result = compare_strategies(ratings.matrix, sim);
  write_results_csv(config.output_path, result);
  print_summary(std::cout, result);
  std::cout << "wrote " << config.output_path << "\n";
  return 0;
}

void print_grid(const ScoreGrid& grid, const std::string& title) {
  std::cout << title << "\n";
  for (int r = 0; r < grid.rows(); ++r) {
    for (int p = 0; p < grid.cols(); ++p) {
      std::cout << (p ? " " : "  ") << format_fixed(grid(r, p));
    }
    std::cout << "\n";
  }
}

int run_demo_fig2(std::uint64_t seed) {
  const auto [matrix, constraints] = toy_fig2(seed);
  print_grid(matrix.values(), "scores S (3 users x 6 items, 1 user per item, 2 items per user)");

  const Matching lp = solve_matching(MatchInstance{matrix.values(), constraints});
  ScoreGrid lp_grid(3, 6, 0.0);
  for (int r = 0; r < 3; ++r) {
    for (int p = 0; p < 6; ++p) {
      lp_grid(r, p) = lp.assign(r, p);
    }
  }
  print_grid(lp_grid, "LP matching Y");
  std::cout << "objective " << format_fixed(objective_value(lp, matrix, false)) << "\n";

  const auto run_ybar = [&](double variance, const char* title, std::uint64_t child) {
    ScorePosterior posterior{matrix.values(), ScoreGrid(3, 6, variance)};
    RngStream rng = RngStream(seed).child(child);
    const ProbabilisticMatching ybar =
        estimate_prob_matching_gaussian(posterior, constraints, 50, rng);
    // Rounded for display only; the estimate itself keeps full precision.
    ScoreGrid rounded(3, 6, 0.0);
    for (int r = 0; r < 3; ++r) {
      for (int p = 0; p < 6; ++p) {
        rounded(r, p) = std::round(ybar.prob(r, p) * 100.0) / 100.0;
      }
    }
    print_grid(rounded, title);
  };
  run_ybar(1e-9, "probabilistic matching Ybar, variance 1e-9 (50 samples, rounded)", 1);
  run_ybar(9.0, "probabilistic matching Ybar, variance 9 (50 samples, rounded)", 2);
  return 0;
}

int run_synth(const SyntheticSpec& spec, const std::string& out_path) {
  SuitabilityMatrix matrix =
      generate_synthetic(spec.num_users, spec.num_items, spec.rank, spec.noise_sd,
                         {spec.range_lo, spec.range_hi}, spec.density, spec.seed);
  std::vector<std::string> user_ids;
  std::vector<std::string> item_ids;
  for (int r = 0; r < matrix.num_users(); ++r) {
    user_ids.push_back("u" + std::to_string(r));
  }
  for (int p = 0; p < matrix.num_items(); ++p) {
    item_ids.push_back("i" + std::to_string(p));
  }
  if (out_path.empty() || out_path == "-") {
    save_ratings_csv(std::cout, matrix, user_ids, item_ids);
  } else {
    std::ofstream out(out_path);
    if (!out) {
      throw ParseError("cannot open '" + out_path + "' for writing");
    }
    save_ratings_csv(out, matrix, user_ids, item_ids);
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"match-constrained recommendation with active preference elicitation"};
  app.require_subcommand(1);

  // match
  auto* match_cmd = app.add_subcommand("match", "solve one matching for a ratings file");
  CommonFlags match_flags;
  match_flags.attach(match_cmd);
  std::string match_out;
  match_cmd->add_option("--out", match_out, "matching CSV output (default stdout)");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "run the elicitation strategy comparison");
  CommonFlags sim_flags;
  sim_flags.attach(sim_cmd);
  std::optional<int> batch_size, num_rounds, num_trials, init_observed, init_train,
      init_validation, num_prob_samples, latent_dim, burn_in, num_collected, thinning;
  std::optional<double> alpha, beta0_u, beta0_v, prob_threshold;
  std::optional<std::uint64_t> base_seed;
  std::string mode;
  std::vector<std::string> strategy_names;
  std::string sim_out;
  std::optional<int> synth_users, synth_items, synth_rank;
  std::optional<double> synth_noise, synth_density;
  std::optional<std::uint64_t> synth_seed;
  sim_cmd->add_option("--batch-size,-K", batch_size, "queries per user per round");
  sim_cmd->add_option("--rounds", num_rounds, "number of elicitation rounds");
  sim_cmd->add_option("--trials", num_trials, "paired trials per strategy");
  sim_cmd->add_option("--seed", base_seed, "base seed");
  sim_cmd->add_option("--mode", mode, "parallel or sequential")
      ->check(CLI::IsMember({"", "parallel", "sequential"}));
  sim_cmd->add_option("--strategies", strategy_names,
                      "strategy tokens (random, se, sm, ym, ybm, ybe)");
  sim_cmd->add_option("--init-observed", init_observed, "initial observed scores per user");
  sim_cmd->add_option("--init-train", init_train, "initial training scores per user");
  sim_cmd->add_option("--init-validation", init_validation, "initial validation scores per user");
  sim_cmd->add_option("--prob-samples", num_prob_samples, "matching samples for Ybar");
  sim_cmd->add_option("--prob-threshold", prob_threshold, "fall-back match probability");
  sim_cmd->add_option("--latent-dim", latent_dim, "model latent dimension");
  sim_cmd->add_option("--alpha", alpha, "model observation precision");
  sim_cmd->add_option("--beta0u", beta0_u, "user-side prior scaling");
  sim_cmd->add_option("--beta0v", beta0_v, "item-side prior scaling");
  sim_cmd->add_option("--burn-in", burn_in, "Gibbs burn-in sweeps");
  sim_cmd->add_option("--collected", num_collected, "retained Gibbs samples");
  sim_cmd->add_option("--thinning", thinning, "sweeps between retained samples");
  sim_cmd->add_option("--out", sim_out, "results CSV path");
  sim_cmd->add_option("--synth-users", synth_users, "synthetic dataset users");
  sim_cmd->add_option("--synth-items", synth_items, "synthetic dataset items");
  sim_cmd->add_option("--synth-rank", synth_rank, "synthetic dataset rank");
  sim_cmd->add_option("--synth-noise", synth_noise, "synthetic noise sd");
  sim_cmd->add_option("--synth-density", synth_density, "synthetic available fraction");
  sim_cmd->add_option("--synth-seed", synth_seed, "synthetic dataset seed");

  // demo-fig2
  auto* demo_cmd = app.add_subcommand("demo-fig2", "toy 3x6 probabilistic matching printout");
  std::uint64_t demo_seed = 7;
  demo_cmd->add_option("--seed", demo_seed, "score seed");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "emit a synthetic ratings CSV");
  SyntheticSpec synth_spec;
  std::string synth_out;
  std::pair<double, double> synth_range{synth_spec.range_lo, synth_spec.range_hi};
  synth_cmd->add_option("--users", synth_spec.num_users, "number of users");
  synth_cmd->add_option("--items", synth_spec.num_items, "number of items");
  synth_cmd->add_option("--rank", synth_spec.rank, "latent rank");
  synth_cmd->add_option("--noise-sd", synth_spec.noise_sd, "additive noise sd");
  synth_cmd->add_option("--range", synth_range, "score range lo hi");
  synth_cmd->add_option("--density", synth_spec.density, "available entry fraction");
  synth_cmd->add_option("--seed", synth_spec.seed, "generator seed");
  synth_cmd->add_option("--out", synth_out, "ratings CSV output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (match_cmd->parsed()) {
      return run_match(match_flags.merge(), match_out);
    }
    if (sim_cmd->parsed()) {
      AppConfig config = sim_flags.merge();
      if (batch_size) config.sim.batch_size = *batch_size;
      if (num_rounds) config.sim.num_rounds = *num_rounds;
      if (num_trials) config.sim.num_trials = *num_trials;
      if (base_seed) config.sim.base_seed = *base_seed;
      if (init_observed) config.sim.init_observed = *init_observed;
      if (init_train) config.sim.init_train = *init_train;
      if (init_validation) config.sim.init_validation = *init_validation;
      if (num_prob_samples) config.sim.num_prob_samples = *num_prob_samples;
      if (prob_threshold) config.sim.prob_threshold = *prob_threshold;
      if (latent_dim) config.sim.model.latent_dim = *latent_dim;
      if (alpha) config.sim.model.alpha = *alpha;
      if (beta0_u) config.sim.model.beta0_u = *beta0_u;
      if (beta0_v) config.sim.model.beta0_v = *beta0_v;
      if (burn_in) config.sim.model.burn_in = *burn_in;
      if (num_collected) config.sim.model.num_collected = *num_collected;
      if (thinning) config.sim.model.thinning = *thinning;
      if (!mode.empty()) {
        config.sim.mode =
            mode == "sequential" ? SimConfig::Mode::kSequential : SimConfig::Mode::kParallel;
      }
      if (!strategy_names.empty()) {
        config.sim.strategies.clear();
        for (const std::string& name : strategy_names) {
          try {
            config.sim.strategies.push_back(strategy_from_name(name));
          } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
          }
        }
      }
      if (!sim_out.empty()) config.output_path = sim_out;
      if (synth_users) config.synthetic.num_users = *synth_users;
      if (synth_items) config.synthetic.num_items = *synth_items;
      if (synth_rank) config.synthetic.rank = *synth_rank;
      if (synth_noise) config.synthetic.noise_sd = *synth_noise;
      if (synth_density) config.synthetic.density = *synth_density;
      if (synth_seed) config.synthetic.seed = *synth_seed;
      return run_simulate(config);
    }
    if (demo_cmd->parsed()) {
      return run_demo_fig2(demo_seed);
    }
    if (synth_cmd->parsed()) {
      synth_spec.range_lo = synth_range.first;
      synth_spec.range_hi = synth_range.second;
      return run_synth(synth_spec, synth_out);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    // Invalid configuration values reaching library validation.
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitModel;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
