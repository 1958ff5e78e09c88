#include "matchelicit/app_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "matchelicit/errors.hpp"

namespace matchelicit {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.contains(it.key())) {
      throw ParseError(where + ": unknown key '" + it.key() + "'");
    }
  }
}

template <typename T>
void read_into(const json& obj, const char* key, T& target) {
  if (obj.contains(key)) {
    try {
      target = obj.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ParseError(std::string("config key '") + key + "': " + e.what());
    }
  }
}

void parse_model(const json& obj, ModelConfig& model) {
  reject_unknown_keys(obj,
                      {"latent_dim", "alpha", "beta0_u", "beta0_v", "burn_in", "num_collected",
                       "thinning", "observed_variance", "independent_entry_sampling"},
                      "model");
  read_into(obj, "latent_dim", model.latent_dim);
  read_into(obj, "alpha", model.alpha);
  read_into(obj, "beta0_u", model.beta0_u);
  read_into(obj, "beta0_v", model.beta0_v);
  read_into(obj, "burn_in", model.burn_in);
  read_into(obj, "num_collected", model.num_collected);
  read_into(obj, "thinning", model.thinning);
  read_into(obj, "observed_variance", model.observed_variance);
  read_into(obj, "independent_entry_sampling", model.independent_entry_sampling);
}

}  // namespace

MatchConstraints AppConfig::resolve_constraints(int num_users) const {
  MatchConstraints c{r_min, r_max < 0 ? num_users : r_max, p_min, p_max};
  c.validate();
  return c;
}

AppConfig load_app_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_app_config_json(buffer.str(), path);
}

AppConfig parse_app_config_json(const std::string& text, const std::string& name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(name + ": " + e.what());
  }
  if (!root.is_object()) {
    throw ParseError(name + ": config must be a JSON object");
  }
  reject_unknown_keys(
      root, {"dataset", "filter", "synthetic", "constraints", "model", "sim", "output"}, name);

  AppConfig config;
  if (root.contains("dataset") && !root.at("dataset").is_null()) {
    config.dataset_path = root.at("dataset").get<std::string>();
  }
  if (root.contains("filter")) {
    const json& f = root.at("filter");
    reject_unknown_keys(f, {"min_user_ratings", "top_items"}, "filter");
    read_into(f, "min_user_ratings", config.min_user_ratings);
    read_into(f, "top_items", config.top_items);
  }
  if (root.contains("synthetic")) {
    const json& s = root.at("synthetic");
    reject_unknown_keys(s, {"users", "items", "rank", "noise_sd", "range", "density", "seed"},
                        "synthetic");
    read_into(s, "users", config.synthetic.num_users);
    read_into(s, "items", config.synthetic.num_items);
    read_into(s, "rank", config.synthetic.rank);
    read_into(s, "noise_sd", config.synthetic.noise_sd);
    read_into(s, "density", config.synthetic.density);
    read_into(s, "seed", config.synthetic.seed);
    if (s.contains("range")) {
      const json& range = s.at("range");
      if (!range.is_array() || range.size() != 2) {
        throw ParseError("synthetic.range: expected [lo, hi]");
      }
      config.synthetic.range_lo = range.at(0).get<double>();
      config.synthetic.range_hi = range.at(1).get<double>();
    }
  }
  if (root.contains("constraints")) {
    const json& c = root.at("constraints");
    reject_unknown_keys(c, {"r_min", "r_max", "p_min", "p_max"}, "constraints");
    read_into(c, "r_min", config.r_min);
    read_into(c, "r_max", config.r_max);
    read_into(c, "p_min", config.p_min);
    read_into(c, "p_max", config.p_max);
  }
  if (root.contains("model")) {
    parse_model(root.at("model"), config.sim.model);
  }
  if (root.contains("sim")) {
    const json& s = root.at("sim");
    reject_unknown_keys(s,
                        {"batch_size", "num_rounds", "mode", "init_observed", "init_train",
                         "init_validation", "num_trials", "base_seed", "strategies",
                         "num_prob_samples", "prob_threshold", "hyper_search", "hyper_grid"},
                        "sim");
    read_into(s, "batch_size", config.sim.batch_size);
    read_into(s, "num_rounds", config.sim.num_rounds);
    read_into(s, "init_observed", config.sim.init_observed);
    read_into(s, "init_train", config.sim.init_train);
    read_into(s, "init_validation", config.sim.init_validation);
    read_into(s, "num_trials", config.sim.num_trials);
    read_into(s, "base_seed", config.sim.base_seed);
    read_into(s, "num_prob_samples", config.sim.num_prob_samples);
    read_into(s, "prob_threshold", config.sim.prob_threshold);
    read_into(s, "hyper_search", config.sim.hyper_search);
    if (s.contains("mode")) {
      const std::string mode = s.at("mode").get<std::string>();
      if (mode == "parallel") {
        config.sim.mode = SimConfig::Mode::kParallel;
      } else if (mode == "sequential") {
        config.sim.mode = SimConfig::Mode::kSequential;
      } else {
        throw ParseError("sim.mode: expected 'parallel' or 'sequential'");
      }
    }
    if (s.contains("strategies")) {
      config.sim.strategies.clear();
      for (const json& item : s.at("strategies")) {
        try {
          config.sim.strategies.push_back(strategy_from_name(item.get<std::string>()));
        } catch (const std::invalid_argument& e) {
          throw ParseError(std::string("sim.strategies: ") + e.what());
        }
      }
    }
    if (s.contains("hyper_grid")) {
      config.sim.hyper_grid.clear();
      for (const json& item : s.at("hyper_grid")) {
        ModelConfig m = config.sim.model;
        parse_model(item, m);
        config.sim.hyper_grid.push_back(m);
      }
    }
  }
  read_into(root, "output", config.output_path);
  return config;
}

}  // namespace matchelicit
