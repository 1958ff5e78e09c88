#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <utility>

#include "matchelicit/dataio.hpp"
#include "matchelicit/errors.hpp"
#include "matchelicit/linalg.hpp"
#include "matchelicit/matcher.hpp"
#include "matchelicit/probmatch.hpp"
#include "matchelicit/rng.hpp"
#include "matchelicit/scoremodel.hpp"
#include "matchelicit/simulator.hpp"
#include "matchelicit/strategies.hpp"
#include "matchelicit/types.hpp"

namespace py = pybind11;
using namespace matchelicit;

namespace {

ScoreGrid to_score_grid(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) {
    throw std::invalid_argument("expected a 2-d array");
  }
  ScoreGrid g(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  const auto view = a.unchecked<2>();
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      g(r, c) = view(r, c);
    }
  }
  return g;
}

MaskGrid to_mask_grid(const py::array_t<bool, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) {
    throw std::invalid_argument("expected a 2-d array");
  }
  MaskGrid g(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)));
  const auto view = a.unchecked<2>();
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      g(r, c) = view(r, c) ? 1 : 0;
    }
  }
  return g;
}

py::array_t<double> from_score_grid(const ScoreGrid& g) {
  py::array_t<double> a({g.rows(), g.cols()});
  auto view = a.mutable_unchecked<2>();
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      view(r, c) = g(r, c);
    }
  }
  return a;
}

py::array_t<bool> from_mask_grid(const MaskGrid& g) {
  py::array_t<bool> a({g.rows(), g.cols()});
  auto view = a.mutable_unchecked<2>();
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      view(r, c) = g(r, c) != 0;
    }
  }
  return a;
}

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using BoolArray = py::array_t<bool, py::array::c_style | py::array::forcecast>;

SuitabilityMatrix make_suitability(const DoubleArray& values,
                                   const std::optional<BoolArray>& ground_truth,
                                   const std::optional<BoolArray>& observed) {
  ScoreGrid grid = to_score_grid(values);
  SuitabilityMatrix matrix =
      ground_truth ? SuitabilityMatrix(std::move(grid), to_mask_grid(*ground_truth))
                   : SuitabilityMatrix::dense(std::move(grid));
  if (observed) {
    matrix.set_observed_mask(to_mask_grid(*observed));
  }
  return matrix;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "match-constrained recommendation with active preference elicitation";

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<InfeasibleError>(m, "InfeasibleError");
  py::register_exception<ModelError>(m, "ModelError");
  py::register_exception<NumericalError>(m, "NumericalError");

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_property_readonly("seed", &RngStream::seed)
      .def("next_u64", &RngStream::next_u64)
      .def("uniform", py::overload_cast<>(&RngStream::uniform))
      .def("normal", &RngStream::normal)
      .def("child", &RngStream::child, py::arg("index"));

  py::class_<MatchConstraints>(m, "MatchConstraints")
      .def(py::init([](int r_min, int r_max, int p_min, int p_max) {
             MatchConstraints c{r_min, r_max, p_min, p_max};
             c.validate();
             return c;
           }),
           py::arg("r_min"), py::arg("r_max"), py::arg("p_min"), py::arg("p_max"))
      .def_readwrite("r_min", &MatchConstraints::r_min)
      .def_readwrite("r_max", &MatchConstraints::r_max)
      .def_readwrite("p_min", &MatchConstraints::p_min)
      .def_readwrite("p_max", &MatchConstraints::p_max)
      .def("__repr__", [](const MatchConstraints& c) {
        return "MatchConstraints(r_min=" + std::to_string(c.r_min) +
               ", r_max=" + std::to_string(c.r_max) + ", p_min=" + std::to_string(c.p_min) +
               ", p_max=" + std::to_string(c.p_max) + ")";
      });

  py::class_<SuitabilityMatrix>(m, "SuitabilityMatrix")
      .def(py::init(&make_suitability), py::arg("values"), py::arg("ground_truth") = py::none(),
           py::arg("observed") = py::none())
      .def_property_readonly("num_users", &SuitabilityMatrix::num_users)
      .def_property_readonly("num_items", &SuitabilityMatrix::num_items)
      .def_property_readonly("values",
                             [](const SuitabilityMatrix& s) { return from_score_grid(s.values()); })
      .def_property_readonly(
          "ground_truth",
          [](const SuitabilityMatrix& s) { return from_mask_grid(s.ground_truth_mask()); })
      .def_property_readonly(
          "observed", [](const SuitabilityMatrix& s) { return from_mask_grid(s.observed_mask()); })
      .def("set_observed", &SuitabilityMatrix::set_observed, py::arg("user"), py::arg("item"))
      .def("count_ground_truth", &SuitabilityMatrix::count_ground_truth)
      .def("count_observed", &SuitabilityMatrix::count_observed);

  py::class_<Matching>(m, "Matching")
      .def_property_readonly("assign", [](const Matching& y) { return from_mask_grid(y.assign); })
      .def("row_sum", &Matching::row_sum, py::arg("user"))
      .def("col_sum", &Matching::col_sum, py::arg("item"))
      .def("validate_bounds", &Matching::validate_bounds, py::arg("constraints"));

  py::class_<ProbabilisticMatching>(m, "ProbabilisticMatching")
      .def_property_readonly("prob",
                             [](const ProbabilisticMatching& y) { return from_score_grid(y.prob); })
      .def_readonly("num_samples", &ProbabilisticMatching::num_samples)
      .def("validate_bounds", &ProbabilisticMatching::validate_bounds, py::arg("constraints"),
           py::arg("tol") = 1e-9);

  py::class_<ScorePosterior>(m, "ScorePosterior")
      .def(py::init([](const DoubleArray& mean, const DoubleArray& variance) {
             return ScorePosterior{to_score_grid(mean), to_score_grid(variance)};
           }),
           py::arg("mean"), py::arg("variance"))
      .def_property_readonly("mean",
                             [](const ScorePosterior& p) { return from_score_grid(p.mean); })
      .def_property_readonly("variance",
                             [](const ScorePosterior& p) { return from_score_grid(p.variance); });

  py::class_<Query>(m, "Query")
      .def_readonly("user", &Query::user)
      .def_readonly("item", &Query::item)
      .def_readonly("fallback", &Query::fallback)
      .def("__repr__", [](const Query& q) {
        return "Query(user=" + std::to_string(q.user) + ", item=" + std::to_string(q.item) +
               ", fallback=" + (q.fallback ? std::string("True") : std::string("False")) + ")";
      });

  m.def(
      "objective_value",
      [](const Matching& y, const SuitabilityMatrix& s, bool restrict_to_ground_truth) {
        return objective_value(y, s, restrict_to_ground_truth);
      },
      py::arg("matching"), py::arg("scores"), py::arg("restrict_to_ground_truth") = false);

  m.def("check_feasible", &check_feasible, py::arg("n_users"), py::arg("n_items"),
        py::arg("constraints"));
  m.def(
      "solve_matching",
      [](const DoubleArray& scores, const MatchConstraints& constraints) {
        return solve_matching(MatchInstance{to_score_grid(scores), constraints});
      },
      py::arg("scores"), py::arg("constraints"));
  m.def(
      "brute_force_matching",
      [](const DoubleArray& scores, const MatchConstraints& constraints) {
        return brute_force_matching(MatchInstance{to_score_grid(scores), constraints});
      },
      py::arg("scores"), py::arg("constraints"));

  py::class_<ModelConfig>(m, "ModelConfig")
      .def(py::init<>())
      .def_readwrite("latent_dim", &ModelConfig::latent_dim)
      .def_readwrite("alpha", &ModelConfig::alpha)
      .def_readwrite("beta0_u", &ModelConfig::beta0_u)
      .def_readwrite("beta0_v", &ModelConfig::beta0_v)
      .def_readwrite("burn_in", &ModelConfig::burn_in)
      .def_readwrite("num_collected", &ModelConfig::num_collected)
      .def_readwrite("thinning", &ModelConfig::thinning)
      .def_readwrite("observed_variance", &ModelConfig::observed_variance)
      .def_readwrite("independent_entry_sampling", &ModelConfig::independent_entry_sampling);

  py::class_<BpmfModel>(m, "BpmfModel")
      .def_static("fit", &BpmfModel::fit, py::arg("scores"), py::arg("config"), py::arg("rng"))
      .def("predictive_moments", &BpmfModel::predictive_moments, py::arg("scores"))
      .def(
          "sample_score_matrix",
          [](const BpmfModel& model, const SuitabilityMatrix& scores, RngStream& rng) {
            return from_score_grid(model.sample_score_matrix(scores, rng));
          },
          py::arg("scores"), py::arg("rng"))
      .def_property_readonly("num_samples",
                             [](const BpmfModel& model) { return model.samples().size(); });

  m.def("estimate_prob_matching", &estimate_prob_matching, py::arg("model"), py::arg("scores"),
        py::arg("constraints"), py::arg("num_samples"), py::arg("rng"));
  m.def("estimate_prob_matching_gaussian", &estimate_prob_matching_gaussian, py::arg("posterior"),
        py::arg("constraints"), py::arg("num_samples"), py::arg("rng"));
  m.def("map_matching", &map_matching, py::arg("posterior"), py::arg("constraints"));

  py::enum_<StrategyKind>(m, "StrategyKind")
      .value("RANDOM", StrategyKind::kRandom)
      .value("SCORE_ENTROPY", StrategyKind::kScoreEntropy)
      .value("SCORE_MAX", StrategyKind::kScoreMax)
      .value("Y_MAX", StrategyKind::kYMax)
      .value("YBAR_MAX", StrategyKind::kYbarMax)
      .value("YBAR_ENTROPY", StrategyKind::kYbarEntropy);
  m.def("strategy_name", &strategy_name, py::arg("kind"));
  m.def("strategy_from_name", &strategy_from_name, py::arg("name"));

  py::class_<SelectionContext>(m, "SelectionContext")
      .def(py::init([](const ScorePosterior* posterior, const ProbabilisticMatching* prob_match,
                       const Matching* map_match, const BoolArray& candidate,
                       double prob_threshold) {
             SelectionContext ctx;
             ctx.posterior = posterior;
             ctx.prob_match = prob_match;
             ctx.map_match = map_match;
             ctx.candidate = to_mask_grid(candidate);
             ctx.prob_threshold = prob_threshold;
             return ctx;
           }),
           py::arg("posterior") = nullptr, py::arg("prob_match") = nullptr,
           py::arg("map_match") = nullptr, py::arg("candidate"),
           py::arg("prob_threshold") = 0.01, py::keep_alive<1, 2>(), py::keep_alive<1, 3>(),
           py::keep_alive<1, 4>());

  m.def("criterion_score", &criterion_score, py::arg("strategy"), py::arg("context"),
        py::arg("user"), py::arg("item"));
  m.def("select_batch", &select_batch, py::arg("strategy"), py::arg("context"), py::arg("user"),
        py::arg("batch_size"), py::arg("rng"));

  py::class_<SimConfig> sim_config(m, "SimConfig");
  py::enum_<SimConfig::Mode>(sim_config, "Mode")
      .value("PARALLEL", SimConfig::Mode::kParallel)
      .value("SEQUENTIAL", SimConfig::Mode::kSequential);
  sim_config.def(py::init<>())
      .def_readwrite("batch_size", &SimConfig::batch_size)
      .def_readwrite("num_rounds", &SimConfig::num_rounds)
      .def_readwrite("mode", &SimConfig::mode)
      .def_readwrite("init_observed", &SimConfig::init_observed)
      .def_readwrite("init_train", &SimConfig::init_train)
      .def_readwrite("init_validation", &SimConfig::init_validation)
      .def_readwrite("num_trials", &SimConfig::num_trials)
      .def_readwrite("base_seed", &SimConfig::base_seed)
      .def_readwrite("strategies", &SimConfig::strategies)
      .def_readwrite("model", &SimConfig::model)
      .def_readwrite("constraints", &SimConfig::constraints)
      .def_readwrite("num_prob_samples", &SimConfig::num_prob_samples)
      .def_readwrite("prob_threshold", &SimConfig::prob_threshold)
      .def_readwrite("hyper_search", &SimConfig::hyper_search)
      .def_readwrite("hyper_grid", &SimConfig::hyper_grid);

  py::class_<RoundRecord>(m, "RoundRecord")
      .def_readonly("trial", &RoundRecord::trial)
      .def_readonly("round", &RoundRecord::round)
      .def_readonly("strategy", &RoundRecord::strategy)
      .def_readonly("cum_queries_per_user", &RoundRecord::cum_queries_per_user)
      .def_readonly("objective", &RoundRecord::objective)
      .def_readonly("fallback_count", &RoundRecord::fallback_count)
      .def_readonly("num_observed", &RoundRecord::num_observed);

  py::class_<StrategyRoundSummary>(m, "StrategyRoundSummary")
      .def_readonly("strategy", &StrategyRoundSummary::strategy)
      .def_readonly("round", &StrategyRoundSummary::round)
      .def_readonly("mean_cum_queries", &StrategyRoundSummary::mean_cum_queries)
      .def_readonly("mean_objective", &StrategyRoundSummary::mean_objective)
      .def_readonly("mean_diff_vs_random", &StrategyRoundSummary::mean_diff_vs_random)
      .def_readonly("stderr_diff", &StrategyRoundSummary::stderr_diff)
      .def_readonly("mean_fallback", &StrategyRoundSummary::mean_fallback);

  py::class_<ComparisonResult>(m, "ComparisonResult")
      .def_readonly("records", &ComparisonResult::records)
      .def_readonly("summary", &ComparisonResult::summary)
      .def("diff_vs_random", &ComparisonResult::diff_vs_random, py::arg("record"));

  m.def("evaluate_objective", &evaluate_objective, py::arg("posterior"), py::arg("dataset"),
        py::arg("constraints"));
  m.def("run_trial", &run_trial, py::arg("dataset"), py::arg("strategy"), py::arg("config"),
        py::arg("trial_seed"));
  m.def("compare_strategies", &compare_strategies, py::arg("dataset"), py::arg("config"));

  m.def(
      "generate_synthetic",
      [](int num_users, int num_items, int rank, double noise_sd, std::pair<double, double> range,
         double density, std::uint64_t seed) {
        return generate_synthetic(num_users, num_items, rank, noise_sd, range, density, seed);
      },
      py::arg("num_users"), py::arg("num_items"), py::arg("rank"), py::arg("noise_sd") = 0.0,
      py::arg("score_range") = std::pair<double, double>{-10.0, 10.0}, py::arg("density") = 1.0,
      py::arg("seed") = 0);
  m.def("toy_fig2", &toy_fig2, py::arg("seed") = 7);
  m.def(
      "load_ratings_csv",
      [](const std::string& path) {
        LoadedRatings ratings = load_ratings_csv(path);
        return py::make_tuple(std::move(ratings.matrix), ratings.user_ids, ratings.item_ids);
      },
      py::arg("path"));

  m.def("gaussian_entropy", &gaussian_entropy, py::arg("variance"));
  m.def("bernoulli_entropy", &bernoulli_entropy, py::arg("p"));
  m.def(
      "cholesky",
      [](const DoubleArray& a) { return from_score_grid(cholesky(to_score_grid(a))); },
      py::arg("a"));
}
