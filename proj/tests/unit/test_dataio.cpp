#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "matchelicit/app_config.hpp"
#include "matchelicit/dataio.hpp"
#include "matchelicit/errors.hpp"
#include "matchelicit/results_io.hpp"

using namespace matchelicit;

namespace {

LoadedRatings load_text(const std::string& text) {
  std::istringstream in(text);
  return load_ratings_csv(in, "test");
}

// One-sided Jacobi SVD: orthogonalize columns by plane rotations; singular
// values are the final column norms. Accurate for tiny singular values, which
// the Gram-matrix route loses to squaring.
std::vector<double> singular_values(ScoreGrid a) {
  const int n = a.rows();
  const int m = a.cols();
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int i = 0; i < m - 1; ++i) {
      for (int j = i + 1; j < m; ++j) {
        double aii = 0.0, ajj = 0.0, aij = 0.0;
        for (int r = 0; r < n; ++r) {
          aii += a(r, i) * a(r, i);
          ajj += a(r, j) * a(r, j);
          aij += a(r, i) * a(r, j);
        }
        if (std::fabs(aij) <= 1e-30 + 1e-16 * std::sqrt(aii * ajj)) {
          continue;
        }
        rotated = true;
        const double tau = (ajj - aii) / (2.0 * aij);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (int r = 0; r < n; ++r) {
          const double ri = a(r, i);
          const double rj = a(r, j);
          a(r, i) = c * ri - s * rj;
          a(r, j) = s * ri + c * rj;
        }
      }
    }
    if (!rotated) {
      break;
    }
  }
  std::vector<double> sv(m);
  for (int j = 0; j < m; ++j) {
    double acc = 0.0;
    for (int r = 0; r < n; ++r) {
      acc += a(r, j) * a(r, j);
    }
    sv[j] = std::sqrt(acc);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

}  // namespace

TEST_CASE("load_ratings_csv densifies in first-appearance order") {
  const LoadedRatings r = load_text(
      "user_id,item_id,score\n"
      "alice,joke1,2.5\n"
      "bob,joke1,-1\n"
      "alice,joke2,0.25\n");
  CHECK(r.matrix.num_users() == 2);
  CHECK(r.matrix.num_items() == 2);
  CHECK(r.matrix.count_ground_truth() == 3);
  CHECK(r.user_ids == std::vector<std::string>{"alice", "bob"});
  CHECK(r.item_ids == std::vector<std::string>{"joke1", "joke2"});
  CHECK(r.matrix.value(0, 0) == 2.5);
  CHECK(r.matrix.value(1, 0) == -1.0);
  CHECK_FALSE(r.matrix.ground_truth(1, 1));
}

TEST_CASE("load_ratings_csv rejects malformed input") {
  CHECK_THROWS_AS(load_text(""), ParseError);
  CHECK_THROWS_AS(load_text("user,item,score\n"), ParseError);  // wrong header
  CHECK_THROWS_AS(load_text("user_id,item_id,score\n"), ParseError);  // no rows
  CHECK_THROWS_AS(load_text("user_id,item_id,score\nu1,i1\n"), ParseError);  // arity
  CHECK_THROWS_AS(load_text("user_id,item_id,score\nu1,i1,abc\n"), ParseError);
  CHECK_THROWS_AS(load_text("user_id,item_id,score\nu1,i1,1\nu1,i1,2\n"), ParseError);
  try {
    load_text("user_id,item_id,score\nu1,i1,1\nu1,i1,2\n");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("u1") != std::string::npos);
    CHECK(std::string(e.what()).find("i1") != std::string::npos);
  }
}

TEST_CASE("save and reload reproduces grid and masks exactly") {
  const SuitabilityMatrix matrix = generate_synthetic(5, 7, 2, 0.3, {-10.0, 10.0}, 0.6, 99);
  std::vector<std::string> users, items;
  for (int r = 0; r < 5; ++r) {
    users.push_back("u" + std::to_string(r));
  }
  for (int p = 0; p < 7; ++p) {
    items.push_back("i" + std::to_string(p));
  }
  std::ostringstream out;
  save_ratings_csv(out, matrix, users, items);
  const LoadedRatings reloaded = load_text(out.str());

  // Reloaded indices follow first appearance; map via ids.
  REQUIRE(reloaded.matrix.count_ground_truth() == matrix.count_ground_truth());
  for (int r = 0; r < reloaded.matrix.num_users(); ++r) {
    for (int p = 0; p < reloaded.matrix.num_items(); ++p) {
      if (!reloaded.matrix.ground_truth(r, p)) {
        continue;
      }
      const int orig_r = std::stoi(reloaded.user_ids[r].substr(1));
      const int orig_p = std::stoi(reloaded.item_ids[p].substr(1));
      CHECK(matrix.ground_truth(orig_r, orig_p));
      CHECK(reloaded.matrix.value(r, p) == matrix.value(orig_r, orig_p));
    }
  }
}

TEST_CASE("generate_synthetic rank-1 noiseless is an exact outer product") {
  const SuitabilityMatrix matrix = generate_synthetic(6, 5, 1, 0.0, {-10.0, 10.0}, 1.0, 5);
  // Every 2x2 minor of a rank-1 matrix vanishes.
  for (int r1 = 0; r1 < 5; ++r1) {
    for (int r2 = r1 + 1; r2 < 6; ++r2) {
      for (int p1 = 0; p1 < 4; ++p1) {
        for (int p2 = p1 + 1; p2 < 5; ++p2) {
          const double det = matrix.value(r1, p1) * matrix.value(r2, p2) -
                             matrix.value(r1, p2) * matrix.value(r2, p1);
          CHECK(std::fabs(det) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("generate_synthetic rank-2 noiseless has a vanishing third singular value") {
  const SuitabilityMatrix matrix = generate_synthetic(8, 6, 2, 0.0, {-10.0, 10.0}, 1.0, 6);
  const std::vector<double> sv = singular_values(matrix.values());
  REQUIRE(sv.size() >= 3);
  CHECK(sv[2] < 1e-8 * sv[0]);
  CHECK(sv[1] > 1e-3 * sv[0]);  // genuinely rank two
}

TEST_CASE("generate_synthetic respects range, density and seeds") {
  const SuitabilityMatrix a = generate_synthetic(10, 8, 2, 1.0, {-10.0, 10.0}, 0.5, 12);
  const SuitabilityMatrix b = generate_synthetic(10, 8, 2, 1.0, {-10.0, 10.0}, 0.5, 12);
  CHECK(a.ground_truth_mask() == b.ground_truth_mask());
  CHECK(a.count_ground_truth() == 40);
  for (int r = 0; r < 10; ++r) {
    for (int p = 0; p < 8; ++p) {
      if (a.ground_truth(r, p)) {
        CHECK(a.value(r, p) == b.value(r, p));
      }
    }
  }
  for (int r = 0; r < 10; ++r) {
    for (int p = 0; p < 8; ++p) {
      if (a.ground_truth(r, p)) {
        CHECK(a.value(r, p) >= -10.0);
        CHECK(a.value(r, p) <= 10.0);
      }
    }
  }
  CHECK_THROWS_AS(generate_synthetic(4, 4, 5, 0.0, {-1.0, 1.0}, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic(4, 4, 1, 0.0, {-1.0, 1.0}, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic(4, 4, 1, 0.0, {1.0, 2.0}, 1.0, 1), std::invalid_argument);
}

TEST_CASE("toy_fig2 shape and constraints") {
  const auto [matrix, constraints] = toy_fig2(7);
  CHECK(matrix.num_users() == 3);
  CHECK(matrix.num_items() == 6);
  CHECK(constraints.r_min == 1);
  CHECK(constraints.r_max == 1);
  CHECK(constraints.p_min == 2);
  CHECK(constraints.p_max == 2);
  const auto [again, _] = toy_fig2(7);
  CHECK(again.values() == matrix.values());
}

TEST_CASE("filter_ratings keeps the densest items then prunes sparse users") {
  const LoadedRatings r = load_text(
      "user_id,item_id,score\n"
      "u1,a,1\n"
      "u1,b,2\n"
      "u1,c,3\n"
      "u2,a,4\n"
      "u2,b,5\n"
      "u3,a,6\n");
  // Items by count: a=3, b=2, c=1. Keep top 2, then users with >= 2 ratings.
  const LoadedRatings f = filter_ratings(r, 2, 2);
  CHECK(f.item_ids == std::vector<std::string>{"a", "b"});
  CHECK(f.user_ids == std::vector<std::string>{"u1", "u2"});
  CHECK(f.matrix.count_ground_truth() == 4);
  CHECK_THROWS_AS(filter_ratings(r, 10, 0), ParseError);
}

TEST_CASE("app config parses defaults, overrides and rejects unknown keys") {
  const AppConfig defaults = parse_app_config_json("{}", "inline");
  CHECK(defaults.dataset_path.empty());
  CHECK(defaults.sim.batch_size == 10);
  CHECK(defaults.output_path == "results.csv");
  CHECK(defaults.resolve_constraints(42).r_max == 42);

  const AppConfig parsed = parse_app_config_json(R"({
    "dataset": "scores.csv",
    "constraints": {"r_min": 2, "r_max": 5, "p_min": 1, "p_max": 3},
    "model": {"latent_dim": 4, "alpha": 2.0},
    "sim": {"batch_size": 7, "mode": "sequential", "strategies": ["random", "ybm"]},
    "output": "out.csv"
  })", "inline");
  CHECK(parsed.dataset_path == "scores.csv");
  CHECK(parsed.r_min == 2);
  CHECK(parsed.r_max == 5);
  CHECK(parsed.sim.model.latent_dim == 4);
  CHECK(parsed.sim.model.alpha == 2.0);
  CHECK(parsed.sim.batch_size == 7);
  CHECK(parsed.sim.mode == SimConfig::Mode::kSequential);
  REQUIRE(parsed.sim.strategies.size() == 2);
  CHECK(parsed.sim.strategies[1] == StrategyKind::kYbarMax);
  CHECK(parsed.output_path == "out.csv");

  CHECK_THROWS_AS(parse_app_config_json(R"({"bogus": 1})", "inline"), ParseError);
  CHECK_THROWS_AS(parse_app_config_json(R"({"sim": {"mode": "melty"}})", "inline"), ParseError);
  CHECK_THROWS_AS(parse_app_config_json("[1,2]", "inline"), ParseError);
}

TEST_CASE("format_fixed renders six decimals") {
  CHECK(format_fixed(1.0) == "1.000000");
  CHECK(format_fixed(-0.1234567) == "-0.123457");
}
