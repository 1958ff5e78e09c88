#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "matchelicit/errors.hpp"
#include "matchelicit/rng.hpp"
#include "matchelicit/types.hpp"

using namespace matchelicit;

namespace {

Matching matching_from(std::initializer_list<std::initializer_list<std::uint8_t>> rows) {
  return Matching{MaskGrid::from_rows(rows)};
}

}  // namespace

TEST_CASE("objective_value on the diagonal") {
  const auto scores = SuitabilityMatrix::dense(ScoreGrid::from_rows({{3.0, 0.0}, {0.0, 4.0}}));
  const Matching diag = matching_from({{1, 0}, {0, 1}});
  CHECK(objective_value(diag, scores, false) == doctest::Approx(7.0));
  const Matching empty = matching_from({{0, 0}, {0, 0}});
  CHECK(objective_value(empty, scores, false) == 0.0);
}

TEST_CASE("objective_value equals the brute double-loop sum") {
  RngStream rng(404);
  for (int rep = 0; rep < 30; ++rep) {
    ScoreGrid s(3, 3);
    MaskGrid y(3, 3);
    for (auto& v : s.data()) {
      v = rng.uniform(-5.0, 5.0);
    }
    for (auto& v : y.data()) {
      v = rng.uniform() < 0.5 ? 1 : 0;
    }
    double expected = 0.0;
    for (int r = 0; r < 3; ++r) {
      for (int p = 0; p < 3; ++p) {
        expected += y(r, p) ? s(r, p) : 0.0;
      }
    }
    const auto matrix = SuitabilityMatrix::dense(s);
    CHECK(objective_value(Matching{y}, matrix, false) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("objective_value rejects mismatched dimensions") {
  const auto scores = SuitabilityMatrix::dense(ScoreGrid(2, 3, 1.0));
  CHECK_THROWS_AS(objective_value(Matching{MaskGrid(2, 2, 0)}, scores, false),
                  std::invalid_argument);
}

TEST_CASE("objective_value is linear in the scores") {
  RngStream rng(505);
  for (int rep = 0; rep < 20; ++rep) {
    ScoreGrid s1(4, 3);
    ScoreGrid s2(4, 3);
    MaskGrid y(4, 3);
    for (auto& v : s1.data()) {
      v = rng.uniform(-2.0, 2.0);
    }
    for (auto& v : s2.data()) {
      v = rng.uniform(-2.0, 2.0);
    }
    for (auto& v : y.data()) {
      v = rng.uniform() < 0.4 ? 1 : 0;
    }
    const double a = rng.uniform(-3.0, 3.0);
    const double b = rng.uniform(-3.0, 3.0);
    ScoreGrid mix(4, 3);
    for (std::size_t i = 0; i < mix.size(); ++i) {
      mix.data()[i] = a * s1.data()[i] + b * s2.data()[i];
    }
    const Matching m{y};
    const double lhs = objective_value(m, SuitabilityMatrix::dense(mix), false);
    const double rhs = a * objective_value(m, SuitabilityMatrix::dense(s1), false) +
                       b * objective_value(m, SuitabilityMatrix::dense(s2), false);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("missing ground truth contributes zero under the restrict flag") {
  ScoreGrid values = ScoreGrid::from_rows({{2.0, 5.0}, {1.0, 3.0}});
  MaskGrid gt = MaskGrid::from_rows({{1, 0}, {1, 1}});
  const SuitabilityMatrix scores(values, gt);
  const Matching m = matching_from({{0, 1}, {1, 0}});
  // (0,1) has no ground truth: restricted objective counts only (1,0).
  CHECK(objective_value(m, scores, true) == doctest::Approx(1.0));
  // Unrestricted, the sentinel propagates.
  CHECK(std::isnan(objective_value(m, scores, false)));
}

TEST_CASE("SuitabilityMatrix enforces its invariants") {
  CHECK_THROWS_AS(SuitabilityMatrix(ScoreGrid(0, 0), MaskGrid(0, 0)), std::invalid_argument);
  ScoreGrid values(2, 2, 0.0);
  values(0, 0) = std::nan("");
  CHECK_THROWS_AS(SuitabilityMatrix(values, MaskGrid(2, 2, 1)), std::invalid_argument);

  SuitabilityMatrix ok(ScoreGrid(2, 2, 1.5), MaskGrid::from_rows({{1, 0}, {1, 1}}));
  CHECK(ok.count_ground_truth() == 3);
  CHECK(ok.count_observed() == 0);
  CHECK_THROWS_AS(ok.set_observed(0, 1), std::invalid_argument);  // no ground truth there
  ok.set_observed(0, 0);
  CHECK(ok.count_observed() == 1);
  CHECK(ok.observed(0, 0));
  CHECK(std::isnan(ok.value(0, 1)));  // sentinel where no ground truth

  MaskGrid bad_mask = MaskGrid::from_rows({{0, 1}, {0, 0}});
  CHECK_THROWS_AS(ok.set_observed_mask(bad_mask), std::invalid_argument);
}

TEST_CASE("MatchConstraints validation") {
  CHECK_THROWS_AS((MatchConstraints{-1, 2, 0, 1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((MatchConstraints{2, 1, 0, 1}.validate()), std::invalid_argument);
  CHECK_NOTHROW((MatchConstraints{0, 0, 0, 0}.validate()));
}

TEST_CASE("Matching bound validation") {
  const Matching m = matching_from({{1, 0}, {0, 1}});
  CHECK_NOTHROW(m.validate_bounds(MatchConstraints{1, 1, 1, 1}));
  CHECK_THROWS_AS(m.validate_bounds(MatchConstraints{2, 2, 1, 1}), InfeasibleError);
  CHECK_THROWS_AS(m.validate_bounds(MatchConstraints{1, 1, 2, 2}), InfeasibleError);
}
