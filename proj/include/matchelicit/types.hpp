#pragma once

#include "matchelicit/grid.hpp"

namespace matchelicit {

// Per-item and per-user degree bounds of the matching program. r_* bound the
// number of users per item (column sums), p_* the number of items per user
// (row sums).
struct MatchConstraints {
  int r_min = 0;
  int r_max = 0;
  int p_min = 0;
  int p_max = 0;

  // Throws invalid_argument on negative or crossed bounds.
  void validate() const;

  friend bool operator==(const MatchConstraints&, const MatchConstraints&) = default;
};

// Dense user x item score grid with two masks: ground_truth marks entries the
// dataset actually contains, observed marks entries that have been elicited.
// Entries without ground truth hold a NaN sentinel and are excluded from
// evaluation when requested; they remain eligible for matching.
class SuitabilityMatrix {
 public:
  SuitabilityMatrix(ScoreGrid values, MaskGrid ground_truth);

  // Fully available matrix: every entry is ground truth, nothing observed.
  static SuitabilityMatrix dense(ScoreGrid values);

  int num_users() const { return values_.rows(); }
  int num_items() const { return values_.cols(); }

  double value(int user, int item) const { return values_(user, item); }
  const ScoreGrid& values() const { return values_; }

  bool ground_truth(int user, int item) const { return ground_truth_(user, item) != 0; }
  bool observed(int user, int item) const { return observed_(user, item) != 0; }
  const MaskGrid& ground_truth_mask() const { return ground_truth_; }
  const MaskGrid& observed_mask() const { return observed_; }

  // Marks an entry elicited; the entry must carry ground truth.
  void set_observed(int user, int item);
  // Replaces the whole observed mask; every set bit must carry ground truth.
  void set_observed_mask(const MaskGrid& observed);
  void clear_observed();

  int count_ground_truth() const;
  int count_observed() const;

 private:
  ScoreGrid values_;
  MaskGrid ground_truth_;
  MaskGrid observed_;
};

// Binary assignment y_rp.
struct Matching {
  MaskGrid assign;

  int num_users() const { return assign.rows(); }
  int num_items() const { return assign.cols(); }
  int row_sum(int user) const;
  int col_sum(int item) const;

  // Throws InfeasibleError when any row/column sum violates the bounds the
  // matching was solved under.
  void validate_bounds(const MatchConstraints& constraints) const;
};

// Monte-Carlo average of optimal matchings; prob(r,p) estimates the
// probability that pair (r,p) is matched.
struct ProbabilisticMatching {
  ScoreGrid prob;
  int num_samples = 0;

  // Entries in [0,1] and row/column sums within bounds, up to tol of
  // floating-point accumulation.
  void validate_bounds(const MatchConstraints& constraints, double tol = 1e-9) const;
};

// Per-entry predictive mean and variance. Observed entries carry their
// elicited value and the fixed observed-score uncertainty.
struct ScorePosterior {
  ScoreGrid mean;
  ScoreGrid variance;
};

// One elicitation query. fallback marks selection by the random fall-back
// rule rather than the strategy criterion.
struct Query {
  int user = 0;
  int item = 0;
  bool fallback = false;

  friend bool operator==(const Query&, const Query&) = default;
};

// Sum of s_rp over assigned pairs. With restrict_to_ground_truth set, pairs
// without ground truth contribute zero; without it their NaN sentinel
// propagates, so call it restricted on partially available data.
double objective_value(const Matching& matching, const SuitabilityMatrix& scores,
                       bool restrict_to_ground_truth);

}  // namespace matchelicit
