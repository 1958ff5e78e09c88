#include "matchelicit/types.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "matchelicit/errors.hpp"

namespace matchelicit {

void MatchConstraints::validate() const {
  if (r_min < 0 || p_min < 0) {
    throw std::invalid_argument("MatchConstraints: bounds must be non-negative");
  }
  if (r_min > r_max || p_min > p_max) {
    throw std::invalid_argument("MatchConstraints: min bound exceeds max bound");
  }
}

SuitabilityMatrix::SuitabilityMatrix(ScoreGrid values, MaskGrid ground_truth)
    : values_(std::move(values)),
      ground_truth_(std::move(ground_truth)),
      observed_(values_.rows(), values_.cols(), 0) {
  if (!values_.same_shape(ground_truth_)) {
    throw std::invalid_argument("SuitabilityMatrix: values/ground_truth shape mismatch");
  }
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw std::invalid_argument("SuitabilityMatrix: needs at least one user and one item");
  }
  for (int r = 0; r < values_.rows(); ++r) {
    for (int p = 0; p < values_.cols(); ++p) {
      if (ground_truth_(r, p)) {
        if (!std::isfinite(values_(r, p))) {
          throw std::invalid_argument("SuitabilityMatrix: non-finite score at ground-truth entry (" +
                                      std::to_string(r) + "," + std::to_string(p) + ")");
        }
      } else {
        values_(r, p) = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
}

SuitabilityMatrix SuitabilityMatrix::dense(ScoreGrid values) {
  MaskGrid all(values.rows(), values.cols(), 1);
  return SuitabilityMatrix(std::move(values), std::move(all));
}

void SuitabilityMatrix::set_observed(int user, int item) {
  if (!ground_truth_(user, item)) {
    throw std::invalid_argument("set_observed: entry (" + std::to_string(user) + "," +
                                std::to_string(item) + ") has no ground truth");
  }
  observed_(user, item) = 1;
}

void SuitabilityMatrix::set_observed_mask(const MaskGrid& observed) {
  if (!observed.same_shape(observed_)) {
    throw std::invalid_argument("set_observed_mask: shape mismatch");
  }
  for (int r = 0; r < observed.rows(); ++r) {
    for (int p = 0; p < observed.cols(); ++p) {
      if (observed(r, p) && !ground_truth_(r, p)) {
        throw std::invalid_argument("set_observed_mask: observed entry (" + std::to_string(r) +
                                    "," + std::to_string(p) + ") has no ground truth");
      }
    }
  }
  observed_ = observed;
}

void SuitabilityMatrix::clear_observed() {
  observed_ = MaskGrid(values_.rows(), values_.cols(), 0);
}

int SuitabilityMatrix::count_ground_truth() const {
  int n = 0;
  for (const auto v : ground_truth_.data()) {
    n += v != 0;
  }
  return n;
}

int SuitabilityMatrix::count_observed() const {
  int n = 0;
  for (const auto v : observed_.data()) {
    n += v != 0;
  }
  return n;
}

int Matching::row_sum(int user) const {
  int s = 0;
  for (int p = 0; p < assign.cols(); ++p) {
    s += assign(user, p) != 0;
  }
  return s;
}

int Matching::col_sum(int item) const {
  int s = 0;
  for (int r = 0; r < assign.rows(); ++r) {
    s += assign(r, item) != 0;
  }
  return s;
}

void Matching::validate_bounds(const MatchConstraints& constraints) const {
  for (int r = 0; r < assign.rows(); ++r) {
    const int s = row_sum(r);
    if (s < constraints.p_min || s > constraints.p_max) {
      throw InfeasibleError("Matching: row " + std::to_string(r) + " sum " + std::to_string(s) +
                            " outside [" + std::to_string(constraints.p_min) + "," +
                            std::to_string(constraints.p_max) + "]");
    }
  }
  for (int p = 0; p < assign.cols(); ++p) {
    const int s = col_sum(p);
    if (s < constraints.r_min || s > constraints.r_max) {
      throw InfeasibleError("Matching: column " + std::to_string(p) + " sum " + std::to_string(s) +
                            " outside [" + std::to_string(constraints.r_min) + "," +
                            std::to_string(constraints.r_max) + "]");
    }
  }
}

void ProbabilisticMatching::validate_bounds(const MatchConstraints& constraints, double tol) const {
  for (const double v : prob.data()) {
    if (!(v >= -tol && v <= 1.0 + tol)) {
      throw InfeasibleError("ProbabilisticMatching: entry outside [0,1]");
    }
  }
  for (int r = 0; r < prob.rows(); ++r) {
    double s = 0.0;
    for (int p = 0; p < prob.cols(); ++p) {
      s += prob(r, p);
    }
    if (s < constraints.p_min - tol || s > constraints.p_max + tol) {
      throw InfeasibleError("ProbabilisticMatching: row " + std::to_string(r) + " sum outside bounds");
    }
  }
  for (int p = 0; p < prob.cols(); ++p) {
    double s = 0.0;
    for (int r = 0; r < prob.rows(); ++r) {
      s += prob(r, p);
    }
    if (s < constraints.r_min - tol || s > constraints.r_max + tol) {
      throw InfeasibleError("ProbabilisticMatching: column " + std::to_string(p) +
                            " sum outside bounds");
    }
  }
}

double objective_value(const Matching& matching, const SuitabilityMatrix& scores,
                       bool restrict_to_ground_truth) {
  if (matching.assign.rows() != scores.num_users() ||
      matching.assign.cols() != scores.num_items()) {
    throw std::invalid_argument("objective_value: matching/scores dimension mismatch");
  }
  double total = 0.0;
  for (int r = 0; r < scores.num_users(); ++r) {
    for (int p = 0; p < scores.num_items(); ++p) {
      if (!matching.assign(r, p)) {
        continue;
      }
      if (restrict_to_ground_truth && !scores.ground_truth(r, p)) {
        continue;
      }
      total += scores.value(r, p);
    }
  }
  return total;
}

}  // namespace matchelicit
