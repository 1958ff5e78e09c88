#include "matchelicit/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "matchelicit/errors.hpp"

namespace matchelicit {

namespace {

constexpr double kPivotTolerance = 1e-12;

void require_square_symmetric(const ScoreGrid& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square and non-empty");
  }
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = i + 1; j < a.cols(); ++j) {
      const double d = std::fabs(a(i, j) - a(j, i));
      const double scale = std::max({1.0, std::fabs(a(i, j)), std::fabs(a(j, i))});
      if (d > 1e-9 * scale) {
        throw std::invalid_argument(std::string(who) + ": matrix is not symmetric");
      }
    }
  }
}

}  // namespace

ScoreGrid cholesky(const ScoreGrid& a) {
  require_square_symmetric(a, "cholesky");
  const int d = a.rows();
  ScoreGrid lower(d, d, 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = a(i, j);
      for (int k = 0; k < j; ++k) {
        sum -= lower(i, k) * lower(j, k);
      }
      if (i == j) {
        if (sum <= kPivotTolerance) {
          throw NumericalError("cholesky: matrix not positive definite (pivot " +
                               std::to_string(sum) + " at index " + std::to_string(i) + ")");
        }
        lower(i, i) = std::sqrt(sum);
      } else {
        lower(i, j) = sum / lower(j, j);
      }
    }
  }
  return lower;
}

std::vector<double> cholesky_solve(const ScoreGrid& lower, const std::vector<double>& b) {
  const int d = lower.rows();
  if (static_cast<int>(b.size()) != d) {
    throw std::invalid_argument("cholesky_solve: dimension mismatch");
  }
  std::vector<double> y(b);
  for (int i = 0; i < d; ++i) {
    double sum = y[i];
    for (int k = 0; k < i; ++k) {
      sum -= lower(i, k) * y[k];
    }
    y[i] = sum / lower(i, i);
  }
  for (int i = d - 1; i >= 0; --i) {
    double sum = y[i];
    for (int k = i + 1; k < d; ++k) {
      sum -= lower(k, i) * y[k];
    }
    y[i] = sum / lower(i, i);
  }
  return y;
}

ScoreGrid spd_inverse(const ScoreGrid& a) {
  const ScoreGrid lower = cholesky(a);
  const int d = a.rows();
  ScoreGrid inv(d, d, 0.0);
  std::vector<double> unit(d, 0.0);
  for (int c = 0; c < d; ++c) {
    unit[c] = 1.0;
    const std::vector<double> col = cholesky_solve(lower, unit);
    for (int r = 0; r < d; ++r) {
      inv(r, c) = col[r];
    }
    unit[c] = 0.0;
  }
  // Symmetrize away the last-ulp asymmetry from the two triangular solves.
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const double v = 0.5 * (inv(i, j) + inv(j, i));
      inv(i, j) = v;
      inv(j, i) = v;
    }
  }
  return inv;
}

std::vector<double> sample_mvn(const std::vector<double>& mean,
                               const ScoreGrid& covariance, RngStream& rng) {
  const int d = static_cast<int>(mean.size());
  if (covariance.rows() != d || covariance.cols() != d) {
    throw std::invalid_argument("sample_mvn: dimension mismatch");
  }
  const ScoreGrid lower = cholesky(covariance);
  std::vector<double> z(d);
  for (auto& v : z) {
    v = rng.normal();
  }
  std::vector<double> out(mean);
  for (int i = 0; i < d; ++i) {
    double acc = 0.0;
    for (int k = 0; k <= i; ++k) {
      acc += lower(i, k) * z[k];
    }
    out[i] += acc;
  }
  return out;
}

std::vector<double> sample_mvn_precision(const std::vector<double>& mean,
                                         const ScoreGrid& precision, RngStream& rng) {
  const int d = static_cast<int>(mean.size());
  if (precision.rows() != d || precision.cols() != d) {
    throw std::invalid_argument("sample_mvn_precision: dimension mismatch");
  }
  const ScoreGrid lower = cholesky(precision);
  std::vector<double> z(d);
  for (auto& v : z) {
    v = rng.normal();
  }
  // Solve L^T y = z; cov(y) = L^-T L^-1 = precision^-1.
  std::vector<double> y(d);
  for (int i = d - 1; i >= 0; --i) {
    double sum = z[i];
    for (int k = i + 1; k < d; ++k) {
      sum -= lower(k, i) * y[k];
    }
    y[i] = sum / lower(i, i);
  }
  std::vector<double> out(mean);
  for (int i = 0; i < d; ++i) {
    out[i] += y[i];
  }
  return out;
}

ScoreGrid sample_wishart(double dof, const ScoreGrid& scale, RngStream& rng) {
  require_square_symmetric(scale, "sample_wishart");
  const int d = scale.rows();
  if (dof < static_cast<double>(d)) {
    throw std::invalid_argument("sample_wishart: dof must be >= dimension");
  }
  const ScoreGrid lower = cholesky(scale);
  ScoreGrid bartlett(d, d, 0.0);
  for (int i = 0; i < d; ++i) {
    bartlett(i, i) = std::sqrt(rng.chi_squared(dof - static_cast<double>(i)));
    for (int j = 0; j < i; ++j) {
      bartlett(i, j) = rng.normal();
    }
  }
  // W = (L A)(L A)^T
  ScoreGrid la(d, d, 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int k = j; k <= i; ++k) {  // L and A are lower-triangular
        acc += lower(i, k) * bartlett(k, j);
      }
      la(i, j) = acc;
    }
  }
  ScoreGrid w(d, d, 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j <= i; ++j) {
      double acc = 0.0;
      for (int k = 0; k < d; ++k) {
        acc += la(i, k) * la(j, k);
      }
      w(i, j) = acc;
      w(j, i) = acc;
    }
  }
  return w;
}

double gaussian_entropy(double variance) {
  if (!(variance > 0.0)) {
    throw std::invalid_argument("gaussian_entropy: variance must be positive");
  }
  constexpr double kTwoPiE = 17.079468445347132;  // 2*pi*e
  return 0.5 * std::log(kTwoPiE * variance);
}

double bernoulli_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("bernoulli_entropy: p must lie in [0, 1]");
  }
  double h = 0.0;
  if (p > 0.0) {
    h -= p * std::log(p);
  }
  if (p < 1.0) {
    h -= (1.0 - p) * std::log(1.0 - p);
  }
  return h;
}

}  // namespace matchelicit
