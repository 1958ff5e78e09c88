#pragma once

#include <vector>

#include "matchelicit/grid.hpp"
#include "matchelicit/rng.hpp"

namespace matchelicit {

// Lower-triangular L with L * L^T == a (relative error < 1e-10 on
// well-conditioned input). Throws invalid_argument when a is not square or
// not symmetric, NumericalError when a pivot falls at or below the 1e-12
// absolute tolerance. Matrices here are small (latent dimension <= 15).
ScoreGrid cholesky(const ScoreGrid& a);

// Solves (L L^T) x = b given the Cholesky factor.
std::vector<double> cholesky_solve(const ScoreGrid& lower, const std::vector<double>& b);

// Inverse of an SPD matrix via its Cholesky factor.
ScoreGrid spd_inverse(const ScoreGrid& a);

// Draw from N(mean, covariance): mean + L z with z i.i.d. standard normal.
std::vector<double> sample_mvn(const std::vector<double>& mean,
                               const ScoreGrid& covariance, RngStream& rng);

// Draw from N(mean, precision^-1) without forming the covariance: with
// precision = L L^T, returns mean + L^-T z.
std::vector<double> sample_mvn_precision(const std::vector<double>& mean,
                                         const ScoreGrid& precision, RngStream& rng);

// Wishart(dof, scale) via Bartlett decomposition; requires dof >= dimension
// and SPD scale. Draw order: per row i, the diagonal chi-squared(dof - i)
// value first, then the subdiagonal normals.
ScoreGrid sample_wishart(double dof, const ScoreGrid& scale, RngStream& rng);

// Differential entropy of a Gaussian with the given variance, in nats.
double gaussian_entropy(double variance);

// Entropy of Bernoulli(p) in nats, with 0 ln 0 == 0.
double bernoulli_entropy(double p);

}  // namespace matchelicit
