#pragma once

#include <stdexcept>

namespace matchelicit {

// Malformed input files or configuration documents.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// No binary assignment can satisfy the degree bounds.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Score-model fitting failed (empty data, numerical blow-up).
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Low-level numerical failure (e.g. a Cholesky pivot below tolerance).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace matchelicit
