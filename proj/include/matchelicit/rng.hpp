#pragma once

#include <cstdint>

namespace matchelicit {

// Deterministic seeded random stream: xoshiro256++ state initialized by
// splitmix64. The integer and uniform layers are bit-reproducible for a given
// seed independent of platform; normal/gamma draws additionally go through
// libm, so they are reproducible for a given build.
//
// Streams are single-owner. Parallel consumers derive independent streams via
// child(i), which reseeds from splitmix64 mixing of (seed, i).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);

  // Unbiased integer on [0, bound); bound must be positive.
  std::uint64_t uniform_int(std::uint64_t bound);

  // Standard normal via Box-Muller (cosine branch, two uniforms per draw, no
  // cached state).
  double normal();

  // Gamma(shape, 1) via Marsaglia-Tsang squeeze; shape > 0.
  double gamma(double shape);

  // Chi-squared with real dof > 0.
  double chi_squared(double dof);

  // Independent derived stream for index i; deterministic in (seed, i).
  RngStream child(std::uint64_t index) const;

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_;
};

}  // namespace matchelicit
