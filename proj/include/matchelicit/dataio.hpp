#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "matchelicit/types.hpp"

namespace matchelicit {

// A ratings file densified into a SuitabilityMatrix, with the external-ID
// mapping in first-appearance order (user_ids[i] names dense user index i).
struct LoadedRatings {
  SuitabilityMatrix matrix;
  std::vector<std::string> user_ids;
  std::vector<std::string> item_ids;
};

// Reads `user_id,item_id,score` CSV (exact header, UTF-8, LF or CRLF).
// Throws ParseError on malformed rows, duplicate pairs (named) or an empty
// file.
LoadedRatings load_ratings_csv(const std::string& path);
LoadedRatings load_ratings_csv(std::istream& in, const std::string& name);

// Writes the ground-truth triples back out at full precision, so
// load(save(x)) reproduces grid and masks exactly.
void save_ratings_csv(std::ostream& out, const SuitabilityMatrix& matrix,
                      const std::vector<std::string>& user_ids,
                      const std::vector<std::string>& item_ids);
void save_ratings_csv(const std::string& path, const LoadedRatings& ratings);

// Keeps the top_items items with the most ratings (0 = all), then drops users
// with fewer than min_user_ratings remaining ratings, remapping indices.
LoadedRatings filter_ratings(const LoadedRatings& ratings, int min_user_ratings, int top_items);

// Low-rank synthetic dataset: standard-normal factor product scaled (purely,
// preserving rank) to fit score_range, plus N(0, noise_sd^2) noise clamped to
// the range, with a uniformly random density-fraction of entries marked
// available. score_range must straddle zero.
SuitabilityMatrix generate_synthetic(int num_users, int num_items, int rank, double noise_sd,
                                     std::pair<double, double> score_range, double density,
                                     std::uint64_t seed);

// The 3 users x 6 items toy instance: uniform random scores, one user per
// item, two items per user.
std::pair<SuitabilityMatrix, MatchConstraints> toy_fig2(std::uint64_t seed);

}  // namespace matchelicit
