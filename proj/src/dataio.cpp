#include "matchelicit/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "matchelicit/errors.hpp"
#include "matchelicit/rng.hpp"

namespace matchelicit {

namespace {

constexpr const char* kRatingsHeader = "user_id,item_id,score";

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  return line;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

double parse_score(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError(where + ": non-numeric score '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(value)) {
    throw ParseError(where + ": non-numeric score '" + text + "'");
  }
  return value;
}

}  // namespace

LoadedRatings load_ratings_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open ratings file '" + path + "'");
  }
  return load_ratings_csv(in, path);
}

LoadedRatings load_ratings_csv(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != kRatingsHeader) {
    throw ParseError(name + ": expected header '" + std::string(kRatingsHeader) + "'");
  }

  std::vector<std::string> user_ids;
  std::vector<std::string> item_ids;
  std::unordered_map<std::string, int> user_index;
  std::unordered_map<std::string, int> item_index;
  struct Triple {
    int user;
    int item;
    double score;
  };
  std::vector<Triple> triples;

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) {
      continue;
    }
    const std::string where = name + ":" + std::to_string(line_no);
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != 3) {
      throw ParseError(where + ": expected 3 fields, got " + std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError(where + ": empty user or item id");
    }
    const auto intern = [](std::unordered_map<std::string, int>& index,
                           std::vector<std::string>& ids, const std::string& id) {
      const auto [it, inserted] = index.emplace(id, static_cast<int>(ids.size()));
      if (inserted) {
        ids.push_back(id);
      }
      return it->second;
    };
    const int u = intern(user_index, user_ids, fields[0]);
    const int p = intern(item_index, item_ids, fields[1]);
    triples.push_back({u, p, parse_score(fields[2], where)});
  }
  if (triples.empty()) {
    throw ParseError(name + ": no data rows");
  }

  const int n = static_cast<int>(user_ids.size());
  const int m = static_cast<int>(item_ids.size());
  ScoreGrid values(n, m, 0.0);
  MaskGrid ground_truth(n, m, 0);
  for (const Triple& t : triples) {
    if (ground_truth(t.user, t.item)) {
      throw ParseError(name + ": duplicate rating for (" + user_ids[t.user] + "," +
                       item_ids[t.item] + ")");
    }
    ground_truth(t.user, t.item) = 1;
    values(t.user, t.item) = t.score;
  }
  return {SuitabilityMatrix(std::move(values), std::move(ground_truth)), std::move(user_ids),
          std::move(item_ids)};
}

void save_ratings_csv(std::ostream& out, const SuitabilityMatrix& matrix,
                      const std::vector<std::string>& user_ids,
                      const std::vector<std::string>& item_ids) {
  if (static_cast<int>(user_ids.size()) != matrix.num_users() ||
      static_cast<int>(item_ids.size()) != matrix.num_items()) {
    throw std::invalid_argument("save_ratings_csv: id list sizes do not match the matrix");
  }
  out << kRatingsHeader << "\n";
  char buf[40];
  for (int r = 0; r < matrix.num_users(); ++r) {
    for (int p = 0; p < matrix.num_items(); ++p) {
      if (matrix.ground_truth(r, p)) {
        std::snprintf(buf, sizeof(buf), "%.17g", matrix.value(r, p));
        out << user_ids[r] << ',' << item_ids[p] << ',' << buf << "\n";
      }
    }
  }
}

void save_ratings_csv(const std::string& path, const LoadedRatings& ratings) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open '" + path + "' for writing");
  }
  save_ratings_csv(out, ratings.matrix, ratings.user_ids, ratings.item_ids);
}

LoadedRatings filter_ratings(const LoadedRatings& ratings, int min_user_ratings, int top_items) {
  const SuitabilityMatrix& matrix = ratings.matrix;
  const int n = matrix.num_users();
  const int m = matrix.num_items();

  std::vector<int> item_counts(m, 0);
  for (int p = 0; p < m; ++p) {
    for (int r = 0; r < n; ++r) {
      item_counts[p] += matrix.ground_truth(r, p) ? 1 : 0;
    }
  }
  std::vector<int> item_order(m);
  for (int p = 0; p < m; ++p) {
    item_order[p] = p;
  }
  if (top_items > 0 && top_items < m) {
    std::stable_sort(item_order.begin(), item_order.end(),
                     [&](int a, int b) { return item_counts[a] > item_counts[b]; });
    item_order.resize(top_items);
    std::sort(item_order.begin(), item_order.end());  // keep original item order
  }

  std::vector<int> user_keep;
  for (int r = 0; r < n; ++r) {
    int count = 0;
    for (const int p : item_order) {
      count += matrix.ground_truth(r, p) ? 1 : 0;
    }
    if (count >= min_user_ratings && count > 0) {
      user_keep.push_back(r);
    }
  }
  if (user_keep.empty() || item_order.empty()) {
    throw ParseError("filter_ratings: no users or items survive the filter");
  }

  const int nn = static_cast<int>(user_keep.size());
  const int mm = static_cast<int>(item_order.size());
  ScoreGrid values(nn, mm, 0.0);
  MaskGrid ground_truth(nn, mm, 0);
  for (int i = 0; i < nn; ++i) {
    for (int j = 0; j < mm; ++j) {
      const int r = user_keep[i];
      const int p = item_order[j];
      if (matrix.ground_truth(r, p)) {
        ground_truth(i, j) = 1;
        values(i, j) = matrix.value(r, p);
      }
    }
  }
  std::vector<std::string> user_ids;
  std::vector<std::string> item_ids;
  for (const int r : user_keep) {
    user_ids.push_back(ratings.user_ids[r]);
  }
  for (const int p : item_order) {
    item_ids.push_back(ratings.item_ids[p]);
  }
  return {SuitabilityMatrix(std::move(values), std::move(ground_truth)), std::move(user_ids),
          std::move(item_ids)};
}

SuitabilityMatrix generate_synthetic(int num_users, int num_items, int rank, double noise_sd,
                                     std::pair<double, double> score_range, double density,
                                     std::uint64_t seed) {
  if (num_users < 1 || num_items < 1) {
    throw std::invalid_argument("generate_synthetic: dimensions must be positive");
  }
  if (rank < 1 || rank > std::min(num_users, num_items)) {
    throw std::invalid_argument("generate_synthetic: rank must lie in [1, min(N, M)]");
  }
  if (!(density > 0.0 && density <= 1.0)) {
    throw std::invalid_argument("generate_synthetic: density must lie in (0, 1]");
  }
  const auto [lo, hi] = score_range;
  if (!(lo < hi) || lo > 0.0 || hi < 0.0) {
    throw std::invalid_argument(
        "generate_synthetic: score_range must straddle zero (pure scaling preserves rank)");
  }
  if (!(noise_sd >= 0.0)) {
    throw std::invalid_argument("generate_synthetic: noise_sd must be non-negative");
  }

  RngStream rng(seed);
  ScoreGrid left(num_users, rank);
  ScoreGrid right(num_items, rank);
  for (auto& v : left.data()) {
    v = rng.normal();
  }
  for (auto& v : right.data()) {
    v = rng.normal();
  }
  ScoreGrid values(num_users, num_items, 0.0);
  double max_pos = 0.0;
  double min_neg = 0.0;
  for (int r = 0; r < num_users; ++r) {
    for (int p = 0; p < num_items; ++p) {
      double acc = 0.0;
      for (int k = 0; k < rank; ++k) {
        acc += left(r, k) * right(p, k);
      }
      values(r, p) = acc;
      max_pos = std::max(max_pos, acc);
      min_neg = std::min(min_neg, acc);
    }
  }
  // Largest c with c * product inside [lo, hi]; both bounds are safe because
  // the range straddles zero.
  double scale = std::numeric_limits<double>::infinity();
  if (max_pos > 0.0) {
    scale = std::min(scale, hi / max_pos);
  }
  if (min_neg < 0.0) {
    scale = std::min(scale, lo / min_neg);
  }
  if (!std::isfinite(scale)) {
    scale = 1.0;  // all-zero product (cannot happen in practice)
  }
  for (auto& v : values.data()) {
    v = std::clamp(v * scale + noise_sd * rng.normal(), lo, hi);
  }

  MaskGrid ground_truth(num_users, num_items, 1);
  const auto total = static_cast<std::size_t>(num_users) * num_items;
  const auto keep = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(density * total)));
  if (keep < total) {
    std::vector<std::size_t> order(total);
    for (std::size_t i = 0; i < total; ++i) {
      order[i] = i;
    }
    for (std::size_t i = 0; i + 1 < total; ++i) {
      const std::size_t j = i + rng.uniform_int(total - i);
      std::swap(order[i], order[j]);
    }
    for (std::size_t i = keep; i < total; ++i) {
      ground_truth.data()[order[i]] = 0;
    }
  }
  return SuitabilityMatrix(std::move(values), std::move(ground_truth));
}

std::pair<SuitabilityMatrix, MatchConstraints> toy_fig2(std::uint64_t seed) {
  RngStream rng(seed);
  ScoreGrid values(3, 6, 0.0);
  for (auto& v : values.data()) {
    v = rng.uniform(0.0, 3.0);
  }
  return {SuitabilityMatrix::dense(std::move(values)), MatchConstraints{1, 1, 2, 2}};
}

}  // namespace matchelicit
