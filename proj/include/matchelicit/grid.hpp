#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace matchelicit {

// Dense row-major grid. Target datasets are small after subsetting, so
// everything is stored dense and copied by value.
template <typename T>
class Grid {
 public:
  Grid() = default;

  Grid(int rows, int cols, T fill = T{}) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) {
      throw std::invalid_argument("Grid: negative dimensions");
    }
    data_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
  }

  static Grid from_rows(std::initializer_list<std::initializer_list<T>> rows) {
    const int nr = static_cast<int>(rows.size());
    const int nc = nr > 0 ? static_cast<int>(rows.begin()->size()) : 0;
    Grid g(nr, nc);
    int r = 0;
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != nc) {
        throw std::invalid_argument("Grid: ragged rows");
      }
      int c = 0;
      for (const T& v : row) {
        g(r, c++) = v;
      }
      ++r;
    }
    return g;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int r, int c) { return data_[index(r, c)]; }
  const T& operator()(int r, int c) const { return data_[index(r, c)]; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return rows_ == other.rows() && cols_ == other.cols();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using ScoreGrid = Grid<double>;
using MaskGrid = Grid<std::uint8_t>;

}  // namespace matchelicit
