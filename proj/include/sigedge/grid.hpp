#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sigedge {

/// Dense row-major 2-D grid indexed as (row, col).
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

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int r, int c) noexcept { return data_[index(r, c)]; }
  const T& operator()(int r, int c) const noexcept { return data_[index(r, c)]; }

  bool contains(int r, int c) const noexcept {
    return r >= 0 && r < rows_ && c >= 0 && c < cols_;
  }

  std::span<T> row(int r) noexcept {
    return {data_.data() + index(r, 0), static_cast<std::size_t>(cols_)};
  }
  std::span<const T> row(int r) const noexcept {
    return {data_.data() + index(r, 0), static_cast<std::size_t>(cols_)};
  }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return rows_ == other.rows() && cols_ == other.cols();
  }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t index(int r, int c) const noexcept {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using Image = Grid<double>;
using Mask = Grid<std::uint8_t>;

template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const std::string& what) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument(what + ": grid shapes differ");
  }
}

}  // namespace sigedge
