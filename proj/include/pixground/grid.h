// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pixground {

// Dense row-major h x w grid of attention values.
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), cells_(rows * cols, fill) {}
  Grid(std::size_t rows, std::size_t cols, std::vector<double> cells);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return cells_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }

  std::span<double> cells() { return cells_; }
  std::span<const double> cells() const { return cells_; }

  bool same_dims(const Grid& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> cells_;
};

}  // namespace pixground
