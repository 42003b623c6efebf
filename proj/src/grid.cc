// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pixground/grid.h"

#include <string>
#include <utility>

#include "pixground/error.h"

namespace pixground {

Grid::Grid(std::size_t rows, std::size_t cols, std::vector<double> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
  if (cells_.size() != rows_ * cols_) {
    throw InvalidArgument("grid payload has " + std::to_string(cells_.size()) +
                          " cells, expected " + std::to_string(rows_ * cols_));
  }
}

}  // namespace pixground
