// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pixground/attention.h"

#include <algorithm>
#include <string>
#include <tuple>

#include "pixground/error.h"
#include "pixground/rng.h"

namespace pixground {

Grid reduce_layers_heads(const RawAttention& raw, std::size_t token_index) {
  if (token_index >= raw.tokens.size()) {
    throw InvalidArgument("token index " + std::to_string(token_index) + " out of range");
  }
  if (raw.layers == 0 || raw.heads == 0 || raw.rows == 0 || raw.cols == 0) {
    throw InvalidArgument("raw attention needs positive layers, heads and grid dims");
  }
  const auto& values = raw.tokens[token_index];
  const std::size_t keys = raw.key_length(token_index);
  const std::size_t hw = raw.rows * raw.cols;
  if (values.size() != raw.layers * raw.heads * keys) {
    throw InvalidArgument("token " + std::to_string(token_index) + " has " +
                          std::to_string(values.size()) + " values, expected layers*heads*" +
                          std::to_string(keys) + " (visual slice of " + std::to_string(hw) +
                          " at offset " + std::to_string(raw.prefix_tokens) + ")");
  }

  Grid out(raw.rows, raw.cols);
  auto cells = out.cells();
  const std::size_t slices = raw.layers * raw.heads;
  for (std::size_t s = 0; s < slices; ++s) {
    const double* visual = values.data() + s * keys + raw.prefix_tokens;
    for (std::size_t k = 0; k < hw; ++k) cells[k] += visual[k];
  }
  for (auto& c : cells) c /= static_cast<double>(slices);
  return out;
}

NormalizedAttention normalize_across_outputs(std::span<const Grid> grids) {
  if (grids.empty()) throw InvalidArgument("normalization needs at least one grid");
  const Grid& first = grids.front();
  for (const auto& g : grids) {
    if (!g.same_dims(first)) throw InvalidArgument("attention grids differ in dimensions");
  }
  Grid mean(first.rows(), first.cols());
  auto m = mean.cells();
  for (const auto& g : grids) {
    auto c = g.cells();
    for (std::size_t k = 0; k < m.size(); ++k) m[k] += c[k];
  }
  for (auto& v : m) v /= static_cast<double>(grids.size());

  NormalizedAttention out;
  out.grids.reserve(grids.size());
  for (const auto& g : grids) {
    Grid n(g.rows(), g.cols());
    auto src = g.cells();
    auto dst = n.cells();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = src[k] - m[k];
    out.grids.push_back(std::move(n));
  }
  return out;
}

Grid phrase_attention(const NormalizedAttention& norm, std::size_t token_start,
                      std::size_t token_end) {
  if (token_end <= token_start) throw InvalidArgument("empty phrase token span");
  if (token_end > norm.n_tokens()) {
    throw InvalidArgument("phrase token span [" + std::to_string(token_start) + ", " +
                          std::to_string(token_end) + ") exceeds " +
                          std::to_string(norm.n_tokens()) + " tokens");
  }
  const Grid& first = norm.grids[token_start];
  Grid out(first.rows(), first.cols());
  auto dst = out.cells();
  for (std::size_t t = token_start; t < token_end; ++t) {
    auto src = norm.grids[t].cells();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += src[k];
  }
  for (auto& v : dst) v /= static_cast<double>(token_end - token_start);
  return out;
}

Grid phrase_attention(const NormalizedAttention& norm, const PhraseSpan& span) {
  return phrase_attention(norm, span.token_start, span.token_end);
}

std::pair<double, double> grid_to_image_point(std::size_t row, std::size_t col,
                                              std::size_t grid_rows, std::size_t grid_cols,
                                              MaskSize image) {
  if (grid_rows == 0 || grid_cols == 0 || image.height == 0 || image.width == 0) {
    throw InvalidArgument("grid and image dimensions must be positive");
  }
  const double x = (static_cast<double>(col) + 0.5) * image.width / static_cast<double>(grid_cols);
  const double y = (static_cast<double>(row) + 0.5) * image.height / static_cast<double>(grid_rows);
  return {x, y};
}

std::vector<AttentionPoint> top_points(const Grid& grid, std::size_t k, MaskSize image) {
  if (grid.empty()) throw InvalidArgument("argmax over an empty grid");
  if (k > grid.size()) {
    throw InvalidArgument("rank " + std::to_string(k) + " exceeds " +
                          std::to_string(grid.size()) + " grid cells");
  }
  auto cells = grid.cells();
  // Selection of the k best (value desc, index asc) in one pass.
  std::vector<std::size_t> best;
  best.reserve(k + 1);
  auto better = [&](std::size_t a, std::size_t b) {
    return cells[a] > cells[b] || (cells[a] == cells[b] && a < b);
  };
  for (std::size_t i = 0; i < cells.size() && k > 0; ++i) {
    if (best.size() == k && !better(i, best.back())) continue;
    auto pos = std::upper_bound(best.begin(), best.end(), i,
                                [&](std::size_t a, std::size_t b) { return better(a, b); });
    best.insert(pos, i);
    if (best.size() > k) best.pop_back();
  }
  std::vector<AttentionPoint> out;
  out.reserve(best.size());
  for (auto idx : best) {
    AttentionPoint p;
    p.grid_row = idx / grid.cols();
    p.grid_col = idx % grid.cols();
    std::tie(p.image_x, p.image_y) =
        grid_to_image_point(p.grid_row, p.grid_col, grid.rows(), grid.cols(), image);
    p.score = cells[idx];
    out.push_back(p);
  }
  return out;
}

AttentionPoint argmax_point(const Grid& grid, std::size_t rank, MaskSize image) {
  if (rank == 0) throw InvalidArgument("rank is 1-based");
  return top_points(grid, rank, image).back();
}

std::vector<AttentionPoint> random_points(std::size_t count, std::size_t grid_rows,
                                          std::size_t grid_cols, MaskSize image,
                                          std::uint64_t seed) {
  if (grid_rows == 0 || grid_cols == 0) throw InvalidArgument("grid dims must be positive");
  Rng rng(seed);
  std::vector<AttentionPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto cell = rng.below(grid_rows * grid_cols);
    AttentionPoint p;
    p.grid_row = cell / grid_cols;
    p.grid_col = cell % grid_cols;
    std::tie(p.image_x, p.image_y) =
        grid_to_image_point(p.grid_row, p.grid_col, grid_rows, grid_cols, image);
    out.push_back(p);
  }
  return out;
}

}  // namespace pixground
