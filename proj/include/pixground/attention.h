// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "pixground/grid.h"
#include "pixground/rle.h"
#include "pixground/run.h"

namespace pixground {

// Un-reduced attention of each output token over its full key axis.
// Token i (0-based) attends over prefix + rows*cols + suffix + i keys: the
// language tokens before the image, the visual tokens, the language tokens
// after the image, and the i previously generated tokens.
struct RawAttention {
  std::size_t layers = 0;
  std::size_t heads = 0;
  std::size_t prefix_tokens = 0;
  std::size_t suffix_tokens = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  // tokens[i] is laid out [layer][head][key], i.e. index (l*heads + h)*keys + k.
  std::vector<std::vector<double>> tokens;

  std::size_t key_length(std::size_t token_index) const {
    return prefix_tokens + rows * cols + suffix_tokens + token_index;
  }
};

// Mean over all layers and heads of the attention paid to the visual tokens,
// reshaped to rows x cols.
Grid reduce_layers_heads(const RawAttention& raw, std::size_t token_index);

// Grids with the mean over all output tokens subtracted; entries may be
// negative and sum to zero per cell across tokens.
struct NormalizedAttention {
  std::vector<Grid> grids;

  std::size_t n_tokens() const { return grids.size(); }
};

NormalizedAttention normalize_across_outputs(std::span<const Grid> grids);

// Elementwise mean over tokens [token_start, token_end).
Grid phrase_attention(const NormalizedAttention& norm, std::size_t token_start,
                      std::size_t token_end);
Grid phrase_attention(const NormalizedAttention& norm, const PhraseSpan& span);

struct AttentionPoint {
  std::size_t grid_row = 0;
  std::size_t grid_col = 0;
  double image_x = 0.0;
  double image_y = 0.0;
  double score = 0.0;

  friend bool operator==(const AttentionPoint&, const AttentionPoint&) = default;
};

// Pixel-space center of a grid cell.
std::pair<double, double> grid_to_image_point(std::size_t row, std::size_t col,
                                              std::size_t grid_rows, std::size_t grid_cols,
                                              MaskSize image);

// The rank-th highest cell (rank 1 = max). Ranks enumerate distinct cells;
// equal values resolve in row-major order.
AttentionPoint argmax_point(const Grid& grid, std::size_t rank, MaskSize image);

// Ranks 1..k at once, same ordering as argmax_point.
std::vector<AttentionPoint> top_points(const Grid& grid, std::size_t k, MaskSize image);

// Uniform random cells, reproducible for a given seed. Scores are zero.
std::vector<AttentionPoint> random_points(std::size_t count, std::size_t grid_rows,
                                          std::size_t grid_cols, MaskSize image,
                                          std::uint64_t seed);

}  // namespace pixground
