// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pixground/grid.h"

namespace pixground {

// Binary layout (little-endian throughout):
//   "ATNG" | u32 version | u32 n_tokens | u32 h | u32 w | n*h*w float32
// Grids are token-major, each row-major, holding the layer/head-averaged
// attention of one output token over the visual-token grid.
inline constexpr char kAttentionMagic[4] = {'A', 'T', 'N', 'G'};
inline constexpr std::uint32_t kAttentionVersion = 1;
inline constexpr std::size_t kAttentionHeaderBytes = 20;

struct AttentionRun {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Grid> grids;

  std::size_t n_tokens() const { return grids.size(); }
};

std::vector<std::uint8_t> encode_attention(std::span<const Grid> grids);
AttentionRun decode_attention(std::span<const std::uint8_t> bytes);

// Returns the number of bytes written.
std::size_t write_attention_file(std::span<const Grid> grids,
                                 const std::filesystem::path& path);
AttentionRun read_attention_file(const std::filesystem::path& path);

}  // namespace pixground
