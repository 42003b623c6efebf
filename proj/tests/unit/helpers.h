// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

// Shared fixtures for the unit tests: random masks, pixel-loop oracles, temp dirs.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "pixground/masks.h"
#include "pixground/rle.h"
#include "pixground/rng.h"

namespace pixground::testing {

// Bernoulli(p) pixels, with p itself drawn per mask when p < 0.
inline Bitmask random_bitmask(MaskSize size, Rng& rng, double p = -1.0) {
  if (p < 0) p = rng.uniform();
  Bitmask m(size);
  for (std::uint32_t r = 0; r < size.height; ++r) {
    for (std::uint32_t c = 0; c < size.width; ++c) m.set(r, c, rng.uniform() < p);
  }
  return m;
}

// Axis-aligned filled rectangle, possibly clipped to empty.
inline Bitmask random_rect_bitmask(MaskSize size, Rng& rng) {
  Bitmask m(size);
  const auto y0 = static_cast<std::uint32_t>(rng.below(size.height));
  const auto x0 = static_cast<std::uint32_t>(rng.below(size.width));
  const auto y1 = y0 + 1 + static_cast<std::uint32_t>(rng.below(size.height - y0));
  const auto x1 = x0 + 1 + static_cast<std::uint32_t>(rng.below(size.width - x0));
  for (std::uint32_t r = y0; r < y1; ++r) {
    for (std::uint32_t c = x0; c < x1; ++c) m.set(r, c);
  }
  return m;
}

inline MaskRLE random_mask(MaskSize size, Rng& rng) {
  return encode_rle(rng.below(2) ? random_bitmask(size, rng) : random_rect_bitmask(size, rng));
}

inline Bitmask rect_bitmask(MaskSize size, std::uint32_t x0, std::uint32_t y0, std::uint32_t x1,
                            std::uint32_t y1) {
  Bitmask m(size);
  for (std::uint32_t r = y0; r < y1; ++r) {
    for (std::uint32_t c = x0; c < x1; ++c) m.set(r, c);
  }
  return m;
}

// Pixel-loop IoU with the both-empty = 1 convention.
inline double loop_iou(const Bitmask& a, const Bitmask& b) {
  std::uint64_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.bits().size(); ++i) {
    inter += (a.bits()[i] && b.bits()[i]) ? 1 : 0;
    uni += (a.bits()[i] || b.bits()[i]) ? 1 : 0;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

inline Bitmask loop_or(const Bitmask& a, const Bitmask& b) {
  Bitmask out(a.size());
  for (std::uint32_t r = 0; r < a.height(); ++r) {
    for (std::uint32_t c = 0; c < a.width(); ++c) out.set(r, c, a.at(r, c) || b.at(r, c));
  }
  return out;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("pixground_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace pixground::testing
