// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace pixground {

struct MaskSize {
  std::uint32_t height = 0;
  std::uint32_t width = 0;

  std::uint64_t area() const { return std::uint64_t{height} * width; }
  friend bool operator==(const MaskSize&, const MaskSize&) = default;
};

// Uncompressed binary mask, stored row-major (image convention).
class Bitmask {
 public:
  Bitmask() = default;
  explicit Bitmask(MaskSize size, bool fill = false)
      : size_(size), bits_(size.area(), fill ? 1 : 0) {}

  const MaskSize& size() const { return size_; }
  std::uint32_t height() const { return size_.height; }
  std::uint32_t width() const { return size_.width; }

  bool at(std::uint32_t row, std::uint32_t col) const {
    return bits_[std::size_t{row} * size_.width + col] != 0;
  }
  void set(std::uint32_t row, std::uint32_t col, bool value = true) {
    bits_[std::size_t{row} * size_.width + col] = value ? 1 : 0;
  }
  std::uint64_t count() const;

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const Bitmask&, const Bitmask&) = default;

 private:
  MaskSize size_;
  std::vector<std::uint8_t> bits_;
};

// Run-length encoded mask. Runs scan the image column-major and alternate
// background/foreground starting with a (possibly zero-length) background run.
struct MaskRLE {
  MaskSize size;
  std::vector<std::uint32_t> counts;

  static MaskRLE empty(MaskSize size);
  static MaskRLE full(MaskSize size);

  friend bool operator==(const MaskRLE&, const MaskRLE&) = default;
};

MaskRLE encode_rle(const Bitmask& mask);

// Throws FormatError when the runs do not cover height*width exactly.
Bitmask decode_rle(const MaskRLE& rle);

// Throws FormatError on zero dimensions or a bad run sum.
void validate_rle(const MaskRLE& rle);

std::uint64_t foreground_area(const MaskRLE& rle);
bool is_empty(const MaskRLE& rle);

// Canonical form: merges interior zero-length runs so that equal masks have
// equal counts.
MaskRLE canonicalize(const MaskRLE& rle);

// {"size": [H, W], "counts": [...]}
void to_json(nlohmann::json& j, const MaskRLE& rle);
void from_json(const nlohmann::json& j, MaskRLE& rle);

}  // namespace pixground
