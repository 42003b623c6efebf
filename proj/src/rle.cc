// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pixground/rle.h"

#include <algorithm>
#include <string>

#include <nlohmann/json.hpp>

#include "pixground/error.h"

namespace pixground {

std::uint64_t Bitmask::count() const {
  return static_cast<std::uint64_t>(std::count(bits_.begin(), bits_.end(), 1));
}

MaskRLE MaskRLE::empty(MaskSize size) {
  return MaskRLE{size, {static_cast<std::uint32_t>(size.area())}};
}

MaskRLE MaskRLE::full(MaskSize size) {
  return MaskRLE{size, {0, static_cast<std::uint32_t>(size.area())}};
}

MaskRLE encode_rle(const Bitmask& mask) {
  MaskRLE out{mask.size(), {}};
  const std::uint32_t h = mask.height();
  const std::uint32_t w = mask.width();
  bool current = false;
  std::uint32_t run = 0;
  for (std::uint32_t c = 0; c < w; ++c) {
    for (std::uint32_t r = 0; r < h; ++r) {
      bool v = mask.at(r, c);
      if (v != current) {
        out.counts.push_back(run);
        run = 0;
        current = v;
      }
      ++run;
    }
  }
  out.counts.push_back(run);
  return out;
}

void validate_rle(const MaskRLE& rle) {
  if (rle.size.height == 0 || rle.size.width == 0) {
    throw FormatError("mask has zero dimension");
  }
  std::uint64_t total = 0;
  for (auto c : rle.counts) total += c;
  if (total != rle.size.area()) {
    throw FormatError("RLE counts sum to " + std::to_string(total) + ", expected " +
                      std::to_string(rle.size.area()) + " (" +
                      std::to_string(rle.size.height) + "x" +
                      std::to_string(rle.size.width) + ")");
  }
}

Bitmask decode_rle(const MaskRLE& rle) {
  validate_rle(rle);
  Bitmask out(rle.size);
  const std::uint32_t h = rle.size.height;
  std::uint64_t pos = 0;
  bool value = false;
  for (auto run : rle.counts) {
    if (value) {
      for (std::uint64_t i = pos; i < pos + run; ++i) {
        out.set(static_cast<std::uint32_t>(i % h), static_cast<std::uint32_t>(i / h));
      }
    }
    pos += run;
    value = !value;
  }
  return out;
}

std::uint64_t foreground_area(const MaskRLE& rle) {
  std::uint64_t n = 0;
  for (std::size_t i = 1; i < rle.counts.size(); i += 2) n += rle.counts[i];
  return n;
}

bool is_empty(const MaskRLE& rle) { return foreground_area(rle) == 0; }

MaskRLE canonicalize(const MaskRLE& rle) {
  MaskRLE out{rle.size, {}};
  bool value = false;
  bool out_value = false;
  std::uint32_t run = 0;
  for (auto c : rle.counts) {
    if (c > 0) {
      if (value != out_value) {
        out.counts.push_back(run);
        run = 0;
        out_value = value;
      }
      run += c;
    }
    value = !value;
  }
  out.counts.push_back(run);
  return out;
}

void to_json(nlohmann::json& j, const MaskRLE& rle) {
  j = nlohmann::json{{"size", {rle.size.height, rle.size.width}}, {"counts", rle.counts}};
}

void from_json(const nlohmann::json& j, MaskRLE& rle) {
  if (!j.is_object() || !j.contains("size") || !j.contains("counts")) {
    throw FormatError("mask must be an object with \"size\" and \"counts\"");
  }
  const auto& size = j.at("size");
  if (!size.is_array() || size.size() != 2) {
    throw FormatError("mask \"size\" must be [H, W]");
  }
  for (const auto& c : j.at("counts")) {
    if (!c.is_number_integer() || c.get<std::int64_t>() < 0) {
      throw FormatError("mask \"counts\" must be non-negative integers");
    }
  }
  rle.size = MaskSize{size[0].get<std::uint32_t>(), size[1].get<std::uint32_t>()};
  rle.counts = j.at("counts").get<std::vector<std::uint32_t>>();
}

}  // namespace pixground
