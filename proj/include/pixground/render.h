// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pixground/image.h"
#include "pixground/rle.h"

namespace pixground {

struct OverlayStyle {
  Rgb mask_color{255, 0, 0};
  double mask_alpha = 0.5;
  // Defaults to max(4, 1% of the shorter image side).
  std::optional<int> point_radius_px;
  Rgb point_color{0, 0, 0};

  int radius_for(const Image& image) const;
  void validate() const;
};

// Blends mask pixels toward mask_color; other pixels are copied untouched.
Image overlay_mask(const Image& image, const MaskRLE& mask, const OverlayStyle& style = {});

// Filled disc of the style's radius centered on pixel (floor(x), floor(y)),
// clipped at the borders.
Image draw_point(const Image& image, double x, double y, const OverlayStyle& style = {});

// Mask highlight plus prompt point: the image shown to the judge per candidate.
Image render_candidate(const Image& image, const MaskRLE& mask, double x, double y,
                       const OverlayStyle& style = {});

struct SheetLayout {
  int gutter_px = 8;
  int label_scale = 3;  // glyph pixel size; glyphs are 5x7 cells
  int label_pad_px = 4;
};

// Horizontal strip of tiles with a label above each. Labels default to the
// 1-based tile index and may contain digits and spaces only.
Image compose_group_sheet(std::span<const Image> tiles,
                          std::span<const std::string> labels = {},
                          const SheetLayout& layout = {});

}  // namespace pixground
