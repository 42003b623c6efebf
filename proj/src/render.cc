// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pixground/render.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "pixground/error.h"

namespace pixground {
namespace {

// 5x7 digits; each row is 5 bits, MSB = leftmost column.
constexpr std::array<std::array<std::uint8_t, 7>, 10> kDigits = {{
    {0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E},  // 0
    {0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E},  // 1
    {0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F},  // 2
    {0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E},  // 3
    {0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02},  // 4
    {0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E},  // 5
    {0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E},  // 6
    {0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08},  // 7
    {0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E},  // 8
    {0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C},  // 9
}};
constexpr int kGlyphW = 5;
constexpr int kGlyphH = 7;
constexpr int kGlyphAdvance = 6;

std::uint8_t blend(std::uint8_t base, std::uint8_t tint, double alpha) {
  const double v = (1.0 - alpha) * base + alpha * tint;
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

void draw_label(Image& sheet, const std::string& label, int left, int top, int scale) {
  for (std::size_t i = 0; i < label.size(); ++i) {
    const char ch = label[i];
    if (ch == ' ') continue;
    const auto& glyph = kDigits[static_cast<std::size_t>(ch - '0')];
    const int gx = left + static_cast<int>(i) * kGlyphAdvance * scale;
    for (int r = 0; r < kGlyphH; ++r) {
      for (int c = 0; c < kGlyphW; ++c) {
        if (!((glyph[static_cast<std::size_t>(r)] >> (kGlyphW - 1 - c)) & 1)) continue;
        for (int dy = 0; dy < scale; ++dy) {
          for (int dx = 0; dx < scale; ++dx) {
            const int px = gx + c * scale + dx;
            const int py = top + r * scale + dy;
            if (px < 0 || py < 0 || px >= static_cast<int>(sheet.width()) ||
                py >= static_cast<int>(sheet.height())) {
              continue;
            }
            sheet.set(static_cast<std::uint32_t>(px), static_cast<std::uint32_t>(py),
                      Rgb{0, 0, 0});
          }
        }
      }
    }
  }
}

}  // namespace

int OverlayStyle::radius_for(const Image& image) const {
  if (point_radius_px) return *point_radius_px;
  const auto shorter = std::min(image.width(), image.height());
  return std::max(4, static_cast<int>(0.01 * shorter));
}

void OverlayStyle::validate() const {
  if (!(mask_alpha > 0.0 && mask_alpha <= 1.0)) {
    throw InvalidArgument("mask_alpha must lie in (0, 1]");
  }
  if (point_radius_px && *point_radius_px < 0) {
    throw InvalidArgument("point radius must be non-negative");
  }
}

Image overlay_mask(const Image& image, const MaskRLE& mask, const OverlayStyle& style) {
  style.validate();
  if (mask.size.height != image.height() || mask.size.width != image.width()) {
    throw InvalidArgument("mask size " + std::to_string(mask.size.width) + "x" +
                          std::to_string(mask.size.height) + " does not match image " +
                          std::to_string(image.width()) + "x" +
                          std::to_string(image.height()));
  }
  validate_rle(mask);
  Image out = image;
  const std::uint32_t h = image.height();
  std::uint64_t pos = 0;
  for (std::size_t i = 0; i < mask.counts.size(); ++i) {
    const std::uint64_t end = pos + mask.counts[i];
    if (i & 1) {
      for (std::uint64_t p = pos; p < end; ++p) {
        const auto x = static_cast<std::uint32_t>(p / h);
        const auto y = static_cast<std::uint32_t>(p % h);
        const Rgb c = image.at(x, y);
        out.set(x, y,
                Rgb{blend(c.r, style.mask_color.r, style.mask_alpha),
                    blend(c.g, style.mask_color.g, style.mask_alpha),
                    blend(c.b, style.mask_color.b, style.mask_alpha)});
      }
    }
    pos = end;
  }
  return out;
}

Image draw_point(const Image& image, double x, double y, const OverlayStyle& style) {
  style.validate();
  if (!(x >= 0.0 && y >= 0.0 && x < image.width() && y < image.height())) {
    throw InvalidArgument("point (" + std::to_string(x) + ", " + std::to_string(y) +
                          ") outside image");
  }
  const long r = style.radius_for(image);
  const long cx = static_cast<long>(std::floor(x));
  const long cy = static_cast<long>(std::floor(y));
  Image out = image;
  const long x0 = std::max(0L, cx - r);
  const long x1 = std::min<long>(image.width() - 1, cx + r);
  const long y0 = std::max(0L, cy - r);
  const long y1 = std::min<long>(image.height() - 1, cy + r);
  for (long py = y0; py <= y1; ++py) {
    for (long px = x0; px <= x1; ++px) {
      const long dx = px - cx, dy = py - cy;
      if (dx * dx + dy * dy <= r * r) {
        out.set(static_cast<std::uint32_t>(px), static_cast<std::uint32_t>(py),
                style.point_color);
      }
    }
  }
  return out;
}

Image render_candidate(const Image& image, const MaskRLE& mask, double x, double y,
                       const OverlayStyle& style) {
  return draw_point(overlay_mask(image, mask, style), x, y, style);
}

Image compose_group_sheet(std::span<const Image> tiles, std::span<const std::string> labels,
                          const SheetLayout& layout) {
  if (tiles.empty()) throw InvalidArgument("group sheet needs at least one image");
  if (!labels.empty() && labels.size() != tiles.size()) {
    throw InvalidArgument("label count differs from tile count");
  }
  std::vector<std::string> text;
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    text.push_back(labels.empty() ? std::to_string(i + 1) : labels[i]);
    for (char ch : text.back()) {
      if (ch != ' ' && (ch < '0' || ch > '9')) {
        throw InvalidArgument("sheet labels support digits and spaces only");
      }
    }
  }

  const int g = layout.gutter_px;
  const int scale = layout.label_scale;
  const int band = kGlyphH * scale + 2 * layout.label_pad_px;
  std::uint64_t width = static_cast<std::uint64_t>(g) * (tiles.size() + 1);
  std::uint32_t tallest = 0;
  for (const auto& t : tiles) {
    width += t.width();
    tallest = std::max(tallest, t.height());
  }
  const auto height = static_cast<std::uint32_t>(band + tallest + g);
  Image sheet(static_cast<std::uint32_t>(width), height, Rgb{255, 255, 255});

  std::uint32_t left = static_cast<std::uint32_t>(g);
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const auto& t = tiles[i];
    for (std::uint32_t y = 0; y < t.height(); ++y) {
      for (std::uint32_t x = 0; x < t.width(); ++x) {
        sheet.set(left + x, static_cast<std::uint32_t>(band) + y, t.at(x, y));
      }
    }
    const int label_w =
        static_cast<int>(text[i].size()) * kGlyphAdvance * scale - scale;
    const int label_left =
        static_cast<int>(left) + std::max(0, (static_cast<int>(t.width()) - label_w) / 2);
    draw_label(sheet, text[i], label_left, layout.label_pad_px, scale);
    left += t.width() + static_cast<std::uint32_t>(g);
  }
  return sheet;
}

}  // namespace pixground
