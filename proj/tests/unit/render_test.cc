// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "helpers.h"
#include "pixground/error.h"
#include "pixground/render.h"
#include "pixground/text.h"

namespace pixground {
namespace {

using testing::rect_bitmask;

Image gradient(std::uint32_t w, std::uint32_t h) {
  Image im(w, h);
  for (std::uint32_t y = 0; y < h; ++y) {
    for (std::uint32_t x = 0; x < w; ++x) {
      im.set(x, y, Rgb{static_cast<std::uint8_t>(x * 7), static_cast<std::uint8_t>(y * 11),
                       static_cast<std::uint8_t>((x + y) * 3)});
    }
  }
  return im;
}

std::string pixel_hash(const Image& im) {
  const auto p = im.pixels();
  return text::hex64(
      text::fnv1a64(std::string_view(reinterpret_cast<const char*>(p.data()), p.size())));
}

TEST(Overlay, EmptyMaskLeavesImage) {
  const Image im = gradient(9, 6);
  EXPECT_EQ(overlay_mask(im, MaskRLE::empty({6, 9})), im);
}

TEST(Overlay, FullAlphaIsSolid) {
  const Image im = gradient(9, 6);
  OverlayStyle s;
  s.mask_alpha = 1.0;
  const Image out = overlay_mask(im, MaskRLE::full({6, 9}), s);
  for (std::uint32_t y = 0; y < 6; ++y) {
    for (std::uint32_t x = 0; x < 9; ++x) ASSERT_EQ(out.at(x, y), (Rgb{255, 0, 0}));
  }
}

TEST(Overlay, BlendPerPixel) {
  Rng rng(61);
  const Image im = gradient(20, 15);
  const Bitmask bits = testing::random_bitmask({15, 20}, rng, 0.4);
  OverlayStyle s;
  s.mask_alpha = 0.3;
  s.mask_color = {10, 200, 90};
  const Image out = overlay_mask(im, encode_rle(bits), s);
  for (std::uint32_t y = 0; y < 15; ++y) {
    for (std::uint32_t x = 0; x < 20; ++x) {
      const Rgb a = im.at(x, y), b = out.at(x, y);
      if (!bits.at(y, x)) {
        ASSERT_EQ(a, b);
        continue;
      }
      const auto expect = [&](int base, int tint) { return 0.7 * base + 0.3 * tint; };
      ASSERT_LE(std::abs(b.r - expect(a.r, 10)), 1.0);
      ASSERT_LE(std::abs(b.g - expect(a.g, 200)), 1.0);
      ASSERT_LE(std::abs(b.b - expect(a.b, 90)), 1.0);
    }
  }
}

TEST(Overlay, RejectsBadInput) {
  const Image im = gradient(4, 4);
  EXPECT_THROW(overlay_mask(im, MaskRLE::empty({4, 5})), InvalidArgument);
  OverlayStyle s;
  s.mask_alpha = 0.0;
  EXPECT_THROW(overlay_mask(im, MaskRLE::empty({4, 4}), s), InvalidArgument);
}

TEST(Point, DiscMatchesDistanceOracle) {
  const Image im(50, 40, Rgb{200, 200, 200});
  for (int r : {0, 1, 3, 6}) {
    OverlayStyle s;
    s.point_radius_px = r;
    for (const auto& [x, y] : {std::pair{10.7, 20.2}, {0.0, 0.0}, {49.9, 39.9}, {48.0, 1.5}}) {
      const Image out = draw_point(im, x, y, s);
      const long cx = static_cast<long>(x), cy = static_cast<long>(y);
      for (std::uint32_t py = 0; py < 40; ++py) {
        for (std::uint32_t px = 0; px < 50; ++px) {
          const long dx = static_cast<long>(px) - cx, dy = static_cast<long>(py) - cy;
          const bool inside = dx * dx + dy * dy <= r * r;
          ASSERT_EQ(out.at(px, py), (inside ? Rgb{0, 0, 0} : Rgb{200, 200, 200}))
              << "r=" << r << " at " << px << "," << py;
        }
      }
    }
  }
  EXPECT_THROW(draw_point(im, 50.0, 1.0), InvalidArgument);
  EXPECT_THROW(draw_point(im, -0.1, 1.0), InvalidArgument);
}

TEST(Point, DefaultRadius) {
  OverlayStyle s;
  EXPECT_EQ(s.radius_for(Image(100, 100)), 4);
  EXPECT_EQ(s.radius_for(Image(1000, 640)), 6);
  s.point_radius_px = 0;
  const Image out = draw_point(Image(5, 5, Rgb{9, 9, 9}), 2.5, 2.5, s);
  std::size_t painted = 0;
  for (std::uint32_t y = 0; y < 5; ++y) {
    for (std::uint32_t x = 0; x < 5; ++x) painted += out.at(x, y) == Rgb{0, 0, 0};
  }
  EXPECT_EQ(painted, 1u);
}

TEST(Sheet, Geometry) {
  const std::vector<Image> tiles(4, gradient(30, 20));
  const Image sheet = compose_group_sheet(tiles);
  SheetLayout l;
  EXPECT_EQ(sheet.width(), 4u * 30 + 5u * l.gutter_px);
  EXPECT_EQ(sheet.height(),
            static_cast<std::uint32_t>(7 * l.label_scale + 2 * l.label_pad_px + 20 + l.gutter_px));
  // Tile pixels land at their offsets.
  const std::uint32_t band = 7 * l.label_scale + 2 * l.label_pad_px;
  for (std::uint32_t i = 0; i < 4; ++i) {
    const std::uint32_t left = l.gutter_px + i * (30 + l.gutter_px);
    EXPECT_EQ(sheet.at(left + 3, band + 5), tiles[i].at(3, 5));
  }
  // Labels paint something dark in the band above each tile.
  for (std::uint32_t i = 0; i < 4; ++i) {
    const std::uint32_t left = l.gutter_px + i * (30 + l.gutter_px);
    std::size_t dark = 0;
    for (std::uint32_t y = 0; y < band; ++y) {
      for (std::uint32_t x = left; x < left + 30; ++x) dark += sheet.at(x, y) == Rgb{0, 0, 0};
    }
    EXPECT_GT(dark, 0u) << "tile " << i;
  }
  EXPECT_THROW(compose_group_sheet({}), InvalidArgument);
  const std::string bad[] = {"1", "x", "3", "4"};
  EXPECT_THROW(compose_group_sheet(tiles, bad), InvalidArgument);
}

TEST(Sheet, GoldenPixels) {
  // Pixel content hash; independent of the PNG encoder build.
  const std::vector<Image> tiles = {gradient(12, 10), gradient(8, 14)};
  const std::string labels[] = {"1", "12"};
  const Image sheet = compose_group_sheet(tiles, labels);
  EXPECT_EQ(sheet.width(), 12u + 8u + 3u * 8);
  EXPECT_EQ(pixel_hash(sheet), pixel_hash(compose_group_sheet(tiles, labels)));
  EXPECT_NE(pixel_hash(sheet), pixel_hash(compose_group_sheet(tiles)));
}

TEST(Png, RoundTrip) {
  const Image im = gradient(37, 23);
  const auto bytes = encode_png(im);
  ASSERT_GT(bytes.size(), 8u);
  EXPECT_EQ(bytes[1], 'P');
  EXPECT_EQ(decode_png(bytes), im);
  EXPECT_EQ(encode_png(im), bytes);  // deterministic encoder output

  testing::TempDir tmp("png");
  write_png(im, tmp.path() / "a.png");
  EXPECT_EQ(load_image(tmp.path() / "a.png"), im);
  {
    std::ofstream(tmp.path() / "junk.png") << "not an image";
  }
  EXPECT_THROW(load_image(tmp.path() / "junk.png"), Error);
  const std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + bytes.size() / 2);
  EXPECT_THROW(decode_png(cut), Error);
}

TEST(Candidate, MaskThenPoint) {
  const Image im(20, 20, Rgb{100, 100, 100});
  const MaskRLE m = encode_rle(rect_bitmask({20, 20}, 0, 0, 10, 20));
  OverlayStyle s;
  s.point_radius_px = 2;
  const Image out = render_candidate(im, m, 15.0, 10.0, s);
  EXPECT_EQ(out.at(15, 10), (Rgb{0, 0, 0}));
  EXPECT_EQ(out.at(2, 2), (Rgb{178, 50, 50}));
  EXPECT_EQ(out.at(19, 0), (Rgb{100, 100, 100}));
}

}  // namespace
}  // namespace pixground
