// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "helpers.h"
#include "pixground/error.h"
#include "pixground/masks.h"

namespace pixground {
namespace {

using testing::loop_iou;
using testing::loop_or;
using testing::random_bitmask;
using testing::random_mask;
using testing::rect_bitmask;

TEST(Iou, Conventions) {
  const MaskSize s{8, 8};
  const MaskRLE a = encode_rle(rect_bitmask(s, 0, 0, 4, 4));
  const MaskRLE b = encode_rle(rect_bitmask(s, 4, 4, 8, 8));
  EXPECT_EQ(iou(a, a), 1.0);
  EXPECT_EQ(iou(a, b), 0.0);
  EXPECT_EQ(iou(MaskRLE::empty(s), MaskRLE::empty(s)), 1.0);
  EXPECT_EQ(iou(a, MaskRLE::empty(s)), 0.0);
  EXPECT_THROW(iou(a, MaskRLE::empty({8, 9})), InvalidArgument);
}

TEST(Iou, MatchesPixelLoop) {
  Rng rng(21);
  for (int i = 0; i < 2000; ++i) {
    const Bitmask a = random_bitmask({32, 32}, rng), b = random_bitmask({32, 32}, rng);
    const MaskRLE ra = encode_rle(a), rb = encode_rle(b);
    ASSERT_EQ(iou(ra, rb), loop_iou(a, b));
    ASSERT_EQ(iou(ra, rb), iou(rb, ra));
  }
}

TEST(Iou, NonCanonicalRunsAgree) {
  // Interior zero-length runs must not change the result.
  const MaskRLE a{{1, 6}, {1, 2, 0, 1, 2}};
  const MaskRLE b{{1, 6}, {0, 3, 3}};
  EXPECT_DOUBLE_EQ(iou(a, b), loop_iou(decode_rle(a), decode_rle(b)));
}

TEST(Iou, MonotoneWhenAddingTruePositives) {
  Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    const Bitmask gt = testing::random_rect_bitmask({16, 16}, rng);
    Bitmask pred(gt.size());
    double last = loop_iou(pred, gt);
    for (std::uint32_t r = 0; r < 16; ++r) {
      for (std::uint32_t c = 0; c < 16; ++c) {
        if (!gt.at(r, c)) continue;
        pred.set(r, c);
        const double now = iou(encode_rle(pred), encode_rle(gt));
        ASSERT_GE(now, last);
        last = now;
      }
    }
    EXPECT_EQ(last, 1.0);
  }
}

TEST(Union, Basics) {
  Rng rng(23);
  const MaskRLE m = random_mask({9, 7}, rng);
  const MaskRLE only[] = {m};
  EXPECT_EQ(decode_rle(mask_union(only)), decode_rle(m));
  EXPECT_EQ(decode_rle(mask_union(m, complement(m))), Bitmask({9, 7}, true));
  EXPECT_THROW(mask_union(std::span<const MaskRLE>{}), InvalidArgument);
  EXPECT_THROW(mask_union(m, MaskRLE::empty({7, 9})), InvalidArgument);
}

TEST(Union, MatchesPixelOr) {
  Rng rng(24);
  for (int i = 0; i < 500; ++i) {
    const Bitmask a = random_bitmask({13, 11}, rng), b = random_bitmask({13, 11}, rng),
                  c = random_bitmask({13, 11}, rng);
    const MaskRLE ms[] = {encode_rle(a), encode_rle(b), encode_rle(c)};
    ASSERT_EQ(decode_rle(mask_union(ms)), loop_or(loop_or(a, b), c));
    ASSERT_EQ(intersection_area(ms[0], ms[1]),
              a.count() + b.count() - loop_or(a, b).count());
  }
}

TEST(BestPair, PlantedOptimumAndTieBreak) {
  const MaskSize s{10, 10};
  const MaskRLE ga = encode_rle(rect_bitmask(s, 0, 0, 3, 3));
  const MaskRLE gb = encode_rle(rect_bitmask(s, 6, 6, 9, 9));
  const MaskRLE noise = encode_rle(rect_bitmask(s, 0, 6, 4, 10));
  const MaskRLE cands[] = {noise, ga, gb};
  const PairChoice p = best_pair_union(cands, mask_union(ga, gb));
  EXPECT_EQ(p.first, 1u);
  EXPECT_EQ(p.second, 2u);
  EXPECT_EQ(p.iou, 1.0);

  const MaskRLE same[] = {ga, ga, ga, ga};
  const PairChoice t = best_pair_union(same, gb);
  EXPECT_EQ(t.first, 0u);
  EXPECT_EQ(t.second, 1u);
  EXPECT_THROW(best_pair_union(std::span<const MaskRLE>(cands, 1), ga), InvalidArgument);
}

TEST(BestPair, MatchesExhaustiveEnumeration) {
  Rng rng(25);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 2 + rng.below(6);  // 2..7
    std::vector<Bitmask> bits;
    std::vector<MaskRLE> rles;
    for (std::size_t i = 0; i < n; ++i) {
      bits.push_back(trial % 3 == 0 ? random_bitmask({6, 6}, rng, 0.3)
                                    : testing::random_rect_bitmask({12, 12}, rng));
      rles.push_back(encode_rle(bits.back()));
    }
    const MaskSize size = bits[0].size();
    const Bitmask gt = loop_or(testing::random_rect_bitmask(size, rng),
                               testing::random_rect_bitmask(size, rng));
    double best = -1;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double v = loop_iou(loop_or(bits[i], bits[j]), gt);
        if (v > best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    }
    const PairChoice p = best_pair_union(rles, encode_rle(gt));
    ASSERT_EQ(p.first, bi);
    ASSERT_EQ(p.second, bj);
    ASSERT_EQ(p.iou, best);
  }
}

TEST(PointInMask, Basics) {
  const MaskSize s{10, 20};
  EXPECT_TRUE(point_in_mask(10.0, 5.0, MaskRLE::full(s)));
  EXPECT_FALSE(point_in_mask(10.0, 5.0, MaskRLE::empty(s)));
  EXPECT_THROW(point_in_mask(20.0, 5.0, MaskRLE::full(s)), InvalidArgument);
  EXPECT_THROW(point_in_mask(-0.5, 5.0, MaskRLE::full(s)), InvalidArgument);
}

TEST(PointInMask, MatchesDecodeAndIndex) {
  Rng rng(26);
  for (int i = 0; i < 1000; ++i) {
    const Bitmask b = random_bitmask({17, 23}, rng);
    const MaskRLE m = encode_rle(b);
    const double x = rng.uniform() * 23, y = rng.uniform() * 17;
    ASSERT_EQ(point_in_mask(x, y, m),
              b.at(static_cast<std::uint32_t>(y), static_cast<std::uint32_t>(x)));
  }
}

TEST(Miou, Aggregates) {
  const SampleIoU perfect[] = {{1.0, false}, {1.0, false}};
  auto r = miou(perfect);
  EXPECT_EQ(*r.all, 100.0);
  EXPECT_EQ(*r.excluding, 100.0);

  const SampleIoU with_none[] = {{1.0, false}, {1.0, true}};
  r = miou(with_none);
  EXPECT_EQ(*r.all, 100.0);
  EXPECT_EQ(*r.excluding, 100.0);
  EXPECT_EQ(r.n_all, 2u);
  EXPECT_EQ(r.n_excluding, 1u);

  // Ten mixed samples; means recomputed by hand.
  const SampleIoU mixed[] = {{0.5, false}, {0.25, false}, {1.0, true},  {0.0, true},
                             {0.75, false}, {1.0, false}, {0.0, false}, {0.1, false},
                             {0.9, false},  {1.0, true}};
  r = miou(mixed);
  EXPECT_NEAR(*r.all, 55.0, 1e-9);        // 5.5 / 10
  EXPECT_NEAR(*r.excluding, 50.0, 1e-9);  // 3.5 / 7
  EvalPolicy policy;
  EXPECT_EQ(r.headline(policy), r.all);
  policy.exclude_none_expressions = true;
  EXPECT_EQ(r.headline(policy), r.excluding);

  const SampleIoU only_none[] = {{1.0, true}};
  r = miou(only_none);
  EXPECT_FALSE(r.excluding.has_value());
  EXPECT_FALSE(miou({}).all.has_value());
}

TEST(Policy, ThresholdRange) {
  EvalPolicy p;
  EXPECT_NO_THROW(p.validate());
  p.failure_iou_threshold = 1.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
  p.failure_iou_threshold = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

}  // namespace
}  // namespace pixground
