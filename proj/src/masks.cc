// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pixground/masks.h"

#include <cmath>
#include <string>

#include "pixground/error.h"

namespace pixground {
namespace {

void require_same_size(const MaskRLE& a, const MaskRLE& b) {
  if (a.size != b.size) {
    throw InvalidArgument("mask size mismatch: " + std::to_string(a.size.height) + "x" +
                          std::to_string(a.size.width) + " vs " +
                          std::to_string(b.size.height) + "x" +
                          std::to_string(b.size.width));
  }
}

// Walks two run lists in lockstep, calling fn(a_on, b_on, length) for every
// maximal stretch where neither mask changes value.
template <class Fn>
void merge_runs(const MaskRLE& a, const MaskRLE& b, Fn&& fn) {
  std::size_t ia = 0, ib = 0;
  std::uint64_t left_a = a.counts.empty() ? 0 : a.counts[0];
  std::uint64_t left_b = b.counts.empty() ? 0 : b.counts[0];
  auto advance = [](const MaskRLE& m, std::size_t& i, std::uint64_t& left) {
    while (left == 0 && i + 1 < m.counts.size()) left = m.counts[++i];
  };
  advance(a, ia, left_a);
  advance(b, ib, left_b);
  while (left_a > 0 && left_b > 0) {
    const std::uint64_t step = std::min(left_a, left_b);
    fn((ia & 1) != 0, (ib & 1) != 0, step);
    left_a -= step;
    left_b -= step;
    advance(a, ia, left_a);
    advance(b, ib, left_b);
  }
}

class RunBuilder {
 public:
  explicit RunBuilder(MaskSize size) : out_{size, {}} {}
  void push(bool value, std::uint64_t length) {
    if (length == 0) return;
    if (value != value_) {
      out_.counts.push_back(static_cast<std::uint32_t>(run_));
      run_ = 0;
      value_ = value;
    }
    run_ += length;
  }
  MaskRLE finish() && {
    out_.counts.push_back(static_cast<std::uint32_t>(run_));
    return std::move(out_);
  }

 private:
  MaskRLE out_;
  bool value_ = false;
  std::uint64_t run_ = 0;
};

}  // namespace

void EvalPolicy::validate() const {
  if (!(failure_iou_threshold > 0.0 && failure_iou_threshold < 1.0)) {
    throw InvalidArgument("failure_iou_threshold must lie in (0, 1)");
  }
}

std::uint64_t intersection_area(const MaskRLE& a, const MaskRLE& b) {
  require_same_size(a, b);
  std::uint64_t inter = 0;
  merge_runs(a, b, [&](bool x, bool y, std::uint64_t n) {
    if (x && y) inter += n;
  });
  return inter;
}

double iou(const MaskRLE& a, const MaskRLE& b) {
  require_same_size(a, b);
  std::uint64_t inter = 0, uni = 0;
  merge_runs(a, b, [&](bool x, bool y, std::uint64_t n) {
    if (x && y) inter += n;
    if (x || y) uni += n;
  });
  if (uni == 0) return 1.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

MaskRLE mask_union(const MaskRLE& a, const MaskRLE& b) {
  require_same_size(a, b);
  RunBuilder builder(a.size);
  merge_runs(a, b, [&](bool x, bool y, std::uint64_t n) { builder.push(x || y, n); });
  return std::move(builder).finish();
}

MaskRLE mask_union(std::span<const MaskRLE> masks) {
  if (masks.empty()) throw InvalidArgument("union of an empty mask list");
  MaskRLE acc = canonicalize(masks.front());
  for (std::size_t i = 1; i < masks.size(); ++i) acc = mask_union(acc, masks[i]);
  return acc;
}

MaskRLE complement(const MaskRLE& m) {
  RunBuilder builder(m.size);
  bool value = false;
  for (auto c : m.counts) {
    builder.push(!value, c);
    value = !value;
  }
  return std::move(builder).finish();
}

PairChoice best_pair_union(std::span<const MaskRLE> candidates, const MaskRLE& gt_union) {
  if (candidates.size() < 2) {
    throw InvalidArgument("pair selection needs at least two candidates, got " +
                          std::to_string(candidates.size()));
  }
  PairChoice best{0, 1, -1.0};
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      const double v = iou(mask_union(candidates[i], candidates[j]), gt_union);
      if (v > best.iou) best = PairChoice{i, j, v};
    }
  }
  return best;
}

bool point_in_mask(double x, double y, const MaskRLE& mask) {
  if (!(x >= 0.0 && y >= 0.0 && x < mask.size.width && y < mask.size.height)) {
    throw InvalidArgument("point (" + std::to_string(x) + ", " + std::to_string(y) +
                          ") outside " + std::to_string(mask.size.width) + "x" +
                          std::to_string(mask.size.height) + " image");
  }
  const auto col = static_cast<std::uint64_t>(std::floor(x));
  const auto row = static_cast<std::uint64_t>(std::floor(y));
  const std::uint64_t target = col * mask.size.height + row;
  std::uint64_t pos = 0;
  for (std::size_t i = 0; i < mask.counts.size(); ++i) {
    pos += mask.counts[i];
    if (target < pos) return (i & 1) != 0;
  }
  throw FormatError("RLE counts do not cover the mask");
}

MiouResult miou(std::span<const SampleIoU> per_sample) {
  MiouResult r;
  double sum_all = 0.0, sum_excl = 0.0;
  for (const auto& s : per_sample) {
    sum_all += s.iou;
    ++r.n_all;
    if (!s.none_expression) {
      sum_excl += s.iou;
      ++r.n_excluding;
    }
  }
  if (r.n_all > 0) r.all = 100.0 * sum_all / static_cast<double>(r.n_all);
  if (r.n_excluding > 0) r.excluding = 100.0 * sum_excl / static_cast<double>(r.n_excluding);
  return r;
}

}  // namespace pixground
