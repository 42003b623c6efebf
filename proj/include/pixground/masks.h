// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pixground/rle.h"

namespace pixground {

struct EvalPolicy {
  // Headline mIoU drops samples whose expression is "None".
  bool exclude_none_expressions = false;
  // IoU below this counts as a grounding failure.
  double failure_iou_threshold = 0.5;

  void validate() const;
};

// Intersection over union computed on runs. Both empty -> 1.0; exactly one
// empty -> 0.0. Throws InvalidArgument on size mismatch.
double iou(const MaskRLE& a, const MaskRLE& b);

std::uint64_t intersection_area(const MaskRLE& a, const MaskRLE& b);

MaskRLE mask_union(std::span<const MaskRLE> masks);
MaskRLE mask_union(const MaskRLE& a, const MaskRLE& b);
MaskRLE complement(const MaskRLE& m);

struct PairChoice {
  std::size_t first = 0;
  std::size_t second = 0;
  double iou = 0.0;
};

// Best unordered pair (i < j) whose union maximizes IoU against gt_union.
// Ties go to the lexicographically smallest (i, j).
PairChoice best_pair_union(std::span<const MaskRLE> candidates, const MaskRLE& gt_union);

// True iff pixel (floor(x), floor(y)) is set. Throws when out of bounds.
bool point_in_mask(double x, double y, const MaskRLE& mask);

struct SampleIoU {
  double iou = 0.0;
  bool none_expression = false;
};

struct MiouResult {
  std::optional<double> all;        // percent
  std::optional<double> excluding;  // percent, "None" samples dropped
  std::size_t n_all = 0;
  std::size_t n_excluding = 0;

  // The value the policy designates as headline.
  std::optional<double> headline(const EvalPolicy& policy) const {
    return policy.exclude_none_expressions ? excluding : all;
  }
};

MiouResult miou(std::span<const SampleIoU> per_sample);

}  // namespace pixground
