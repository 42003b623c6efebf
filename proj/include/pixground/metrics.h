// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pixground/judge.h"
#include "pixground/masks.h"
#include "pixground/rle.h"

namespace pixground {

// Maps a model response to a choice index. Accepts "b", "b.", "b)", "(b)",
// a leading letter token, or the full text of a choice (case-insensitive),
// after trimming and stripping quotes/markdown. nullopt when unparseable.
std::optional<std::size_t> parse_option_letter(std::string_view response,
                                               std::span<const std::string> choices);

// Asks the judge whether `response` answers `question` with `answer`.
// Unparseable verdicts throw JudgeError.
bool grade_with_judge(std::string_view question, std::string_view answer,
                      std::string_view response, JudgeClient& judge);

// 2PQ/(P+Q) with P = max(A, A_dagger), Q = max(M, M_dagger); missing values
// count as 0. nullopt when P + Q == 0.
std::optional<double> harmonic_score(std::optional<double> a, std::optional<double> a_dagger,
                                     std::optional<double> m, std::optional<double> m_dagger);

struct PointSample {
  std::vector<std::pair<double, double>> points;  // chosen prompt point(s)
  MaskRLE gt_union;
  bool none_expression = false;
};

// Percent of samples with a chosen point inside the gt union. "None" samples
// and samples with empty gt are skipped; a sample with no point is a miss.
std::optional<double> point_accuracy(std::span<const PointSample> samples);

enum class SuiteKind { Vqa, Visual, GroundingLanguage };
std::string to_string(SuiteKind k);  // "vqa", "visual", "grounding"
SuiteKind parse_suite_kind(std::string_view s);
std::size_t suite_size(SuiteKind k);  // 30, 8, 12

struct VariationScore {
  std::string variant;  // spelling, template, paraphrase, guided_crop, guided_mask, ...
  double score = 0.0;
};

struct SensitivityResult {
  double mean = 0.0;
  std::map<std::string, double> by_variant;
};

// Mean over a complete suite; a wrong item count throws InvalidArgument
// naming the suite.
SensitivityResult sensitivity_aggregate(SuiteKind suite, std::span<const VariationScore> scores);

struct ScoreCard {
  std::optional<double> a;         // option-letter accuracy
  std::optional<double> a_dagger;  // judge-graded free-form accuracy
  std::optional<double> m;         // grounding-prompt mIoU, all samples
  std::optional<double> m_excluding;
  std::optional<double> m_dagger;  // mIoU of masks mined from free-form answers
  std::optional<double> m_dagger_excluding;
  std::optional<double> s;
  std::optional<double> s_excluding;
  std::optional<double> point_accuracy;
  std::size_t n_samples = 0;

  // Fills s / s_excluding from the other fields.
  void finalize();
};

nlohmann::json to_json(const ScoreCard& card);

}  // namespace pixground
