// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pixground/rle.h"

namespace pixground {

// Literal expression marking a question with no groundable object.
inline constexpr const char* kNoneExpression = "None";

struct Sample {
  std::string sample_id;
  std::string image_path;  // relative to the annotation file
  std::string question;
  std::vector<std::string> choices;
  std::string answer;
  std::vector<std::string> expressions;
  std::vector<MaskRLE> gt_masks;  // aligned with expressions; empty for "None"
  std::optional<MaskSize> image_size;

  bool is_none_expression() const;
  // Index of `answer` within `choices`, if present.
  std::optional<std::size_t> answer_index() const;
  // Image size from the first gt mask or the explicit image_size field.
  std::optional<MaskSize> mask_size() const;
};

struct Benchmark {
  std::string name;
  std::vector<Sample> samples;
  std::filesystem::path root;  // directory holding the annotation file

  const Sample* find(std::string_view sample_id) const;
};

// Throws SchemaError naming the sample when an invariant fails.
void validate_sample(const Sample& sample);

Sample sample_from_json(const nlohmann::json& j);
nlohmann::json sample_to_json(const Sample& sample);

Benchmark parse_benchmark(const nlohmann::json& doc, std::filesystem::path root = {});
nlohmann::json benchmark_to_json(const Benchmark& benchmark);

Benchmark load_benchmark(const std::filesystem::path& annotations_path);
void save_benchmark(const Benchmark& benchmark, const std::filesystem::path& path);

}  // namespace pixground
