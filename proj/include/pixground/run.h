// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pixground/rle.h"

namespace pixground {

// P1: free-form question + options; P2: grounding prompt;
// P3: lettered options + "answer with the option's letter" instruction.
enum class Probing { P1, P2, P3 };

std::string to_string(Probing p);
Probing parse_probing(std::string_view s);  // accepts "P1"/"p1" etc.

// Noun phrase in a model output. Character offsets are code point indices
// into OutputRecord::text; token range is half-open.
struct PhraseSpan {
  std::string text;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::size_t token_start = 0;
  std::size_t token_end = 0;
  std::optional<double> similarity_to_expr;
  // Per-expression similarities for multi-object samples (optional).
  std::vector<double> similarities;

  friend bool operator==(const PhraseSpan&, const PhraseSpan&) = default;
};

struct OutputRecord {
  std::string text;
  std::vector<std::pair<std::size_t, std::size_t>> token_offsets;
  std::vector<PhraseSpan> phrase_spans;

  std::size_t n_tokens() const { return token_offsets.size(); }
  friend bool operator==(const OutputRecord&, const OutputRecord&) = default;
};

// Throws SchemaError when offsets are non-monotone, a span slice disagrees
// with its text, or a token range falls outside [0, n_tokens).
void validate_output(const OutputRecord& record);

// Segmenter output for one point prompt (pixel coordinates).
struct PromptMasks {
  double x = 0.0;
  double y = 0.0;
  std::vector<MaskRLE> masks;  // segmenter's own ranking, best first
};

struct SampleMasks {
  std::vector<PromptMasks> prompts;
  // Masks the model emitted itself (pixel-level models, or unsolicited P1 masks).
  std::vector<MaskRLE> direct_masks;
};

// Whether grounding predictions come from mining attention + segmenter
// prompts, or from masks the model emitted directly.
enum class MaskSource { Mined, Direct };

struct SampleRunRef {
  std::string sample_id;
  std::filesystem::path output;     // OutputRecord JSON (required)
  std::filesystem::path attention;  // AttentionFile (optional for P3 runs)
  std::filesystem::path masks;      // SampleMasks JSON (optional)
  std::optional<std::uint32_t> image_w;
  std::optional<std::uint32_t> image_h;
};

struct RunManifest {
  std::string run_id;
  std::string model_name;
  Probing probing = Probing::P2;
  MaskSource mask_source = MaskSource::Mined;
  std::uint32_t grid_h = 0;
  std::uint32_t grid_w = 0;
  std::uint32_t image_w = 0;
  std::uint32_t image_h = 0;
  std::vector<SampleRunRef> samples;
  std::filesystem::path root;  // manifest directory; sample paths are relative to it

  const SampleRunRef* find(std::string_view sample_id) const;
  std::filesystem::path resolve(const std::filesystem::path& p) const;
  MaskSize image_size_for(const SampleRunRef& ref) const;
};

void to_json(nlohmann::json& j, const PhraseSpan& s);
void from_json(const nlohmann::json& j, PhraseSpan& s);
void to_json(nlohmann::json& j, const OutputRecord& r);
void from_json(const nlohmann::json& j, OutputRecord& r);
void to_json(nlohmann::json& j, const SampleMasks& m);
void from_json(const nlohmann::json& j, SampleMasks& m);

RunManifest parse_run_manifest(const nlohmann::json& doc, std::filesystem::path root = {});
nlohmann::json run_manifest_to_json(const RunManifest& run);

// `check_paths` verifies that every referenced file exists.
RunManifest load_run_manifest(const std::filesystem::path& path, bool check_paths = true);
void save_run_manifest(const RunManifest& run, const std::filesystem::path& path);

OutputRecord load_output_record(const std::filesystem::path& path);
SampleMasks load_sample_masks(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace pixground
