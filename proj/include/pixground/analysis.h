// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pixground/judge.h"
#include "pixground/run.h"
#include "pixground/selection.h"

namespace pixground {
struct Sample;

// 100 * char_start / length, both in code points. Throws on empty text or a
// span past the end.
double phrase_location_pct(std::string_view text, const PhraseSpan& span);

// Bins [0,10), ..., [80,90), [90,100]. Values outside [0,100] throw.
std::array<std::size_t, 10> location_histogram(std::span<const double> pcts);

enum class Concept {
  ColorAppearance,
  LocationPosition,
  ObjectParts,
  Context,
  ObjectsEntities,
  State,
};
inline constexpr std::size_t kConceptCount = 6;
std::string to_string(Concept c);
Concept parse_concept(std::string_view s);  // enum name or a loose label ("color and appearance")
const std::array<Concept, kConceptCount>& all_concepts();

class Categorizer {
 public:
  virtual ~Categorizer() = default;
  virtual std::string id() const = 0;
  virtual Concept categorize(std::string_view phrase) = 0;
};

// Embedded lexicon. Checked in order: color/appearance, location, state,
// object parts, context; anything else is ObjectsEntities.
class KeywordCategorizer : public Categorizer {
 public:
  std::string id() const override { return "keyword"; }
  Concept categorize(std::string_view phrase) override;
};

// Asks a text model; replies that name no category fall back to the keyword
// lexicon when `fallback` is set and throw otherwise.
class ModelCategorizer : public Categorizer {
 public:
  ModelCategorizer(std::shared_ptr<TextClient> client, bool fallback = true)
      : client_(std::move(client)), fallback_(fallback) {}
  std::string id() const override { return client_->id(); }
  Concept categorize(std::string_view phrase) override;

 private:
  std::shared_ptr<TextClient> client_;
  bool fallback_;
  KeywordCategorizer keywords_;
};

std::string categorize_prompt(std::string_view phrase);

struct FailureQuadrant {
  std::size_t vqa_fail_only = 0;
  std::size_t grounding_fail_only = 0;
  std::size_t both_fail = 0;
  std::size_t both_success = 0;

  std::size_t total() const {
    return vqa_fail_only + grounding_fail_only + both_fail + both_success;
  }
  friend bool operator==(const FailureQuadrant&, const FailureQuadrant&) = default;
};

// Grounding fails when iou < threshold.
FailureQuadrant failure_quadrants(std::span<const bool> vqa_correct, std::span<const double> ious,
                                  double threshold = 0.5);

struct LengthStats {
  double mean_chars = 0.0;  // code points
  double mean_phrases = 0.0;
};

LengthStats output_length_stats(std::span<const OutputRecord> records);

struct EmergenceRecord {
  std::string sample_id;
  std::size_t expression_index = 0;
  std::string chosen_phrase;
  double location_pct = 0.0;
  Concept concept_label = Concept::ObjectsEntities;
  std::string categorizer;
  double iou = 0.0;
};

// One record per referred object: single-object oracle over the candidates
// against that object's mask. "None" samples yield nothing; so does an
// object whose best candidate set is empty.
std::vector<EmergenceRecord> emergence_records(const Sample& sample, const OutputRecord& output,
                                               std::span<const CandidateMask> candidates,
                                               Categorizer& categorizer);

nlohmann::json to_json(const EmergenceRecord& r);
nlohmann::json to_json(const FailureQuadrant& q);

// CSV rows: sample_id,expression_index,phrase,location_pct,concept,categorizer,iou
std::string emergence_csv(std::span<const EmergenceRecord> records);
// CSV rows: bin_start,bin_end,count
std::string histogram_csv(const std::array<std::size_t, 10>& bins);

}  // namespace pixground
