// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pixground/image.h"
#include "pixground/judge.h"
#include "pixground/prompts.h"
#include "pixground/rle.h"
#include "pixground/rng.h"

namespace pixground {
struct Sample;

enum class PerturbationKind {
  Spelling,
  Template,
  Paraphrase,
  GuidedCrop,
  GuidedMask,
  GroundingSpelling,
  ExpressionSpelling,
};
std::string to_string(PerturbationKind k);
PerturbationKind parse_perturbation_kind(std::string_view s);

struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::Spelling;
  std::uint64_t seed = 0;
  nlohmann::json params = nlohmann::json::object();
};

// ---- spelling ----

enum class EditOp { Omit, Transpose, Insert };
std::string to_string(EditOp op);

struct TextSegment {
  std::string text;
  bool editable = true;
};

struct SpellingEdit {
  std::size_t segment = 0;
  std::size_t position = 0;  // byte index in the original segment
  EditOp op = EditOp::Omit;
  char inserted = 0;         // Insert only; placed after `position`
  std::size_t partner = 0;   // Transpose only; the adjacent letter swapped with `position`
};

struct SpellingOutcome {
  std::vector<TextSegment> segments;
  std::vector<SpellingEdit> edits;
  std::size_t requested = 0;

  std::size_t applied() const { return edits.size(); }
  std::size_t shortfall() const { return requested - edits.size(); }
  std::string joined() const;
};

// Applies up to n_sites edits at distinct ASCII letters of the editable
// segments, sampled without replacement. A transpose pairs the site with the
// next letter (or the previous one) and consumes both; with no free
// neighbour the op is redrawn between omit and insert.
SpellingOutcome perturb_segments(std::vector<TextSegment> segments, std::size_t n_sites,
                                 Rng& rng);

struct SpellingResult {
  std::string question;
  std::vector<std::string> choices;
  std::string instruction;
  SpellingOutcome joint;        // question + lettered choices
  SpellingOutcome instruction_edits;

  // Option-letter prompt built from the perturbed parts.
  std::string prompt() const;
};

// n_sites edits over question+choices jointly (enumeration markers and
// separators are never touched) and n_sites over the instruction.
SpellingResult spelling_perturb(std::string_view question, std::span<const std::string> choices,
                                std::string_view instruction, std::uint64_t seed,
                                std::size_t n_sites = 8);

// Grounding prompt with edits outside the expression only.
SpellingOutcome grounding_spelling_perturb(std::size_t template_id, std::string_view expression,
                                           prompts::GroundingModality modality,
                                           std::uint64_t seed, std::size_t n_sites = 8);
// Grounding prompt with edits inside the expression only.
SpellingOutcome expression_spelling_perturb(std::size_t template_id, std::string_view expression,
                                            prompts::GroundingModality modality,
                                            std::uint64_t seed, std::size_t n_sites = 8);

// ---- paraphrase ----

class Rewriter {
 public:
  virtual ~Rewriter() = default;
  virtual std::string id() const = 0;
  virtual std::string rewrite(const std::string& question, std::size_t variant) = 0;
};

class EchoRewriter : public Rewriter {
 public:
  std::string id() const override { return "echo"; }
  std::string rewrite(const std::string& question, std::size_t) override { return question; }
};

// Sends paraphrase_prompt() to a text client. Wrap the client in a
// CachingTextClient to pin results per (question, client id, variant).
class TextRewriter : public Rewriter {
 public:
  explicit TextRewriter(std::shared_ptr<TextClient> client) : client_(std::move(client)) {}
  std::string id() const override { return client_->id(); }
  std::string rewrite(const std::string& question, std::size_t variant) override;

 private:
  std::shared_ptr<TextClient> client_;
};

std::string paraphrase_prompt(std::string_view question, std::size_t variant);
std::string paraphrase(const std::string& question, Rewriter& rewriter, std::size_t variant = 0);

// ---- visual ----

// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct Rect {
  std::uint32_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;

  std::uint32_t width() const { return x1 - x0; }
  std::uint32_t height() const { return y1 - y0; }
  bool contains(std::uint32_t x, std::uint32_t y) const {
    return x >= x0 && x < x1 && y >= y0 && y < y1;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

enum class Side { Left, Right, Top, Bottom };
std::string to_string(Side s);

struct CropResult {
  Rect keep;  // surviving region
  Side side = Side::Left;
  double removed_fraction = 0.0;
  bool fallback = false;  // no cut could remove enough of the object
};

// Cuts the image from one random side just past the line that removes more
// than min_fraction of the object, then pushes the cut a random distance
// further (up to the object's far edge). At least one row/column survives.
CropResult guided_crop(const MaskRLE& object, std::uint64_t seed, double min_fraction = 0.5);

struct OccluderResult {
  Rect rect;
  double coverage = 0.0;
  std::uint32_t seed_x = 0, seed_y = 0;
};

// Grows a rectangle from a random object pixel one pixel per side per step
// until it covers more than min_fraction of the object, then widens each side
// by a random amount up to max_expand of its size.
OccluderResult guided_mask(const MaskRLE& object, std::uint64_t seed, double min_fraction = 0.5,
                           double max_expand = 0.2);

// Object pixels inside `r` over all object pixels, by direct pixel count.
double fraction_inside(const MaskRLE& object, const Rect& r);

Image crop_image(const Image& image, const Rect& r);
Image paint_rect(const Image& image, const Rect& r, Rgb color = {0, 0, 0});
MaskRLE crop_mask(const MaskRLE& mask, const Rect& r);

// ---- suites ----

struct VariationItem {
  PerturbationSpec spec;
  std::optional<std::string> prompt;
  std::optional<Rect> rect;
  std::optional<double> audit_fraction;  // removed (crop) or covered (mask)
  bool fallback = false;
  std::size_t shortfall = 0;
  nlohmann::json edits = nlohmann::json::array();
};

struct VariationSuite {
  std::vector<VariationItem> vqa_language;        // 10 spelling, 10 template, 10 paraphrase
  std::vector<VariationItem> visual;              // 4 guided crop, 4 guided mask
  std::vector<VariationItem> grounding_language;  // 6 templates x 2 spelling seeds
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  std::size_t n_sites = 8;
  prompts::GroundingModality modality = prompts::GroundingModality::Mask;
};

// Per-sample base seed: items derive theirs from it and record the result.
std::uint64_t sample_seed(const Sample& sample, std::uint64_t seed);

std::vector<VariationItem> build_vqa_suite(const Sample& sample, const SuiteOptions& opts,
                                           Rewriter& rewriter);
// Throws InvalidArgument for samples without a gt object.
std::vector<VariationItem> build_visual_suite(const Sample& sample, const SuiteOptions& opts);
std::vector<VariationItem> build_grounding_suite(const Sample& sample, const SuiteOptions& opts);
// Edits confined to the expression, template 1; not part of the counted suites.
std::vector<VariationItem> build_expression_variants(const Sample& sample,
                                                     const SuiteOptions& opts,
                                                     std::size_t count = 2);

VariationSuite build_variation_suite(const Sample& sample, const SuiteOptions& opts,
                                     Rewriter& rewriter);

nlohmann::json to_json(const VariationItem& item);
nlohmann::json to_json(const Rect& r);

}  // namespace pixground
