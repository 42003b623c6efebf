// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pixground/analysis.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>

#include <nlohmann/json.hpp>

#include "pixground/benchmark.h"
#include "pixground/error.h"
#include "pixground/masks.h"
#include "pixground/text.h"

namespace pixground {

double phrase_location_pct(std::string_view text, const PhraseSpan& span) {
  const std::size_t n = text::codepoint_count(text);
  if (n == 0) throw InvalidArgument("location of a phrase in empty text");
  if (span.char_start > n) throw InvalidArgument("phrase span starts past the end of the text");
  return 100.0 * static_cast<double>(span.char_start) / static_cast<double>(n);
}

std::array<std::size_t, 10> location_histogram(std::span<const double> pcts) {
  std::array<std::size_t, 10> bins{};
  for (double p : pcts) {
    if (!(p >= 0.0 && p <= 100.0)) throw InvalidArgument("location outside [0, 100]");
    const auto b = std::min<std::size_t>(9, static_cast<std::size_t>(std::floor(p / 10.0)));
    ++bins[b];
  }
  return bins;
}

std::string to_string(Concept c) {
  switch (c) {
    case Concept::ColorAppearance: return "ColorAppearance";
    case Concept::LocationPosition: return "LocationPosition";
    case Concept::ObjectParts: return "ObjectParts";
    case Concept::Context: return "Context";
    case Concept::ObjectsEntities: return "ObjectsEntities";
    case Concept::State: return "State";
  }
  return "?";
}

const std::array<Concept, kConceptCount>& all_concepts() {
  static const std::array<Concept, kConceptCount> kAll = {
      Concept::ColorAppearance, Concept::LocationPosition, Concept::ObjectParts,
      Concept::Context,         Concept::ObjectsEntities,  Concept::State};
  return kAll;
}

namespace {

// Lowercase letters/digits only, so "Color & Appearance" -> "colorappearance".
std::string squash(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

std::optional<Concept> match_concept(std::string_view s) {
  const std::string q = squash(s);
  if (q.empty()) return std::nullopt;
  struct Alias {
    const char* key;
    Concept c;
  };
  static const Alias kAliases[] = {
      {"colorappearance", Concept::ColorAppearance},
      {"colorandappearance", Concept::ColorAppearance},
      {"locationposition", Concept::LocationPosition},
      {"locationandposition", Concept::LocationPosition},
      {"objectparts", Concept::ObjectParts},
      {"contextsetting", Concept::Context},
      {"contextandsetting", Concept::Context},
      {"context", Concept::Context},
      {"objectsentities", Concept::ObjectsEntities},
      {"objectsandentities", Concept::ObjectsEntities},
      {"state", Concept::State},
  };
  for (const auto& a : kAliases) {
    if (q == a.key) return a.c;
  }
  // Replies like "Category: object parts." -> look for a contained alias,
  // longest first so "objectparts" wins over "objectsentities" prefixes.
  std::optional<Concept> best;
  std::size_t best_len = 0;
  for (const auto& a : kAliases) {
    const std::string_view key = a.key;
    if (key.size() > best_len && q.find(key) != std::string::npos) {
      best = a.c;
      best_len = key.size();
    }
  }
  return best;
}

std::vector<std::string> words_of(std::string_view phrase) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : phrase) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '\'' || c == '-') {
      cur += static_cast<char>(std::tolower(u));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

using Lexicon = std::set<std::string, std::less<>>;

const Lexicon kColor = {
    "red",    "orange", "yellow", "green",  "blue",     "purple",  "violet",  "pink",
    "brown",  "black",  "white",  "gray",   "grey",     "silver",  "gold",    "golden",
    "beige",  "tan",    "cyan",   "magenta", "colored", "coloured", "colorful", "colourful",
    "color",  "colour", "striped", "spotted", "dotted", "plaid",   "shiny",   "glossy",
    "matte",  "transparent", "translucent", "bright", "dark", "pale",  "pastel", "metallic",
    "wooden", "furry",  "fluffy", "patterned", "checkered", "rusty"};
const Lexicon kLocation = {
    "left",   "right",  "top",    "bottom", "above",  "below",   "under",   "underneath",
    "over",   "behind", "front",  "middle", "center", "centre",  "corner",  "side",
    "edge",   "near",   "next",   "beside", "between", "upper", "lower",   "far",
    "position", "location", "o'clock", "direction", "facing", "toward", "towards", "north",
    "south",  "east",   "west",   "leftmost", "rightmost", "topmost", "inside", "outside",
    "background", "foreground", "distance"};
const Lexicon kState = {
    "open",    "opened",  "closed",  "shut",    "sitting", "standing", "running", "walking",
    "lying",   "sleeping", "moving", "parked",  "empty",   "full",     "broken",  "wet",
    "dry",     "lit",     "folded",  "raised",   "lowered", "flying",
    "smiling", "eating",  "holding", "visible", "hidden",  "turned",   "tilted",  "upright",
    "upside-down", "melted", "frozen", "sliced",  "awake",    "asleep"};
const Lexicon kParts = {
    "wing",   "wings",  "leg",    "legs",   "wheel",  "wheels", "handle", "handles",
    "tail",   "head",   "eye",    "eyes",   "ear",    "ears",   "nose",   "mouth",
    "beak",   "paw",    "paws",   "hand",   "hands",  "arm",    "arms",   "foot",
    "feet",   "face",   "door",   "doors",  "window", "windows", "roof",  "screen",
    "button", "buttons", "blade", "blades", "lens",   "petal",  "petals", "leaf",
    "leaves", "stem",   "trunk",  "branch", "branches", "keyboard", "key", "keys",
    "strap",  "lid",    "cap",    "collar", "sleeve", "sole",   "tip",    "horn",
    "horns",  "fin",    "fins",   "teeth",  "tooth",  "hair",   "fur",    "spout",
    "label",  "logo",   "hood",   "seat",   "pedal",  "pedals", "hinge",  "antenna"};
const Lexicon kContext = {
    "scene",  "room",   "street", "road",   "sky",    "field",  "grass",  "water",
    "sea",    "ocean",  "beach",  "kitchen", "park",  "forest", "indoor", "indoors",
    "outdoor", "outdoors", "weather", "snow", "rain",  "setting", "environment", "landscape",
    "city",   "garden", "yard",   "ground", "sunset",
    "night",  "day",    "daytime", "lighting", "shadow", "shadows", "surroundings"};

bool any_in(const std::vector<std::string>& words, const Lexicon& lex) {
  for (const auto& w : words) {
    if (lex.count(w)) return true;
    // "12-o'clock" style compounds.
    const auto dash = w.find('-');
    if (dash != std::string::npos &&
        (lex.count(w.substr(0, dash)) || lex.count(w.substr(dash + 1)))) {
      return true;
    }
  }
  return false;
}

}  // namespace

Concept parse_concept(std::string_view s) {
  if (auto c = match_concept(s)) return *c;
  throw InvalidArgument("unknown concept '" + std::string(s) + "'");
}

Concept KeywordCategorizer::categorize(std::string_view phrase) {
  const auto words = words_of(phrase);
  if (any_in(words, kColor)) return Concept::ColorAppearance;
  if (any_in(words, kLocation)) return Concept::LocationPosition;
  if (any_in(words, kState)) return Concept::State;
  if (any_in(words, kParts)) return Concept::ObjectParts;
  if (any_in(words, kContext)) return Concept::Context;
  return Concept::ObjectsEntities;
}

std::string categorize_prompt(std::string_view phrase) {
  return "Categorize the noun phrase \"" + std::string(phrase) +
         "\" into exactly one of these categories: color and appearance, location and "
         "position, object parts, context and setting, objects and entities, state. Reply "
         "with the category name only.";
}

Concept ModelCategorizer::categorize(std::string_view phrase) {
  const std::string reply = client_->complete(categorize_prompt(phrase));
  if (auto c = match_concept(reply)) return *c;
  if (fallback_) return keywords_.categorize(phrase);
  throw Error("categorizer reply names no category: '" + reply + "'");
}

FailureQuadrant failure_quadrants(std::span<const bool> vqa_correct, std::span<const double> ious,
                                  double threshold) {
  if (vqa_correct.size() != ious.size()) {
    throw InvalidArgument("failure_quadrants: " + std::to_string(vqa_correct.size()) +
                          " VQA flags vs " + std::to_string(ious.size()) + " IoUs");
  }
  FailureQuadrant q;
  for (std::size_t i = 0; i < ious.size(); ++i) {
    const bool g = ious[i] >= threshold;
    if (vqa_correct[i] && g) {
      ++q.both_success;
    } else if (vqa_correct[i]) {
      ++q.grounding_fail_only;
    } else if (g) {
      ++q.vqa_fail_only;
    } else {
      ++q.both_fail;
    }
  }
  return q;
}

LengthStats output_length_stats(std::span<const OutputRecord> records) {
  if (records.empty()) throw InvalidArgument("output_length_stats on no records");
  double chars = 0.0, phrases = 0.0;
  for (const auto& r : records) {
    chars += static_cast<double>(text::codepoint_count(r.text));
    phrases += static_cast<double>(r.phrase_spans.size());
  }
  const auto n = static_cast<double>(records.size());
  return {chars / n, phrases / n};
}

std::vector<EmergenceRecord> emergence_records(const Sample& sample, const OutputRecord& output,
                                               std::span<const CandidateMask> candidates,
                                               Categorizer& categorizer) {
  std::vector<EmergenceRecord> out;
  if (sample.is_none_expression() || candidates.empty()) return out;
  for (std::size_t e = 0; e < sample.gt_masks.size(); ++e) {
    if (is_empty(sample.gt_masks[e])) continue;
    const MaskRLE gt[] = {sample.gt_masks[e]};
    const SelectionResult sel = oracle_select(candidates, gt, false);
    if (sel.chosen.empty()) continue;
    const CandidateMask& c = sel.chosen.front();
    EmergenceRecord r;
    r.sample_id = sample.sample_id;
    r.expression_index = e;
    r.chosen_phrase = c.phrase.text;
    r.location_pct = phrase_location_pct(output.text, c.phrase);
    r.concept_label = categorizer.categorize(c.phrase.text);
    r.categorizer = categorizer.id();
    r.iou = sel.iou.value_or(0.0);
    out.push_back(std::move(r));
  }
  return out;
}

nlohmann::json to_json(const EmergenceRecord& r) {
  return {{"sample_id", r.sample_id},
          {"expression_index", r.expression_index},
          {"chosen_phrase", r.chosen_phrase},
          {"location_pct", r.location_pct},
          {"concept", to_string(r.concept_label)},
          {"categorizer", r.categorizer},
          {"iou", r.iou}};
}

nlohmann::json to_json(const FailureQuadrant& q) {
  return {{"vqa_fail_only", q.vqa_fail_only},
          {"grounding_fail_only", q.grounding_fail_only},
          {"both_fail", q.both_fail},
          {"both_success", q.both_success}};
}

namespace {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string emergence_csv(std::span<const EmergenceRecord> records) {
  std::string out = "sample_id,expression_index,phrase,location_pct,concept,categorizer,iou\n";
  for (const auto& r : records) {
    out += csv_field(r.sample_id) + "," + std::to_string(r.expression_index) + "," +
           csv_field(r.chosen_phrase) + "," + fixed(r.location_pct, 4) + "," +
           to_string(r.concept_label) + "," + csv_field(r.categorizer) + "," + fixed(r.iou, 6) +
           "\n";
  }
  return out;
}

std::string histogram_csv(const std::array<std::size_t, 10>& bins) {
  std::string out = "bin_start,bin_end,count\n";
  for (std::size_t i = 0; i < bins.size(); ++i) {
    out += std::to_string(i * 10) + "," + std::to_string(i * 10 + 10) + "," +
           std::to_string(bins[i]) + "\n";
  }
  return out;
}

}  // namespace pixground
