// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pixground/metrics.h"

#include <algorithm>
#include <cctype>
#include <nlohmann/json.hpp>

#include "pixground/error.h"
#include "pixground/prompts.h"
#include "pixground/text.h"

namespace pixground {
namespace {

bool is_decoration(char c) {
  return c == '*' || c == '_' || c == '`' || c == '"' || c == '\'' || c == '#' || c == '>';
}

std::string strip_decoration(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (!is_decoration(c)) out += c;
  }
  return text::trim(text::to_lower_ascii(out));
}

std::string strip_trailing_punct(std::string s) {
  while (!s.empty() && std::ispunct(static_cast<unsigned char>(s.back()))) s.pop_back();
  return text::trim(s);
}

std::optional<std::size_t> letter_index(std::string_view token, std::size_t n) {
  std::size_t b = 0, e = token.size();
  if (b < e && (token[b] == '(' || token[b] == '[')) ++b;
  while (e > b && (token[e - 1] == '.' || token[e - 1] == ')' || token[e - 1] == ']' ||
                   token[e - 1] == ':' || token[e - 1] == ',')) {
    --e;
  }
  if (e - b != 1) return std::nullopt;
  const char c = token[b];
  if (c < 'a' || c > 'z') return std::nullopt;
  const auto idx = static_cast<std::size_t>(c - 'a');
  if (idx >= n) return std::nullopt;
  return idx;
}

}  // namespace

std::optional<std::size_t> parse_option_letter(std::string_view response,
                                               std::span<const std::string> choices) {
  const std::string cleaned = strip_decoration(response);
  if (cleaned.empty()) return std::nullopt;

  const std::string bare = strip_trailing_punct(cleaned);
  for (std::size_t i = 0; i < choices.size(); ++i) {
    const std::string choice = strip_trailing_punct(strip_decoration(choices[i]));
    if (!choice.empty() && bare == choice && choice.size() > 1) return i;
  }

  const auto tokens = text::split_whitespace(cleaned);
  if (tokens.empty()) return std::nullopt;
  return letter_index(tokens.front(), choices.size());
}

bool grade_with_judge(std::string_view question, std::string_view answer,
                      std::string_view response, JudgeClient& judge) {
  return judge.ask_yes_no({}, prompts::grading_prompt(question, answer, response));
}

std::optional<double> harmonic_score(std::optional<double> a, std::optional<double> a_dagger,
                                     std::optional<double> m, std::optional<double> m_dagger) {
  const double p = std::max(a.value_or(0.0), a_dagger.value_or(0.0));
  const double q = std::max(m.value_or(0.0), m_dagger.value_or(0.0));
  if (p + q == 0.0) return std::nullopt;
  return 2.0 * p * q / (p + q);
}

std::optional<double> point_accuracy(std::span<const PointSample> samples) {
  std::size_t kept = 0, hits = 0;
  for (const auto& s : samples) {
    if (s.none_expression || is_empty(s.gt_union)) continue;
    ++kept;
    for (const auto& [x, y] : s.points) {
      if (point_in_mask(x, y, s.gt_union)) {
        ++hits;
        break;
      }
    }
  }
  if (kept == 0) return std::nullopt;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(kept);
}

std::string to_string(SuiteKind k) {
  switch (k) {
    case SuiteKind::Vqa: return "vqa";
    case SuiteKind::Visual: return "visual";
    case SuiteKind::GroundingLanguage: return "grounding";
  }
  return "?";
}

SuiteKind parse_suite_kind(std::string_view s) {
  if (s == "vqa") return SuiteKind::Vqa;
  if (s == "visual") return SuiteKind::Visual;
  if (s == "grounding") return SuiteKind::GroundingLanguage;
  throw InvalidArgument("unknown suite '" + std::string(s) + "' (vqa|visual|grounding)");
}

std::size_t suite_size(SuiteKind k) {
  switch (k) {
    case SuiteKind::Vqa: return 30;
    case SuiteKind::Visual: return 8;
    case SuiteKind::GroundingLanguage: return 12;
  }
  return 0;
}

SensitivityResult sensitivity_aggregate(SuiteKind suite, std::span<const VariationScore> scores) {
  if (scores.size() != suite_size(suite)) {
    throw InvalidArgument(to_string(suite) + " suite expects " +
                          std::to_string(suite_size(suite)) + " variations, got " +
                          std::to_string(scores.size()));
  }
  SensitivityResult out;
  std::map<std::string, std::pair<double, std::size_t>> acc;
  double sum = 0.0;
  for (const auto& s : scores) {
    sum += s.score;
    auto& [total, n] = acc[s.variant];
    total += s.score;
    ++n;
  }
  out.mean = sum / static_cast<double>(scores.size());
  for (const auto& [k, v] : acc) out.by_variant[k] = v.first / static_cast<double>(v.second);
  return out;
}

void ScoreCard::finalize() {
  s = harmonic_score(a, a_dagger, m, m_dagger);
  const auto me = m_excluding ? m_excluding : m;
  const auto mde = m_dagger_excluding ? m_dagger_excluding : m_dagger;
  s_excluding = harmonic_score(a, a_dagger, me, mde);
}

nlohmann::json to_json(const ScoreCard& card) {
  auto opt = [](const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json();
  };
  return {{"A", opt(card.a)},
          {"A_dagger", opt(card.a_dagger)},
          {"M", opt(card.m)},
          {"M_excluding", opt(card.m_excluding)},
          {"M_dagger", opt(card.m_dagger)},
          {"M_dagger_excluding", opt(card.m_dagger_excluding)},
          {"S", opt(card.s)},
          {"S_excluding", opt(card.s_excluding)},
          {"point_accuracy", opt(card.point_accuracy)},
          {"n_samples", card.n_samples}};
}

}  // namespace pixground
