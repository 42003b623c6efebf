// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pixground/run.h"

namespace pixground {
struct Sample;
}

namespace pixground::prompts {

inline constexpr std::string_view kOptionInstruction =
    "Answer with the option's letter from the given.";

// Tournament prompt; <EXP> is replaced by the referring expression.
inline constexpr std::string_view kDefaultPickTemplate =
    "Which highlighted region best matches '<EXP>'? Answer with the image number only.";

inline constexpr std::size_t kVqaTemplateCount = 10;
inline constexpr std::size_t kGroundingTemplateCount = 6;

enum class GroundingModality { Mask, Box };

std::string choice_letter(std::size_t index);  // 0 -> "a"

// "Open Closed" (free-form listing).
std::string free_form_choices(std::span<const std::string> choices);
// "a.Open b.Closed"; `markers` receives the [begin, end) byte range of each
// enumeration marker ("a.") inside the returned string.
std::string lettered_choices(std::span<const std::string> choices,
                             std::vector<std::pair<std::size_t, std::size_t>>* markers = nullptr);

// Question with exactly one trailing '?'.
std::string question_with_mark(std::string_view question);

std::string probing_prompt(Probing probing, const Sample& sample,
                           GroundingModality modality = GroundingModality::Mask);

std::string existence_prompt(std::string_view expression);
std::string pick_prompt(std::string_view expression,
                        std::string_view tmpl = kDefaultPickTemplate);
std::string grading_prompt(std::string_view question, std::string_view answer,
                           std::string_view response);

// Raw VQA / grounding templates, ids are 1-based. Escapes are already
// expanded (real newlines and tabs).
std::string_view vqa_template(std::size_t id);
std::string grounding_template(std::size_t id, GroundingModality modality);

std::string apply_vqa_template(std::size_t id, std::string_view question,
                               std::string_view choices, std::string_view instruction);
std::string apply_grounding_template(std::size_t id, std::string_view expression,
                                     GroundingModality modality);

// Substitutes placeholder tokens in one left-to-right pass; substituted text
// is never rescanned.
std::string substitute(std::string_view tmpl,
                       std::span<const std::pair<std::string_view, std::string_view>> values);

}  // namespace pixground::prompts
