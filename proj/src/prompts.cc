// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pixground/prompts.h"

#include <array>

#include "pixground/benchmark.h"
#include "pixground/error.h"

namespace pixground::prompts {
namespace {

constexpr std::array<std::string_view, kVqaTemplateCount> kVqaTemplates = {
    "Ques:QUES\n|CHOICES \nInstruct:|INSTRUCT\nAns:",
    "QUES \n| CHOICES \n| INSTRUCT \nAnswer:",
    "QUES | CHOICES | INSTRUCT",
    "Question-QUES | CHOICES. | INSTRUCT. Answer-",
    "QUES \t| CHOICES \t| INSTRUCT Answer::",
    "Question, QUES | CHOICES. | INSTRUCT. Answer,",
    "Q: QUES \n| CHOICES \n| INSTRUCT A:",
    "QUES \t| CHOICES \t| INSTRUCT A:",
    "QUES | CHOICES | INSTRUCT",
    "Q::QUES | CHOICES \n| INSTRUCT \n A::",
};

// SEGMENT / MASK / MASKS are filled per output modality.
constexpr std::array<std::string_view, kGroundingTemplateCount> kGroundingTemplates = {
    "Can you please SEGMENT EXPR in the given image",
    "Can you SEGMENT EXPR in this image?",
    "Can you identify EXPR in this image? (with grounding)",
    "Identify EXPR in the scene, with grounding.",
    "Locate the EXPR and output a tight MASK. If the object does not exist in the image "
    "don't generate any MASKS.",
    "Output MASK for the EXPR",
};

}  // namespace

std::string choice_letter(std::size_t index) {
  if (index >= 26) throw InvalidArgument("more than 26 choices");
  return std::string(1, static_cast<char>('a' + index));
}

std::string free_form_choices(std::span<const std::string> choices) {
  std::string out;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    if (i > 0) out += ' ';
    out += choices[i];
  }
  return out;
}

std::string lettered_choices(std::span<const std::string> choices,
                             std::vector<std::pair<std::size_t, std::size_t>>* markers) {
  std::string out;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    if (i > 0) out += ' ';
    const std::size_t start = out.size();
    out += choice_letter(i) + ".";
    if (markers) markers->emplace_back(start, out.size());
    out += choices[i];
  }
  return out;
}

std::string question_with_mark(std::string_view question) {
  std::string q(question);
  while (!q.empty() && (q.back() == ' ' || q.back() == '\n')) q.pop_back();
  if (q.empty() || q.back() != '?') q += '?';
  return q;
}

std::string probing_prompt(Probing probing, const Sample& sample, GroundingModality modality) {
  switch (probing) {
    case Probing::P1:
      return question_with_mark(sample.question) + " " + free_form_choices(sample.choices);
    case Probing::P3:
      return question_with_mark(sample.question) + " " + lettered_choices(sample.choices) +
             " " + std::string(kOptionInstruction);
    case Probing::P2: {
      std::string expr;
      for (std::size_t i = 0; i < sample.expressions.size(); ++i) {
        if (i > 0) expr += " and ";
        expr += sample.expressions[i];
      }
      return apply_grounding_template(1, expr, modality);
    }
  }
  return {};
}

std::string substitute(std::string_view tmpl,
                       std::span<const std::pair<std::string_view, std::string_view>> values) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    bool matched = false;
    for (const auto& [token, value] : values) {
      if (tmpl.substr(i, token.size()) == token) {
        out += value;
        i += token.size();
        matched = true;
        break;
      }
    }
    if (!matched) out += tmpl[i++];
  }
  return out;
}

std::string existence_prompt(std::string_view expression) {
  const std::pair<std::string_view, std::string_view> v[] = {{"<EXP>", expression}};
  return substitute("Does this image have <EXP>? Answer with Yes/No only.", v);
}

std::string pick_prompt(std::string_view expression, std::string_view tmpl) {
  const std::pair<std::string_view, std::string_view> v[] = {{"<EXP>", expression}};
  return substitute(tmpl, v);
}

std::string grading_prompt(std::string_view question, std::string_view answer,
                           std::string_view response) {
  const std::pair<std::string_view, std::string_view> v[] = {
      {"<QUESTION>", question}, {"<ANSWER>", answer}, {"<RESPONSE>", response}};
  return substitute(
      "Given the following question <QUESTION>, the correct answer is <ANSWER>. Does the "
      "following answer correctly answer the question, answer: <RESPONSE>? Respond with a "
      "Yes/No",
      v);
}

std::string_view vqa_template(std::size_t id) {
  if (id < 1 || id > kVqaTemplateCount) {
    throw InvalidArgument("VQA template id " + std::to_string(id) + " not in [1, 10]");
  }
  return kVqaTemplates[id - 1];
}

std::string grounding_template(std::size_t id, GroundingModality modality) {
  if (id < 1 || id > kGroundingTemplateCount) {
    throw InvalidArgument("grounding template id " + std::to_string(id) + " not in [1, 6]");
  }
  const bool mask = modality == GroundingModality::Mask;
  const std::pair<std::string_view, std::string_view> v[] = {
      {"SEGMENT", mask ? "segment" : "detect"},
      {"MASKS", mask ? "masks" : "boxes"},
      {"MASK", mask ? "mask" : "box"}};
  return substitute(kGroundingTemplates[id - 1], v);
}

std::string apply_vqa_template(std::size_t id, std::string_view question,
                               std::string_view choices, std::string_view instruction) {
  const std::pair<std::string_view, std::string_view> v[] = {
      {"INSTRUCT", instruction}, {"CHOICES", choices}, {"QUES", question}};
  return substitute(vqa_template(id), v);
}

std::string apply_grounding_template(std::size_t id, std::string_view expression,
                                     GroundingModality modality) {
  const std::pair<std::string_view, std::string_view> v[] = {{"EXPR", expression}};
  return substitute(grounding_template(id, modality), v);
}

}  // namespace pixground::prompts
