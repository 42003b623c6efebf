// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pixground/benchmark.h"

#include <algorithm>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "pixground/error.h"

namespace pixground {

using nlohmann::json;

bool Sample::is_none_expression() const {
  return expressions.size() == 1 && expressions.front() == kNoneExpression;
}

std::optional<std::size_t> Sample::answer_index() const {
  auto it = std::find(choices.begin(), choices.end(), answer);
  if (it == choices.end()) return std::nullopt;
  return static_cast<std::size_t>(it - choices.begin());
}

std::optional<MaskSize> Sample::mask_size() const {
  if (!gt_masks.empty()) return gt_masks.front().size;
  return image_size;
}

const Sample* Benchmark::find(std::string_view sample_id) const {
  for (const auto& s : samples) {
    if (s.sample_id == sample_id) return &s;
  }
  return nullptr;
}

void validate_sample(const Sample& s) {
  auto fail = [&](const std::string& msg) {
    throw SchemaError("sample \"" + s.sample_id + "\": " + msg);
  };
  if (s.sample_id.empty()) throw SchemaError("sample with empty sample_id");
  if (s.expressions.empty()) fail("no referring expressions (use \"None\")");
  if (s.is_none_expression()) {
    if (s.gt_masks.size() > 1) fail("\"None\" expression carries more than one gt mask");
    if (s.gt_masks.size() == 1 && !is_empty(s.gt_masks.front())) {
      fail("\"None\" expression with a non-empty gt mask");
    }
  } else {
    for (const auto& e : s.expressions) {
      if (e == kNoneExpression) fail("\"None\" mixed with other expressions");
      if (e.empty()) fail("empty referring expression");
    }
    if (s.gt_masks.size() != s.expressions.size()) {
      fail(std::to_string(s.expressions.size()) + " expressions but " +
           std::to_string(s.gt_masks.size()) + " gt masks");
    }
  }
  for (const auto& m : s.gt_masks) {
    try {
      validate_rle(m);
    } catch (const FormatError& e) {
      fail(std::string("gt mask: ") + e.what());
    }
    if (m.size != s.gt_masks.front().size) fail("gt masks differ in size");
  }
  if (s.image_size && !s.gt_masks.empty() && *s.image_size != s.gt_masks.front().size) {
    fail("image_size disagrees with gt mask size");
  }
  if (!s.choices.empty() && !s.answer_index()) {
    fail("answer \"" + s.answer + "\" is not one of the choices");
  }
}

Sample sample_from_json(const json& j) {
  Sample s;
  try {
    s.sample_id = j.at("sample_id").get<std::string>();
  } catch (const json::exception&) {
    throw SchemaError("sample without a string \"sample_id\"");
  }
  try {
    s.image_path = j.value("image_path", std::string{});
    s.question = j.value("question", std::string{});
    s.choices = j.value("choices", std::vector<std::string>{});
    s.answer = j.value("answer", std::string{});
    s.expressions = j.at("expressions").get<std::vector<std::string>>();
    if (j.contains("gt_masks")) {
      for (const auto& m : j.at("gt_masks")) s.gt_masks.push_back(m.get<MaskRLE>());
    }
    if (j.contains("image_size")) {
      const auto& sz = j.at("image_size");
      s.image_size = MaskSize{sz.at(0).get<std::uint32_t>(), sz.at(1).get<std::uint32_t>()};
    }
  } catch (const json::exception& e) {
    throw SchemaError("sample \"" + s.sample_id + "\": " + e.what());
  } catch (const FormatError& e) {
    throw SchemaError("sample \"" + s.sample_id + "\": " + e.what());
  }
  return s;
}

json sample_to_json(const Sample& s) {
  json j{{"sample_id", s.sample_id},   {"image_path", s.image_path},
         {"question", s.question},     {"choices", s.choices},
         {"answer", s.answer},         {"expressions", s.expressions},
         {"gt_masks", s.gt_masks}};
  if (s.image_size) j["image_size"] = {s.image_size->height, s.image_size->width};
  return j;
}

Benchmark parse_benchmark(const json& doc, std::filesystem::path root) {
  if (!doc.is_object() || !doc.contains("samples") || !doc.at("samples").is_array()) {
    throw SchemaError("benchmark document needs a \"samples\" array");
  }
  Benchmark b;
  b.name = doc.value("benchmark", std::string{});
  b.root = std::move(root);
  std::set<std::string> seen;
  for (const auto& item : doc.at("samples")) {
    auto s = sample_from_json(item);
    validate_sample(s);
    if (!seen.insert(s.sample_id).second) {
      throw SchemaError("sample \"" + s.sample_id + "\": duplicate sample_id");
    }
    b.samples.push_back(std::move(s));
  }
  return b;
}

json benchmark_to_json(const Benchmark& b) {
  json samples = json::array();
  for (const auto& s : b.samples) samples.push_back(sample_to_json(s));
  return json{{"benchmark", b.name}, {"samples", std::move(samples)}};
}

Benchmark load_benchmark(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open benchmark annotations " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return parse_benchmark(doc, path.parent_path());
}

void save_benchmark(const Benchmark& b, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << benchmark_to_json(b).dump(1) << '\n';
}

}  // namespace pixground
