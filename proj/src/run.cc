// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pixground/run.h"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "pixground/error.h"
#include "pixground/text.h"

namespace pixground {

using nlohmann::json;

std::string to_string(Probing p) {
  switch (p) {
    case Probing::P1: return "P1";
    case Probing::P2: return "P2";
    case Probing::P3: return "P3";
  }
  return "?";
}

Probing parse_probing(std::string_view s) {
  auto l = text::to_lower_ascii(s);
  if (l == "p1") return Probing::P1;
  if (l == "p2") return Probing::P2;
  if (l == "p3") return Probing::P3;
  throw InvalidArgument("unknown probing \"" + std::string(s) + "\" (expected P1, P2 or P3)");
}

void validate_output(const OutputRecord& r) {
  const std::size_t n_chars = text::codepoint_count(r.text);
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < r.token_offsets.size(); ++i) {
    auto [b, e] = r.token_offsets[i];
    if (b > e || b < prev_end || e > n_chars) {
      throw SchemaError("token " + std::to_string(i) + " offsets [" + std::to_string(b) +
                        ", " + std::to_string(e) + ") are not monotone within the text");
    }
    prev_end = e;
  }
  for (const auto& p : r.phrase_spans) {
    if (p.char_start > p.char_end || p.char_end > n_chars) {
      throw SchemaError("phrase \"" + p.text + "\" char range out of bounds");
    }
    if (text::slice_codepoints(r.text, p.char_start, p.char_end) != p.text) {
      throw SchemaError("phrase \"" + p.text + "\" does not match its text slice \"" +
                        text::slice_codepoints(r.text, p.char_start, p.char_end) + "\"");
    }
    if (p.token_end <= p.token_start || p.token_end > r.n_tokens()) {
      throw SchemaError("phrase \"" + p.text + "\" token range [" +
                        std::to_string(p.token_start) + ", " + std::to_string(p.token_end) +
                        ") outside [0, " + std::to_string(r.n_tokens()) + ")");
    }
    if (p.similarity_to_expr &&
        (*p.similarity_to_expr < -1.0 || *p.similarity_to_expr > 1.0)) {
      throw SchemaError("phrase \"" + p.text + "\" similarity outside [-1, 1]");
    }
  }
}

const SampleRunRef* RunManifest::find(std::string_view sample_id) const {
  for (const auto& s : samples) {
    if (s.sample_id == sample_id) return &s;
  }
  return nullptr;
}

std::filesystem::path RunManifest::resolve(const std::filesystem::path& p) const {
  if (p.empty() || p.is_absolute()) return p;
  return root / p;
}

MaskSize RunManifest::image_size_for(const SampleRunRef& ref) const {
  return MaskSize{ref.image_h.value_or(image_h), ref.image_w.value_or(image_w)};
}

void to_json(json& j, const PhraseSpan& s) {
  j = json{{"text", s.text},
           {"char_start", s.char_start},
           {"char_end", s.char_end},
           {"token_start", s.token_start},
           {"token_end", s.token_end}};
  if (s.similarity_to_expr) j["similarity_to_expr"] = *s.similarity_to_expr;
  if (!s.similarities.empty()) j["similarities"] = s.similarities;
}

void from_json(const json& j, PhraseSpan& s) {
  s.text = j.at("text").get<std::string>();
  s.char_start = j.at("char_start").get<std::size_t>();
  s.char_end = j.at("char_end").get<std::size_t>();
  s.token_start = j.at("token_start").get<std::size_t>();
  s.token_end = j.at("token_end").get<std::size_t>();
  s.similarity_to_expr.reset();
  if (j.contains("similarity_to_expr") && !j.at("similarity_to_expr").is_null()) {
    s.similarity_to_expr = j.at("similarity_to_expr").get<double>();
  }
  s.similarities = j.value("similarities", std::vector<double>{});
}

void to_json(json& j, const OutputRecord& r) {
  json offsets = json::array();
  for (auto [b, e] : r.token_offsets) offsets.push_back({b, e});
  j = json{{"text", r.text}, {"token_offsets", offsets}, {"phrase_spans", r.phrase_spans}};
}

void from_json(const json& j, OutputRecord& r) {
  r.text = j.at("text").get<std::string>();
  r.token_offsets.clear();
  for (const auto& o : j.value("token_offsets", json::array())) {
    r.token_offsets.emplace_back(o.at(0).get<std::size_t>(), o.at(1).get<std::size_t>());
  }
  r.phrase_spans = j.value("phrase_spans", std::vector<PhraseSpan>{});
}

void to_json(json& j, const SampleMasks& m) {
  json prompts = json::array();
  for (const auto& p : m.prompts) {
    prompts.push_back(json{{"point", {p.x, p.y}}, {"masks", p.masks}});
  }
  j = json{{"prompts", prompts}, {"direct_masks", m.direct_masks}};
}

void from_json(const json& j, SampleMasks& m) {
  m.prompts.clear();
  for (const auto& p : j.value("prompts", json::array())) {
    PromptMasks pm;
    pm.x = p.at("point").at(0).get<double>();
    pm.y = p.at("point").at(1).get<double>();
    for (const auto& mask : p.at("masks")) pm.masks.push_back(mask.get<MaskRLE>());
    m.prompts.push_back(std::move(pm));
  }
  m.direct_masks.clear();
  for (const auto& mask : j.value("direct_masks", json::array())) {
    m.direct_masks.push_back(mask.get<MaskRLE>());
  }
}

RunManifest parse_run_manifest(const json& doc, std::filesystem::path root) {
  RunManifest run;
  run.root = std::move(root);
  try {
    run.run_id = doc.at("run_id").get<std::string>();
    run.model_name = doc.value("model_name", std::string{});
    run.probing = parse_probing(doc.at("probing").get<std::string>());
    auto source = doc.value("mask_source", std::string{"mined"});
    if (source == "mined") {
      run.mask_source = MaskSource::Mined;
    } else if (source == "direct") {
      run.mask_source = MaskSource::Direct;
    } else {
      throw SchemaError("run mask_source must be \"mined\" or \"direct\"");
    }
    run.grid_h = doc.at("grid_h").get<std::uint32_t>();
    run.grid_w = doc.at("grid_w").get<std::uint32_t>();
    run.image_w = doc.at("image_w").get<std::uint32_t>();
    run.image_h = doc.at("image_h").get<std::uint32_t>();
    for (const auto& s : doc.at("samples")) {
      SampleRunRef ref;
      ref.sample_id = s.at("sample_id").get<std::string>();
      ref.output = s.at("output").get<std::string>();
      ref.attention = s.value("attention", std::string{});
      ref.masks = s.value("masks", std::string{});
      if (s.contains("image_w")) ref.image_w = s.at("image_w").get<std::uint32_t>();
      if (s.contains("image_h")) ref.image_h = s.at("image_h").get<std::uint32_t>();
      run.samples.push_back(std::move(ref));
    }
  } catch (const json::exception& e) {
    throw SchemaError(std::string("run manifest: ") + e.what());
  }
  if (run.grid_h == 0 || run.grid_w == 0 || run.image_w == 0 || run.image_h == 0) {
    throw SchemaError("run manifest: grid and image dimensions must be positive");
  }
  std::set<std::string> seen;
  for (const auto& s : run.samples) {
    if (!seen.insert(s.sample_id).second) {
      throw SchemaError("run manifest: duplicate sample_id \"" + s.sample_id + "\"");
    }
    if ((s.image_w && *s.image_w == 0) || (s.image_h && *s.image_h == 0)) {
      throw SchemaError("run manifest: sample \"" + s.sample_id + "\" has zero image size");
    }
  }
  return run;
}

json run_manifest_to_json(const RunManifest& run) {
  json samples = json::array();
  for (const auto& s : run.samples) {
    json j{{"sample_id", s.sample_id}, {"output", s.output.generic_string()}};
    if (!s.attention.empty()) j["attention"] = s.attention.generic_string();
    if (!s.masks.empty()) j["masks"] = s.masks.generic_string();
    if (s.image_w) j["image_w"] = *s.image_w;
    if (s.image_h) j["image_h"] = *s.image_h;
    samples.push_back(std::move(j));
  }
  return json{{"run_id", run.run_id},
              {"model_name", run.model_name},
              {"probing", to_string(run.probing)},
              {"mask_source", run.mask_source == MaskSource::Mined ? "mined" : "direct"},
              {"grid_h", run.grid_h},
              {"grid_w", run.grid_w},
              {"image_w", run.image_w},
              {"image_h", run.image_h},
              {"samples", std::move(samples)}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << doc.dump(1) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

RunManifest load_run_manifest(const std::filesystem::path& path, bool check_paths) {
  auto run = parse_run_manifest(read_json_file(path), path.parent_path());
  if (check_paths) {
    for (const auto& s : run.samples) {
      for (const auto* p : {&s.output, &s.attention, &s.masks}) {
        if (!p->empty() && !std::filesystem::exists(run.resolve(*p))) {
          throw SchemaError("run manifest: sample \"" + s.sample_id + "\" references missing " +
                            run.resolve(*p).string());
        }
      }
    }
  }
  return run;
}

void save_run_manifest(const RunManifest& run, const std::filesystem::path& path) {
  write_json_file(run_manifest_to_json(run), path);
}

OutputRecord load_output_record(const std::filesystem::path& path) {
  try {
    return read_json_file(path).get<OutputRecord>();
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

SampleMasks load_sample_masks(const std::filesystem::path& path) {
  try {
    return read_json_file(path).get<SampleMasks>();
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

}  // namespace pixground
