// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include "pixground/judge.h"

#include <cctype>
#include <cstdlib>
#include <fstream>

#include "pixground/run.h"
#include "pixground/text.h"

namespace pixground {

using nlohmann::json;

namespace {

std::string_view strip_decoration(std::string_view s) {
  auto junk = [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '_' || c == '`' ||
           c == '"' || c == '\'' || c == '#' || c == '>';
  };
  while (!s.empty() && junk(s.front())) s.remove_prefix(1);
  return s;
}

}  // namespace

std::optional<bool> parse_yes_no(std::string_view response) {
  auto s = strip_decoration(response);
  auto word_ends = [&](std::size_t n) {
    return s.size() == n || !std::isalpha(static_cast<unsigned char>(s[n]));
  };
  if (text::starts_with_ci(s, "yes") && word_ends(3)) return true;
  if (text::starts_with_ci(s, "no") && word_ends(2)) return false;
  return std::nullopt;
}

std::optional<std::size_t> parse_pick_index(std::string_view response, std::size_t n) {
  auto s = strip_decoration(response);
  if (text::starts_with_ci(s, "image")) s = strip_decoration(s.substr(5));
  std::size_t i = 0;
  std::size_t value = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])) && i < 9) {
    value = value * 10 + static_cast<std::size_t>(s[i] - '0');
    ++i;
  }
  if (i == 0 || value < 1 || value > n) return std::nullopt;
  return value - 1;
}

std::string to_string(JudgeQuery q) {
  return q == JudgeQuery::YesNo ? "yes_no" : "pick_index";
}

namespace {

JudgeQuery parse_query(const std::string& s) {
  if (s == "yes_no") return JudgeQuery::YesNo;
  if (s == "pick_index") return JudgeQuery::PickIndex;
  throw FormatError("unknown judge query kind \"" + s + "\"");
}

std::vector<std::vector<std::uint8_t>> to_png(std::span<const Image> images) {
  std::vector<std::vector<std::uint8_t>> out;
  out.reserve(images.size());
  for (const auto& im : images) out.push_back(encode_png(im));
  return out;
}

}  // namespace

bool BackendJudge::ask_yes_no(std::span<const Image> images, const std::string& prompt) {
  const auto pngs = to_png(images);
  const auto reply = backend_->query(JudgeQuery::YesNo, pngs, prompt);
  auto v = parse_yes_no(reply);
  if (!v) throw JudgeError("judge reply is not Yes/No: \"" + reply + "\"");
  return *v;
}

std::size_t BackendJudge::pick_index(std::span<const Image> images, const std::string& prompt) {
  const auto pngs = to_png(images);
  const auto reply = backend_->query(JudgeQuery::PickIndex, pngs, prompt);
  auto v = parse_pick_index(reply, images.size());
  if (!v) {
    throw JudgeError("judge reply is not an image number in [1, " +
                     std::to_string(images.size()) + "]: \"" + reply + "\"");
  }
  return *v;
}

std::string png_digest(std::span<const std::uint8_t> png) {
  return text::hex64(text::fnv1a64(
      std::string_view(reinterpret_cast<const char*>(png.data()), png.size())));
}

json JudgeTranscript::to_json() const {
  json scopes_json = json::object();
  for (const auto& [scope, entries] : scopes) {
    json list = json::array();
    for (const auto& e : entries) {
      list.push_back(json{{"kind", pixground::to_string(e.kind)},
                          {"prompt", e.prompt},
                          {"images", e.image_digests},
                          {"response", e.response}});
    }
    scopes_json[scope] = std::move(list);
  }
  return json{{"version", 1}, {"scopes", std::move(scopes_json)}};
}

JudgeTranscript JudgeTranscript::from_json(const json& doc) {
  JudgeTranscript t;
  try {
    for (const auto& [scope, list] : doc.at("scopes").items()) {
      auto& entries = t.scopes[scope];
      for (const auto& e : list) {
        entries.push_back(TranscriptEntry{parse_query(e.at("kind").get<std::string>()),
                                          e.at("prompt").get<std::string>(),
                                          e.value("images", std::vector<std::string>{}),
                                          e.at("response").get<std::string>()});
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("judge transcript: ") + e.what());
  }
  return t;
}

JudgeTranscript JudgeTranscript::load(const std::filesystem::path& path) {
  return from_json(read_json_file(path));
}

void JudgeTranscript::save(const std::filesystem::path& path) const {
  write_json_file(to_json(), path);
}

std::string ReplayJudgeBackend::query(JudgeQuery kind,
                                      std::span<const std::vector<std::uint8_t>> png_images,
                                      const std::string& prompt) {
  if (next_ >= entries_.size()) {
    throw JudgeError("transcript scope \"" + scope_ + "\" exhausted after " +
                     std::to_string(entries_.size()) + " calls");
  }
  const auto& e = entries_[next_];
  if (e.kind != kind || e.prompt != prompt) {
    throw JudgeError("transcript scope \"" + scope_ + "\" call " + std::to_string(next_) +
                     " diverged: expected " + to_string(e.kind) + " \"" + e.prompt + "\"");
  }
  if (e.image_digests.size() != png_images.size()) {
    throw JudgeError("transcript scope \"" + scope_ + "\" call " + std::to_string(next_) +
                     " image count differs");
  }
  for (std::size_t i = 0; i < png_images.size(); ++i) {
    if (png_digest(png_images[i]) != e.image_digests[i]) {
      throw JudgeError("transcript scope \"" + scope_ + "\" call " + std::to_string(next_) +
                       " image " + std::to_string(i) + " differs from the recording");
    }
  }
  ++next_;
  return e.response;
}

TranscriptMode parse_transcript_mode(std::string_view s) {
  auto l = text::to_lower_ascii(s);
  if (l == "live") return TranscriptMode::Live;
  if (l == "record") return TranscriptMode::Record;
  if (l == "replay") return TranscriptMode::Replay;
  throw InvalidArgument("transcript mode must be record, replay or live");
}

TranscriptMode transcript_mode_from_env(TranscriptMode fallback) {
  const char* v = std::getenv("JUDGE_TRANSCRIPT_MODE");
  if (v == nullptr || *v == '\0') return fallback;
  return parse_transcript_mode(v);
}

namespace {

class RecordingBackend : public JudgeBackend {
 public:
  RecordingBackend(std::shared_ptr<JudgeBackend> live, TranscriptJudgeProvider* sink,
                   std::string scope)
      : live_(std::move(live)), sink_(sink), scope_(std::move(scope)) {}

  std::string query(JudgeQuery kind, std::span<const std::vector<std::uint8_t>> png_images,
                    const std::string& prompt) override {
    auto reply = live_->query(kind, png_images, prompt);
    TranscriptEntry e{kind, prompt, {}, reply};
    for (const auto& p : png_images) e.image_digests.push_back(png_digest(p));
    sink_->append(scope_, std::move(e));
    return reply;
  }

 private:
  std::shared_ptr<JudgeBackend> live_;
  TranscriptJudgeProvider* sink_;
  std::string scope_;
};

}  // namespace

TranscriptJudgeProvider::TranscriptJudgeProvider(
    TranscriptMode mode, std::filesystem::path transcript_path,
    std::function<std::shared_ptr<JudgeBackend>()> make_live)
    : mode_(mode), path_(std::move(transcript_path)), make_live_(std::move(make_live)) {
  if (mode_ == TranscriptMode::Replay) {
    if (path_.empty()) throw InvalidArgument("replay mode needs a judge transcript path");
    replay_ = JudgeTranscript::load(path_);
  } else if (!make_live_) {
    throw InvalidArgument("live/record judge mode needs an endpoint");
  }
  if (mode_ == TranscriptMode::Record && path_.empty()) {
    throw InvalidArgument("record mode needs a judge transcript path");
  }
}

std::unique_ptr<JudgeClient> TranscriptJudgeProvider::open(const std::string& scope) {
  switch (mode_) {
    case TranscriptMode::Replay: {
      auto it = replay_.scopes.find(scope);
      auto entries = it == replay_.scopes.end() ? std::vector<TranscriptEntry>{} : it->second;
      return std::make_unique<BackendJudge>(
          std::make_shared<ReplayJudgeBackend>(scope, std::move(entries)));
    }
    case TranscriptMode::Record:
      return std::make_unique<BackendJudge>(
          std::make_shared<RecordingBackend>(make_live_(), this, scope));
    case TranscriptMode::Live:
      return std::make_unique<BackendJudge>(make_live_());
  }
  return nullptr;
}

void TranscriptJudgeProvider::append(const std::string& scope, TranscriptEntry entry) {
  std::lock_guard<std::mutex> lock(mu_);
  recorded_.scopes[scope].push_back(std::move(entry));
}

void TranscriptJudgeProvider::finish() {
  if (mode_ != TranscriptMode::Record) return;
  std::lock_guard<std::mutex> lock(mu_);
  recorded_.save(path_);
}

CachingTextClient::CachingTextClient(std::shared_ptr<TextClient> inner, std::string id,
                                     std::filesystem::path cache_path)
    : inner_(std::move(inner)), id_(std::move(id)), path_(std::move(cache_path)) {
  if (!path_.empty() && std::filesystem::exists(path_)) {
    auto doc = read_json_file(path_);
    for (const auto& [k, v] : doc.at("entries").items()) cache_[k] = v.get<std::string>();
  }
}

std::string CachingTextClient::complete(const std::string& prompt) {
  const std::string key = id_ + "\n" + prompt;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    if (!inner_) throw Error("no cached completion for prompt \"" + prompt + "\"");
  }
  auto reply = inner_->complete(prompt);
  std::lock_guard<std::mutex> lock(mu_);
  ++inner_calls_;
  return cache_.emplace(key, std::move(reply)).first->second;
}

void CachingTextClient::save() const {
  if (path_.empty()) return;
  std::lock_guard<std::mutex> lock(mu_);
  json entries = json::object();
  for (const auto& [k, v] : cache_) entries[k] = v;
  write_json_file(json{{"version", 1}, {"entries", entries}}, path_);
}

std::size_t CachingTextClient::inner_calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return inner_calls_;
}

std::string EndpointConfig::token() const {
  if (auth_env.empty()) return {};
  const char* v = std::getenv(auth_env.c_str());
  return v == nullptr ? std::string{} : std::string(v);
}

ClientConfig ClientConfig::load(const std::filesystem::path& path) {
  const auto doc = read_json_file(path);
  const auto base = path.parent_path();
  auto endpoint = [&](const json& j) {
    EndpointConfig e;
    e.endpoint = j.value("endpoint", std::string{});
    e.auth_env = j.value("auth_env", std::string{});
    e.model = j.value("model", std::string{});
    std::filesystem::path t = j.value("transcript", std::string{});
    if (!t.empty() && t.is_relative()) t = base / t;
    e.transcript = t;
    return e;
  };
  ClientConfig c;
  try {
    if (doc.contains("judge")) c.judge = endpoint(doc.at("judge"));
    if (doc.contains("rewriter")) {
      const auto& r = doc.at("rewriter");
      if (r.value("kind", std::string{}) == "echo") {
        c.echo_rewriter = true;
      } else {
        c.rewriter = endpoint(r);
      }
    }
    if (doc.contains("categorizer")) c.categorizer = endpoint(doc.at("categorizer"));
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
  return c;
}

}  // namespace pixground
