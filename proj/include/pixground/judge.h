// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pixground/error.h"
#include "pixground/image.h"

namespace pixground {

// A judge call failed or returned something unparseable. `transcript` holds
// the calls made so far in the current selection/grading step.
class JudgeError : public Error {
 public:
  JudgeError(const std::string& what, nlohmann::json transcript = nlohmann::json::array())
      : Error(what), transcript_(std::move(transcript)) {}
  const nlohmann::json& transcript() const { return transcript_; }

 private:
  nlohmann::json transcript_;
};

// Leading "yes"/"no" (case-insensitive) after stripping whitespace, quotes,
// and markdown emphasis.
std::optional<bool> parse_yes_no(std::string_view response);
// Leading 1-based integer; returns the 0-based index when within [1, n].
std::optional<std::size_t> parse_pick_index(std::string_view response, std::size_t n);

// Multimodal judge used for existence checks, overlay tournaments and
// answer grading. Implementations must be deterministic for a fixed
// transcript.
class JudgeClient {
 public:
  virtual ~JudgeClient() = default;
  virtual bool ask_yes_no(std::span<const Image> images, const std::string& prompt) = 0;
  // Returns a 0-based index into `images`.
  virtual std::size_t pick_index(std::span<const Image> images, const std::string& prompt) = 0;
};

enum class JudgeQuery { YesNo, PickIndex };
std::string to_string(JudgeQuery q);

// Raw text layer beneath JudgeClient: images travel as PNG bytes.
class JudgeBackend {
 public:
  virtual ~JudgeBackend() = default;
  virtual std::string query(JudgeQuery kind, std::span<const std::vector<std::uint8_t>> png_images,
                            const std::string& prompt) = 0;
};

// Parses backend text per the wire contract; unparseable replies throw JudgeError.
class BackendJudge : public JudgeClient {
 public:
  explicit BackendJudge(std::shared_ptr<JudgeBackend> backend) : backend_(std::move(backend)) {}
  bool ask_yes_no(std::span<const Image> images, const std::string& prompt) override;
  std::size_t pick_index(std::span<const Image> images, const std::string& prompt) override;

 private:
  std::shared_ptr<JudgeBackend> backend_;
};

struct TranscriptEntry {
  JudgeQuery kind = JudgeQuery::YesNo;
  std::string prompt;
  std::vector<std::string> image_digests;  // FNV-1a of each PNG payload
  std::string response;

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

// Judge calls grouped by scope ("<sample_id>/select", "<sample_id>/grade").
struct JudgeTranscript {
  std::map<std::string, std::vector<TranscriptEntry>> scopes;

  static JudgeTranscript load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
  nlohmann::json to_json() const;
  static JudgeTranscript from_json(const nlohmann::json& doc);
};

std::string png_digest(std::span<const std::uint8_t> png);

// Answers from one scope of a recorded transcript, in order; any mismatch in
// kind, prompt or image digests throws JudgeError.
class ReplayJudgeBackend : public JudgeBackend {
 public:
  ReplayJudgeBackend(std::string scope, std::vector<TranscriptEntry> entries)
      : scope_(std::move(scope)), entries_(std::move(entries)) {}
  std::string query(JudgeQuery kind, std::span<const std::vector<std::uint8_t>> png_images,
                    const std::string& prompt) override;

 private:
  std::string scope_;
  std::vector<TranscriptEntry> entries_;
  std::size_t next_ = 0;
};

// HTTP judge. POST <endpoint> with JSON
//   {"model": str, "kind": "yes_no"|"pick_index", "prompt": str,
//    "images": [base64 PNG, ...]}
// and expects {"text": str} back.
class HttpJudgeBackend : public JudgeBackend {
 public:
  HttpJudgeBackend(std::string endpoint, std::string model, std::string bearer_token = {});
  std::string query(JudgeQuery kind, std::span<const std::vector<std::uint8_t>> png_images,
                    const std::string& prompt) override;

 private:
  std::string endpoint_;
  std::string model_;
  std::string token_;
};

enum class TranscriptMode { Live, Record, Replay };
TranscriptMode parse_transcript_mode(std::string_view s);
// JUDGE_TRANSCRIPT_MODE, defaulting to `fallback` when unset.
TranscriptMode transcript_mode_from_env(TranscriptMode fallback);

// Hands out one judge per scope so concurrent samples never share a
// transcript stream. Recording providers collect entries and write them on
// finish().
class JudgeProvider {
 public:
  virtual ~JudgeProvider() = default;
  virtual std::unique_ptr<JudgeClient> open(const std::string& scope) = 0;
  virtual void finish() {}
};

class TranscriptJudgeProvider : public JudgeProvider {
 public:
  // Replay: answers from `transcript_path`. Record: forwards to the backend
  // from `make_live` and writes `transcript_path` on finish(). Live: forwards only.
  TranscriptJudgeProvider(TranscriptMode mode, std::filesystem::path transcript_path,
                          std::function<std::shared_ptr<JudgeBackend>()> make_live);
  std::unique_ptr<JudgeClient> open(const std::string& scope) override;
  void finish() override;

  void append(const std::string& scope, TranscriptEntry entry);

 private:
  TranscriptMode mode_;
  std::filesystem::path path_;
  std::function<std::shared_ptr<JudgeBackend>()> make_live_;
  JudgeTranscript replay_;
  std::mutex mu_;
  JudgeTranscript recorded_;
};

// Plain text completion service (paraphrasing, concept labels).
// POST <endpoint> {"model": str, "prompt": str} -> {"text": str}.
class TextClient {
 public:
  virtual ~TextClient() = default;
  virtual std::string id() const = 0;
  virtual std::string complete(const std::string& prompt) = 0;
};

class HttpTextClient : public TextClient {
 public:
  HttpTextClient(std::string endpoint, std::string model, std::string bearer_token = {});
  std::string id() const override { return model_; }
  std::string complete(const std::string& prompt) override;

 private:
  std::string endpoint_;
  std::string model_;
  std::string token_;
};

// Posts `body` as JSON and returns the "text" field of the JSON reply.
std::string post_for_text(const std::string& endpoint, const nlohmann::json& body,
                          const std::string& bearer_token);

// Memoizes completions by (client id, prompt) and persists them as JSON, so
// nondeterministic services replay byte-identically. With no inner client
// it serves from the cache only and throws on a miss.
class CachingTextClient : public TextClient {
 public:
  CachingTextClient(std::shared_ptr<TextClient> inner, std::string id,
                    std::filesystem::path cache_path = {});
  std::string id() const override { return id_; }
  std::string complete(const std::string& prompt) override;

  void save() const;
  std::size_t inner_calls() const;

 private:
  std::shared_ptr<TextClient> inner_;
  std::string id_;
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<std::string, std::string> cache_;
  std::size_t inner_calls_ = 0;
};

struct EndpointConfig {
  std::string endpoint;
  std::string auth_env;  // name of the env var holding a bearer token
  std::string model;
  std::filesystem::path transcript;  // judge transcript or text-response cache

  std::string token() const;
};

// {"judge": {...}, "rewriter": {...}, "categorizer": {...}}; each entry
// {"endpoint", "auth_env", "model", "transcript"}. A rewriter may instead be
// {"kind": "echo"}. Relative transcript paths resolve against the file.
struct ClientConfig {
  std::optional<EndpointConfig> judge;
  std::optional<EndpointConfig> rewriter;
  bool echo_rewriter = false;
  std::optional<EndpointConfig> categorizer;

  static ClientConfig load(const std::filesystem::path& path);
};

}  // namespace pixground
