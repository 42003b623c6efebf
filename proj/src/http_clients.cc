// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#include <httplib.h>

#include "pixground/judge.h"

namespace pixground {

using nlohmann::json;

namespace {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Url split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw InvalidArgument("endpoint needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

std::string post_for_text(const std::string& endpoint, const json& body,
                          const std::string& bearer_token) {
  const auto url = split_url(endpoint);
  httplib::Client client(url.origin);
  client.set_read_timeout(300, 0);
  httplib::Headers headers;
  if (!bearer_token.empty()) headers.emplace("Authorization", "Bearer " + bearer_token);
  auto res = client.Post(url.path, headers, body.dump(), "application/json");
  if (!res) {
    throw JudgeError("request to " + endpoint + " failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw JudgeError("request to " + endpoint + " returned HTTP " + std::to_string(res->status));
  }
  try {
    return json::parse(res->body).at("text").get<std::string>();
  } catch (const json::exception& e) {
    throw JudgeError("reply from " + endpoint + " lacks a \"text\" field: " + e.what());
  }
}

HttpJudgeBackend::HttpJudgeBackend(std::string endpoint, std::string model,
                                   std::string bearer_token)
    : endpoint_(std::move(endpoint)), model_(std::move(model)), token_(std::move(bearer_token)) {}

std::string HttpJudgeBackend::query(JudgeQuery kind,
                                    std::span<const std::vector<std::uint8_t>> png_images,
                                    const std::string& prompt) {
  json images = json::array();
  for (const auto& png : png_images) {
    images.push_back(httplib::detail::base64_encode(std::string(png.begin(), png.end())));
  }
  json body{{"model", model_}, {"kind", to_string(kind)}, {"prompt", prompt}, {"images", images}};
  return post_for_text(endpoint_, body, token_);
}

HttpTextClient::HttpTextClient(std::string endpoint, std::string model, std::string bearer_token)
    : endpoint_(std::move(endpoint)), model_(std::move(model)), token_(std::move(bearer_token)) {}

std::string HttpTextClient::complete(const std::string& prompt) {
  return post_for_text(endpoint_, json{{"model", model_}, {"prompt", prompt}}, token_);
}

}  // namespace pixground
