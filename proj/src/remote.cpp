// Copyright 2026 The twai Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP-backed adapters: remote generation providers and web search.
#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "twai/double_check.hpp"
#include "twai/errors.hpp"
#include "twai/provider.hpp"

namespace twai {

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // begins with '/'
};

ParsedUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidConfig, "url '" + url + "' has no scheme");
  }
  const auto path_begin = url.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) return {url, "/"};
  return {url.substr(0, path_begin), url.substr(path_begin)};
}

void set_timeouts(httplib::Client& client, std::chrono::milliseconds timeout) {
  const auto secs = static_cast<time_t>(timeout.count() / 1000);
  const auto usecs = static_cast<time_t>((timeout.count() % 1000) * 1000);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
}

}  // namespace

RemoteProvider::RemoteProvider(ProviderSpec spec, std::chrono::milliseconds timeout)
    : Provider(std::move(spec)), timeout_(timeout) {
  if (!this->spec().endpoint_config.contains("url")) {
    throw Error(ErrorCode::kInvalidConfig, "remote provider '" + this->spec().id + "' has no url");
  }
  split_url(this->spec().endpoint_config.at("url"));
}

std::string RemoteProvider::complete(const std::string& prompt,
                                     const std::vector<HistoryTurn>& history) {
  const auto& cfg = spec().endpoint_config;
  const auto url = split_url(cfg.at("url"));

  nlohmann::json messages = nlohmann::json::array();
  for (const auto& turn : history) {
    messages.push_back({{"role", "user"}, {"content", turn.prompt}});
    messages.push_back({{"role", "assistant"}, {"content", turn.response}});
  }
  messages.push_back({{"role", "user"}, {"content", prompt}});
  nlohmann::json body{{"messages", messages}};
  if (auto it = cfg.find("model"); it != cfg.end()) body["model"] = it->second;

  httplib::Headers headers;
  if (auto it = cfg.find("api_key_env"); it != cfg.end()) {
    const char* key = std::getenv(it->second.c_str());
    if (key == nullptr || *key == '\0') {
      throw Error(ErrorCode::kProviderUnavailable,
                  "credential variable " + it->second + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }

  httplib::Client client(url.origin);
  set_timeouts(client, timeout_);
  auto res = client.Post(url.path, headers, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::kProviderUnavailable,
                spec().id + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kProviderUnavailable,
                spec().id + ": HTTP " + std::to_string(res->status));
  }
  try {
    const auto doc = nlohmann::json::parse(res->body);
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kProviderUnavailable, spec().id + ": unexpected reply: " + e.what());
  }
}

namespace double_check {

HttpSearchClient::HttpSearchClient(std::string url, std::chrono::milliseconds timeout)
    : url_(std::move(url)), timeout_(timeout) {
  split_url(url_);
}

std::vector<SearchHit> HttpSearchClient::search(const std::string& query) {
  if (query.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw Error(ErrorCode::kEmptyQuery, "search query must not be empty");
  }
  const auto url = split_url(url_);
  httplib::Client client(url.origin);
  set_timeouts(client, timeout_);
  auto res = client.Get(url.path, httplib::Params{{"q", query}}, httplib::Headers{});
  if (!res || res->status != 200) {
    throw Error(ErrorCode::kSearchUnavailable,
                res ? "search HTTP " + std::to_string(res->status)
                    : "search failed: " + httplib::to_string(res.error()));
  }
  std::vector<SearchHit> hits;
  try {
    for (const auto& h : nlohmann::json::parse(res->body)) hits.push_back(search_hit_from_json(h));
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kSearchUnavailable, std::string("malformed search reply: ") + e.what());
  }
  return hits;
}

}  // namespace double_check

}  // namespace twai
