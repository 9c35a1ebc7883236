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

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "twai/errors.hpp"
#include "twai/util.hpp"

namespace twai {

enum class ProviderKind { kRemote, kMock };

std::string_view to_string(ProviderKind kind);
ProviderKind parse_provider_kind(std::string_view s);

/// Keys understood in endpoint_config:
///   remote: url (required), model, api_key_env
///   mock:   fixture (path), delay_ms, fail ("true"), seed
struct ProviderSpec {
  std::string id;
  std::string display_name;
  ProviderKind kind = ProviderKind::kMock;
  std::map<std::string, std::string> endpoint_config;
};

struct HistoryTurn {
  std::string prompt;
  std::string response;
};

struct GenerationResponse {
  std::string id;
  std::string provider_id;
  std::string prompt_text;
  std::string text;
  Timestamp created_at{};
  std::int64_t latency_ms = 0;

  friend bool operator==(const GenerationResponse&, const GenerationResponse&) = default;
};

struct ErrorInfo {
  ErrorCode code = ErrorCode::kInternal;
  std::string message;

  friend bool operator==(const ErrorInfo&, const ErrorInfo&) = default;
};

/// One fan_out entry: exactly one of response / error is set.
struct ProviderOutcome {
  std::string provider_id;
  std::optional<GenerationResponse> response;
  std::optional<ErrorInfo> error;

  bool ok() const { return response.has_value(); }
};

class Provider {
 public:
  explicit Provider(ProviderSpec spec) : spec_(std::move(spec)) {}
  virtual ~Provider() = default;

  Provider(const Provider&) = delete;
  Provider& operator=(const Provider&) = delete;

  const ProviderSpec& spec() const { return spec_; }

  /// Returns the generated text. Throws Error on failure.
  virtual std::string complete(const std::string& prompt,
                               const std::vector<HistoryTurn>& history) = 0;

 private:
  ProviderSpec spec_;
};

/// Ordered (prompt pattern -> candidate responses) table. A pattern matches
/// when it equals the trimmed prompt, or failing that, when it occurs in the
/// prompt case-insensitively. "*" matches anything and is tried last.
class MockFixture {
 public:
  struct Entry {
    std::string pattern;
    std::vector<std::string> responses;
  };

  MockFixture() = default;
  explicit MockFixture(std::vector<Entry> entries) : entries_(std::move(entries)) {}

  /// Accepts {"entries": [{"pattern": ..., "responses": [...]}, ...]} or a
  /// plain object {pattern: [responses]}.
  static MockFixture from_json(const nlohmann::json& doc);
  static MockFixture from_file(const std::filesystem::path& path);

  const Entry* match(std::string_view prompt) const;
  const std::vector<Entry>& entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

class MockProvider : public Provider {
 public:
  struct Options {
    std::chrono::milliseconds delay{0};
    bool fail = false;
    /// Mixed into the selection hash; defaults to the provider id.
    std::string seed;
  };

  MockProvider(ProviderSpec spec, MockFixture fixture, Options options);

  std::string complete(const std::string& prompt,
                       const std::vector<HistoryTurn>& history) override;

  /// The deterministic choice, without delay or fault injection.
  std::string select(const std::string& prompt, std::size_t history_length) const;

 private:
  MockFixture fixture_;
  Options options_;
};

/// OpenAI-compatible chat-completions adapter. The credential is read from the
/// environment variable named by endpoint_config["api_key_env"] on every call.
class RemoteProvider : public Provider {
 public:
  RemoteProvider(ProviderSpec spec, std::chrono::milliseconds timeout);

  std::string complete(const std::string& prompt,
                       const std::vector<HistoryTurn>& history) override;

 private:
  std::chrono::milliseconds timeout_;
};

class ProviderRegistry {
 public:
  static constexpr std::chrono::milliseconds kDefaultTimeout{30'000};

  ProviderRegistry();
  explicit ProviderRegistry(std::chrono::milliseconds timeout);

  /// Builds the provider from the spec. Relative fixture paths resolve
  /// against base_dir.
  void register_provider(const ProviderSpec& spec, const std::filesystem::path& base_dir = {});
  void register_provider(std::shared_ptr<Provider> provider);

  bool contains(std::string_view id) const;
  std::vector<ProviderSpec> specs() const;

  GenerationResponse generate(const std::string& provider_id, const std::string& prompt,
                              const std::vector<HistoryTurn>& history = {});

  /// One entry per requested id, in request order. Requests run concurrently;
  /// a failing provider yields an error entry and never aborts the batch.
  std::vector<ProviderOutcome> fan_out(const std::string& prompt,
                                       const std::vector<std::string>& provider_ids,
                                       const std::vector<HistoryTurn>& history = {});

  std::chrono::milliseconds timeout() const { return timeout_; }

  /// Loads a JSON array of provider specs.
  static std::vector<ProviderSpec> load_specs(const std::filesystem::path& path);

 private:
  std::shared_ptr<Provider> find(const std::string& id) const;

  std::chrono::milliseconds timeout_;
  mutable std::shared_mutex mutex_;
  std::vector<std::shared_ptr<Provider>> providers_;
  IdGenerator ids_;
};

nlohmann::json to_json(const ProviderSpec& spec);
ProviderSpec provider_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GenerationResponse& r);
GenerationResponse generation_response_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ErrorInfo& e);
ErrorInfo error_info_from_json(const nlohmann::json& j);

}  // namespace twai
