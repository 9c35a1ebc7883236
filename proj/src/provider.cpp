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

#include "twai/provider.hpp"

#include <algorithm>
#include <cctype>
#include <future>
#include <mutex>
#include <thread>

namespace twai {

using nlohmann::json;

std::string_view to_string(ProviderKind kind) {
  return kind == ProviderKind::kRemote ? "remote" : "mock";
}

ProviderKind parse_provider_kind(std::string_view s) {
  if (s == "remote") return ProviderKind::kRemote;
  if (s == "mock") return ProviderKind::kMock;
  throw Error(ErrorCode::kInvalidConfig, "unknown provider kind '" + std::string(s) + "'");
}

// --- MockFixture -------------------------------------------------------------

namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

MockFixture::Entry entry_from_json(const std::string& pattern, const json& responses) {
  if (!responses.is_array() || responses.empty()) {
    throw Error(ErrorCode::kInvalidConfig,
                "fixture pattern '" + pattern + "' needs a non-empty response array");
  }
  MockFixture::Entry e{pattern, {}};
  for (const auto& r : responses) e.responses.push_back(r.get<std::string>());
  return e;
}

}  // namespace

MockFixture MockFixture::from_json(const json& doc) {
  std::vector<Entry> entries;
  try {
    if (doc.is_object() && doc.contains("entries")) {
      for (const auto& e : doc.at("entries")) {
        entries.push_back(entry_from_json(e.at("pattern").get<std::string>(), e.at("responses")));
      }
    } else if (doc.is_object()) {
      for (const auto& [pattern, responses] : doc.items()) {
        entries.push_back(entry_from_json(pattern, responses));
      }
    } else {
      throw Error(ErrorCode::kInvalidConfig, "mock fixture must be a JSON object");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("malformed mock fixture: ") + e.what());
  }
  return MockFixture(std::move(entries));
}

MockFixture MockFixture::from_file(const std::filesystem::path& path) {
  try {
    return from_json(json::parse(read_file(path)));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidConfig, path.string() + ": " + e.what());
  }
}

const MockFixture::Entry* MockFixture::match(std::string_view prompt) const {
  const auto trimmed = trim(prompt);
  for (const auto& e : entries_) {
    if (e.pattern == trimmed) return &e;
  }
  const auto haystack = lower_ascii(prompt);
  for (const auto& e : entries_) {
    if (e.pattern != "*" && !e.pattern.empty() &&
        haystack.find(lower_ascii(e.pattern)) != std::string::npos) {
      return &e;
    }
  }
  for (const auto& e : entries_) {
    if (e.pattern == "*") return &e;
  }
  return nullptr;
}

// --- MockProvider ------------------------------------------------------------

MockProvider::MockProvider(ProviderSpec spec, MockFixture fixture, Options options)
    : Provider(std::move(spec)), fixture_(std::move(fixture)), options_(std::move(options)) {
  if (options_.seed.empty()) options_.seed = this->spec().id;
}

std::string MockProvider::select(const std::string& prompt, std::size_t history_length) const {
  const auto* entry = fixture_.match(prompt);
  if (entry == nullptr) {
    return "Mock response from " + spec().id + " to: " + std::string(trim(prompt));
  }
  const auto key = prompt + '\x1f' + std::to_string(history_length);
  const auto h = stable_hash(key, stable_hash(options_.seed));
  return entry->responses[h % entry->responses.size()];
}

std::string MockProvider::complete(const std::string& prompt,
                                   const std::vector<HistoryTurn>& history) {
  if (options_.delay.count() > 0) std::this_thread::sleep_for(options_.delay);
  if (options_.fail) {
    throw Error(ErrorCode::kProviderUnavailable, "provider '" + spec().id + "' is configured to fail");
  }
  return select(prompt, history.size());
}

// --- ProviderRegistry --------------------------------------------------------

ProviderRegistry::ProviderRegistry() : ProviderRegistry(kDefaultTimeout) {}

ProviderRegistry::ProviderRegistry(std::chrono::milliseconds timeout) : timeout_(timeout) {}

void ProviderRegistry::register_provider(const ProviderSpec& spec,
                                         const std::filesystem::path& base_dir) {
  if (spec.id.empty()) throw Error(ErrorCode::kInvalidConfig, "provider id must not be empty");
  const auto& cfg = spec.endpoint_config;
  auto get = [&](const std::string& key) -> std::string {
    auto it = cfg.find(key);
    return it == cfg.end() ? std::string{} : it->second;
  };

  std::shared_ptr<Provider> provider;
  if (spec.kind == ProviderKind::kRemote) {
    if (get("url").empty()) {
      throw Error(ErrorCode::kInvalidConfig, "remote provider '" + spec.id + "' has no url");
    }
    provider = std::make_shared<RemoteProvider>(spec, timeout_);
  } else {
    MockFixture fixture;
    if (auto path = get("fixture"); !path.empty()) {
      std::filesystem::path p(path);
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      fixture = MockFixture::from_file(p);
    }
    MockProvider::Options options;
    try {
      if (auto d = get("delay_ms"); !d.empty()) options.delay = std::chrono::milliseconds(std::stoll(d));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidConfig, "delay_ms must be an integer");
    }
    options.fail = get("fail") == "true";
    options.seed = get("seed");
    provider = std::make_shared<MockProvider>(spec, std::move(fixture), std::move(options));
  }
  register_provider(std::move(provider));
}

void ProviderRegistry::register_provider(std::shared_ptr<Provider> provider) {
  std::unique_lock lock(mutex_);
  for (const auto& p : providers_) {
    if (p->spec().id == provider->spec().id) {
      throw Error(ErrorCode::kDuplicateProvider,
                  "provider '" + provider->spec().id + "' already registered");
    }
  }
  providers_.push_back(std::move(provider));
}

bool ProviderRegistry::contains(std::string_view id) const {
  std::shared_lock lock(mutex_);
  return std::any_of(providers_.begin(), providers_.end(),
                     [&](const auto& p) { return p->spec().id == id; });
}

std::vector<ProviderSpec> ProviderRegistry::specs() const {
  std::shared_lock lock(mutex_);
  std::vector<ProviderSpec> out;
  for (const auto& p : providers_) out.push_back(p->spec());
  return out;
}

std::shared_ptr<Provider> ProviderRegistry::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  for (const auto& p : providers_) {
    if (p->spec().id == id) return p;
  }
  throw Error(ErrorCode::kUnknownProvider, "unknown provider '" + id + "'");
}

namespace {

struct Completion {
  std::string text;
  std::int64_t latency_ms = 0;
};

// Runs the request on a detached thread so a hung provider cannot hold the
// caller past the timeout. The thread keeps the provider alive until it ends.
std::future<Completion> launch(std::shared_ptr<Provider> provider, std::string prompt,
                               std::vector<HistoryTurn> history) {
  auto task = std::make_shared<std::packaged_task<Completion()>>(
      [provider = std::move(provider), prompt = std::move(prompt), history = std::move(history)] {
        const auto start = std::chrono::steady_clock::now();
        std::string text;
        try {
          text = provider->complete(prompt, history);
        } catch (const Error&) {
          throw;
        } catch (const std::exception& e) {
          throw Error(ErrorCode::kProviderUnavailable, e.what());
        }
        if (text.empty()) {
          throw Error(ErrorCode::kProviderUnavailable,
                      "provider '" + provider->spec().id + "' returned an empty response");
        }
        const auto elapsed = std::chrono::steady_clock::now() - start;
        return Completion{
            std::move(text),
            std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count()};
      });
  auto future = task->get_future();
  std::thread([task] { (*task)(); }).detach();
  return future;
}

Completion await(std::future<Completion>& future, std::chrono::milliseconds timeout,
                 const std::string& provider_id) {
  if (future.wait_for(timeout) == std::future_status::timeout) {
    throw Error(ErrorCode::kProviderUnavailable,
                "provider '" + provider_id + "' timed out after " +
                    std::to_string(timeout.count()) + " ms");
  }
  return future.get();
}

}  // namespace

GenerationResponse ProviderRegistry::generate(const std::string& provider_id,
                                              const std::string& prompt,
                                              const std::vector<HistoryTurn>& history) {
  auto provider = find(provider_id);
  if (trim(prompt).empty()) throw Error(ErrorCode::kEmptyPrompt, "prompt must not be empty");
  auto future = launch(std::move(provider), prompt, history);
  auto done = await(future, timeout_, provider_id);
  return GenerationResponse{ids_.next("rsp"), provider_id, prompt, std::move(done.text),
                            now_utc(), done.latency_ms};
}

std::vector<ProviderOutcome> ProviderRegistry::fan_out(const std::string& prompt,
                                                       const std::vector<std::string>& provider_ids,
                                                       const std::vector<HistoryTurn>& history) {
  if (provider_ids.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "fan_out needs at least one provider");
  }
  if (trim(prompt).empty()) throw Error(ErrorCode::kEmptyPrompt, "prompt must not be empty");
  std::vector<std::shared_ptr<Provider>> providers;
  for (const auto& id : provider_ids) providers.push_back(find(id));

  std::vector<std::future<Completion>> futures;
  futures.reserve(providers.size());
  for (auto& p : providers) futures.push_back(launch(p, prompt, history));

  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  std::vector<ProviderOutcome> out;
  out.reserve(providers.size());
  for (std::size_t i = 0; i < futures.size(); ++i) {
    ProviderOutcome entry{provider_ids[i], std::nullopt, std::nullopt};
    try {
      const auto remaining = std::max(std::chrono::milliseconds(0),
                                      std::chrono::duration_cast<std::chrono::milliseconds>(
                                          deadline - std::chrono::steady_clock::now()));
      auto done = await(futures[i], remaining, provider_ids[i]);
      entry.response = GenerationResponse{ids_.next("rsp"), provider_ids[i], prompt,
                                          std::move(done.text), now_utc(), done.latency_ms};
    } catch (const Error& e) {
      entry.error = ErrorInfo{e.code(), e.what()};
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<ProviderSpec> ProviderRegistry::load_specs(const std::filesystem::path& path) {
  std::vector<ProviderSpec> out;
  try {
    const auto doc = json::parse(read_file(path));
    const auto& list = doc.is_object() && doc.contains("providers") ? doc.at("providers") : doc;
    if (!list.is_array()) throw Error(ErrorCode::kInvalidConfig, "providers file must hold an array");
    for (const auto& j : list) out.push_back(provider_spec_from_json(j));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, path.string() + ": " + e.what());
  }
  return out;
}

// --- JSON --------------------------------------------------------------------

json to_json(const ProviderSpec& spec) {
  return json{{"id", spec.id},
              {"display_name", spec.display_name},
              {"kind", to_string(spec.kind)},
              {"endpoint_config", spec.endpoint_config}};
}

ProviderSpec provider_spec_from_json(const json& j) {
  ProviderSpec spec;
  spec.id = j.at("id").get<std::string>();
  spec.display_name = j.value("display_name", spec.id);
  spec.kind = parse_provider_kind(j.value("kind", std::string("mock")));
  if (j.contains("endpoint_config")) {
    for (const auto& [k, v] : j.at("endpoint_config").items()) {
      spec.endpoint_config[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  return spec;
}

json to_json(const GenerationResponse& r) {
  return json{{"id", r.id},
              {"provider_id", r.provider_id},
              {"prompt_text", r.prompt_text},
              {"text", r.text},
              {"created_at", format_timestamp(r.created_at)},
              {"latency_ms", r.latency_ms}};
}

GenerationResponse generation_response_from_json(const json& j) {
  return GenerationResponse{j.at("id").get<std::string>(),
                            j.at("provider_id").get<std::string>(),
                            j.at("prompt_text").get<std::string>(),
                            j.at("text").get<std::string>(),
                            parse_timestamp(j.at("created_at").get<std::string>()),
                            j.at("latency_ms").get<std::int64_t>()};
}

json to_json(const ErrorInfo& e) {
  return json{{"code", code_name(e.code)}, {"message", e.message}};
}

ErrorInfo error_info_from_json(const json& j) {
  const auto name = j.at("code").get<std::string>();
  for (auto code : all_error_codes()) {
    if (code_name(code) == name) return ErrorInfo{code, j.value("message", std::string{})};
  }
  return ErrorInfo{ErrorCode::kInternal, j.value("message", std::string{})};
}

}  // namespace twai
