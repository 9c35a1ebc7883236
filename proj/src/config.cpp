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

#include "twai/config.hpp"

#include <cstdlib>

#include "twai/errors.hpp"

namespace twai {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

}  // namespace

void apply_config_json(AppConfig& config, const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be a JSON object");
  try {
    if (doc.contains("workspace")) config.workspace = resolve(base_dir, doc["workspace"]);
    if (doc.contains("host")) config.host = doc["host"].get<std::string>();
    if (doc.contains("port")) config.port = doc["port"].get<int>();
    if (doc.contains("providers")) config.providers_file = resolve(base_dir, doc["providers"]);
    if (doc.contains("search_fixture")) {
      config.search_fixture = resolve(base_dir, doc["search_fixture"]);
    }
    if (doc.contains("search_url")) config.search_url = doc["search_url"].get<std::string>();
    if (doc.contains("metrics")) config.metrics_file = resolve(base_dir, doc["metrics"]);
    if (doc.contains("stopwords")) config.stopwords_file = resolve(base_dir, doc["stopwords"]);
    if (doc.contains("hedges")) config.hedges_file = resolve(base_dir, doc["hedges"]);
    if (doc.contains("timeout_ms")) {
      config.provider_timeout = std::chrono::milliseconds(doc["timeout_ms"].get<long long>());
    }
    auto& wb = config.workbench;
    if (doc.contains("thresholds")) {
      const auto& t = doc["thresholds"];
      wb.source.citation_threshold = t.value("source_citation", wb.source.citation_threshold);
      wb.source.pass_threshold = t.value("source_pass", wb.source.pass_threshold);
      wb.source.max_chunk_tokens = t.value("chunk_tokens", wb.source.max_chunk_tokens);
      wb.source.overlap_tokens = t.value("chunk_overlap", wb.source.overlap_tokens);
      wb.source.top_k = t.value("top_k", wb.source.top_k);
      wb.double_check.support_threshold =
          t.value("double_check_support", wb.double_check.support_threshold);
      wb.double_check.pass_threshold = t.value("double_check_pass", wb.double_check.pass_threshold);
      wb.compare.cluster_threshold = t.value("cluster", wb.compare.cluster_threshold);
      wb.compare.pass_threshold = t.value("compare_pass", wb.compare.pass_threshold);
      wb.compare.min_support = t.value("min_support", wb.compare.min_support);
    }
    if (doc.contains("weights")) wb.weights = decision::weights_from_json(doc["weights"]);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("bad config value: ") + e.what());
  }
  config.workbench.weights.validate();
}

void apply_config_file(AppConfig& config, const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidConfig, path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  apply_config_json(config, doc, path.parent_path());
}

void apply_environment(AppConfig& config,
                       const std::function<const char*(const char*)>& getenv_fn) {
  auto get = [&](const char* name) -> std::optional<std::string> {
    const char* v = getenv_fn(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  };
  if (auto v = get("TWAI_WORKSPACE")) config.workspace = *v;
  if (auto v = get("TWAI_PORT")) {
    try {
      config.port = std::stoi(*v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidConfig, "TWAI_PORT must be an integer");
    }
  }
  if (auto v = get("TWAI_PROVIDERS")) config.providers_file = *v;
  if (auto v = get("TWAI_SEARCH_FIXTURE")) config.search_fixture = *v;
}

Runtime::Runtime(const AppConfig& config, store::Store::Access access)
    : config_(config), providers_(config.provider_timeout) {
  if (config_.stopwords_file || config_.hedges_file) {
    const auto& defaults = text::Lexicon::defaults();
    auto stopwords = config_.stopwords_file
                         ? text::Lexicon::parse_list(read_file(*config_.stopwords_file))
                         : defaults.stopwords();
    auto hedges = config_.hedges_file ? text::Lexicon::parse_list(read_file(*config_.hedges_file))
                                      : defaults.hedges();
    config_.workbench.lexicon =
        std::make_shared<const text::Lexicon>(std::move(stopwords), std::move(hedges));
  }

  if (config_.providers_file) {
    const auto base = config_.providers_file->parent_path();
    for (const auto& spec : ProviderRegistry::load_specs(*config_.providers_file)) {
      providers_.register_provider(spec, base);
    }
  } else {
    providers_.register_provider(ProviderSpec{"mock-a", "Mock A", ProviderKind::kMock, {}});
    providers_.register_provider(ProviderSpec{"mock-b", "Mock B", ProviderKind::kMock, {}});
  }

  std::shared_ptr<double_check::SearchClient> search;
  if (config_.search_url) {
    search = std::make_shared<double_check::HttpSearchClient>(*config_.search_url,
                                                              config_.provider_timeout);
  } else if (config_.search_fixture) {
    search = std::make_shared<double_check::FixtureSearchClient>(
        double_check::FixtureSearchClient::from_file(*config_.search_fixture));
  } else {
    search = std::make_shared<double_check::FixtureSearchClient>();
  }

  MetricsPanel metrics;
  if (config_.metrics_file) metrics = MetricsPanel::from_file(*config_.metrics_file);

  store_ = std::make_unique<store::Store>(config_.workspace, access);
  workbench_ = std::make_unique<Workbench>(*store_, providers_, std::move(search),
                                           config_.workbench, std::move(metrics));
}

}  // namespace twai
