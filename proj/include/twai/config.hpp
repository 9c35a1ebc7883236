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
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "twai/provider.hpp"
#include "twai/store.hpp"
#include "twai/workbench.hpp"

namespace twai {

/// Runtime settings shared by the CLI and the HTTP service. Precedence is
/// flags > environment > config file > defaults.
struct AppConfig {
  std::filesystem::path workspace = ".twai";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::optional<std::filesystem::path> providers_file;
  std::optional<std::filesystem::path> search_fixture;
  std::optional<std::string> search_url;
  std::optional<std::filesystem::path> metrics_file;
  std::optional<std::filesystem::path> stopwords_file;
  std::optional<std::filesystem::path> hedges_file;
  std::chrono::milliseconds provider_timeout = ProviderRegistry::kDefaultTimeout;
  WorkbenchConfig workbench;
};

/// Reads a JSON config file. Relative paths inside it resolve against the
/// file's directory. Recognised keys: workspace, host, port, providers,
/// search_fixture, search_url, metrics, stopwords, hedges, timeout_ms,
/// thresholds {source_citation, source_pass, double_check_support,
/// double_check_pass, cluster, compare_pass, min_support, chunk_tokens,
/// chunk_overlap, top_k}, weights {source, double_check, compare}.
void apply_config_file(AppConfig& config, const std::filesystem::path& path);
void apply_config_json(AppConfig& config, const nlohmann::json& doc,
                       const std::filesystem::path& base_dir);

/// Applies TWAI_WORKSPACE, TWAI_PORT, TWAI_PROVIDERS, TWAI_SEARCH_FIXTURE.
void apply_environment(AppConfig& config,
                       const std::function<const char*(const char*)>& getenv_fn);

/// Everything a CLI invocation or server needs, built from an AppConfig.
class Runtime {
 public:
  Runtime(const AppConfig& config, store::Store::Access access = store::Store::Access::kReadWrite);

  Workbench& workbench() { return *workbench_; }
  ProviderRegistry& providers() { return providers_; }
  store::Store& store() { return *store_; }
  const AppConfig& config() const { return config_; }

 private:
  AppConfig config_;
  std::unique_ptr<store::Store> store_;
  ProviderRegistry providers_;
  std::unique_ptr<Workbench> workbench_;
};

}  // namespace twai
