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
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "twai/text.hpp"

// Web-grounded verification: every checkable claim is searched and compared
// against result snippets, producing a blue / red / no highlight.
namespace twai::double_check {

struct SearchHit {
  std::string url;
  std::string title;
  std::string snippet;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

class SearchClient {
 public:
  virtual ~SearchClient() = default;
  /// Throws kEmptyQuery for a blank query, kSearchUnavailable when the
  /// backend cannot be reached.
  virtual std::vector<SearchHit> search(const std::string& query) = 0;
};

/// Hits keyed by exact query string; unknown queries return no hits.
class FixtureSearchClient : public SearchClient {
 public:
  FixtureSearchClient() = default;
  explicit FixtureSearchClient(std::map<std::string, std::vector<SearchHit>> table)
      : table_(std::move(table)) {}

  /// {query: [{url, title, snippet}, ...]}
  static FixtureSearchClient from_json(const nlohmann::json& doc);
  static FixtureSearchClient from_file(const std::filesystem::path& path);

  std::vector<SearchHit> search(const std::string& query) override;

 private:
  std::map<std::string, std::vector<SearchHit>> table_;
};

/// GET <url>?q=<query> returning a JSON array of {url, title, snippet}.
class HttpSearchClient : public SearchClient {
 public:
  HttpSearchClient(std::string url, std::chrono::milliseconds timeout);
  std::vector<SearchHit> search(const std::string& query) override;

 private:
  std::string url_;
  std::chrono::milliseconds timeout_;
};

enum class Status { kSupported, kUnsupported, kNotApplicable };
enum class Color { kBlue, kRed, kNone };

std::string_view to_string(Status s);
std::string_view to_string(Color c);
Status parse_status(std::string_view s);
Color color_for(Status s);

struct ClaimHighlight {
  std::string claim_id;
  Status status = Status::kNotApplicable;
  Color color = Color::kNone;
  std::vector<SearchHit> evidence;
  std::string recommended_query;
  double best_similarity = 0.0;
};

/// status <-> color <-> payload equivalences.
bool highlight_consistent(const ClaimHighlight& h);

struct DoubleCheckConfig {
  /// tau_dc
  double support_threshold = 0.5;
  /// theta_dc_pass
  double pass_threshold = 0.8;
};

struct DoubleCheckReport {
  std::string response_id;
  std::vector<ClaimHighlight> highlights;
  std::size_t checkable_claims = 0;
  std::size_t supported_claims = 0;
  double coverage = 0.0;
  bool passed = false;
  /// One entry per claim whose search failed.
  std::vector<std::string> warnings;
};

/// One highlight per claim, in claim order. Searches run concurrently.
DoubleCheckReport double_check(const std::string& response_id,
                               const std::vector<text::Claim>& claims, SearchClient& client,
                               const DoubleCheckConfig& config = {});

/// Guidance text for the report, mirroring what the highlights show.
std::string guidance_message(const DoubleCheckReport& report);

nlohmann::json to_json(const SearchHit& hit);
SearchHit search_hit_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DoubleCheckReport& report);
DoubleCheckReport double_check_report_from_json(const nlohmann::json& j);

}  // namespace twai::double_check
