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

#include <array>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "twai/util.hpp"

// Enterprise AI trust scorecard: six items rated good / okay / needs
// improvement, scored +1 / 0 / -1. Items A-E are aggregated; satisfaction is
// captured and reported on its own.
namespace twai::scorecard {

enum class Item {
  kEfficiency,
  kUsageUnderstanding,
  kControl,
  kConfidence,
  kTrust,
  kSatisfaction,
};

struct TrustItem {
  Item id;
  std::string_view key;
  /// A-E for scored items, empty for satisfaction.
  std::string_view letter;
  std::string_view statement;
  bool scored;
};

const std::array<TrustItem, 6>& trust_items();
inline constexpr std::array<Item, 5> kScoredItems = {Item::kEfficiency, Item::kUsageUnderstanding,
                                                     Item::kControl, Item::kConfidence,
                                                     Item::kTrust};

std::string_view to_string(Item item);
Item parse_item(std::string_view key);

enum class Rating { kGood, kOkay, kNeedsImprovement };

std::string_view to_string(Rating r);
Rating parse_rating(std::string_view s);
/// good +1, okay 0, needs_improvement -1.
int points(Rating r);

struct ScorecardEntry {
  std::string rater_id;
  std::string tool_id;
  std::map<Item, Rating> ratings;
  Timestamp recorded_at{};

  friend bool operator==(const ScorecardEntry&, const ScorecardEntry&) = default;
};

struct TrustReport {
  std::string tool_id;
  std::size_t n_raters = 0;
  /// Scored items only, each in [-1, 1].
  std::map<Item, double> per_item_mean;
  /// Mean over raters of the A-E sum, in [-5, 5].
  double overall_mean_of_sums = 0.0;
  double satisfaction_mean = 0.0;
};

struct ToolComparison {
  std::string tool_a;
  std::string tool_b;
  /// report(b) - report(a)
  std::map<Item, double> per_item_delta;
  double overall_delta = 0.0;
  double satisfaction_delta = 0.0;
};

class Scorecard {
 public:
  /// Throws kIncompleteRatings unless all six items are rated, kDuplicateEntry
  /// if the rater already rated the tool.
  const ScorecardEntry& record(ScorecardEntry entry);
  /// Throws kNoEntries.
  TrustReport aggregate(const std::string& tool_id) const;
  ToolComparison compare_tools(const std::string& tool_a, const std::string& tool_b) const;

  std::vector<ScorecardEntry> entries() const;
  std::vector<std::string> tools() const;

 private:
  mutable std::mutex mutex_;
  std::vector<ScorecardEntry> entries_;
};

TrustReport aggregate(const std::vector<ScorecardEntry>& entries, const std::string& tool_id);

/// Header plus one row per entry:
/// rater_id, tool_id, the six ratings in item order, recorded_at.
std::string export_rows(const std::vector<ScorecardEntry>& entries, char delimiter = ',');
/// Accepts rows with or without the trailing recorded_at column; a header row
/// starting with "rater_id" is skipped.
std::vector<ScorecardEntry> import_rows(std::string_view contents, char delimiter = ',');

nlohmann::json to_json(const ScorecardEntry& e);
ScorecardEntry scorecard_entry_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TrustReport& r);
nlohmann::json to_json(const ToolComparison& c);

}  // namespace twai::scorecard
