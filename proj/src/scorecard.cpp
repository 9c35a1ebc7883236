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

#include "twai/scorecard.hpp"

#include <algorithm>
#include <set>

#include "twai/errors.hpp"

namespace twai::scorecard {

using nlohmann::json;

const std::array<TrustItem, 6>& trust_items() {
  static const std::array<TrustItem, 6> items = {{
      {Item::kEfficiency, "efficiency", "A",
       "[The AI feature] will help me do my job more efficiently and effectively.", true},
      {Item::kUsageUnderstanding, "usage_understanding", "B",
       "I understand how and when to use [the AI feature].", true},
      {Item::kControl, "control", "C", "I have control using [the AI feature].", true},
      {Item::kConfidence, "confidence", "D", "I am confident in the results made by [the AI feature].",
       true},
      {Item::kTrust, "trust", "E", "I trust the results made by [the AI feature].", true},
      {Item::kSatisfaction, "satisfaction", "",
       "Overall, how satisfied are you with using [the AI feature]?", false},
  }};
  return items;
}

std::string_view to_string(Item item) {
  return trust_items()[static_cast<std::size_t>(item)].key;
}

Item parse_item(std::string_view key) {
  for (const auto& item : trust_items()) {
    if (item.key == key || (!item.letter.empty() && item.letter == key)) return item.id;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown trust item '" + std::string(key) + "'");
}

std::string_view to_string(Rating r) {
  switch (r) {
    case Rating::kGood: return "good";
    case Rating::kOkay: return "okay";
    case Rating::kNeedsImprovement: return "needs_improvement";
  }
  return "okay";
}

Rating parse_rating(std::string_view s) {
  if (s == "good") return Rating::kGood;
  if (s == "okay") return Rating::kOkay;
  if (s == "needs_improvement") return Rating::kNeedsImprovement;
  throw Error(ErrorCode::kInvalidArgument, "unknown rating '" + std::string(s) + "'");
}

int points(Rating r) {
  switch (r) {
    case Rating::kGood: return 1;
    case Rating::kOkay: return 0;
    case Rating::kNeedsImprovement: return -1;
  }
  return 0;
}

const ScorecardEntry& Scorecard::record(ScorecardEntry entry) {
  for (const auto& item : trust_items()) {
    if (!entry.ratings.contains(item.id)) {
      throw Error(ErrorCode::kIncompleteRatings,
                  "entry by '" + entry.rater_id + "' is missing '" + std::string(item.key) + "'");
    }
  }
  std::lock_guard lock(mutex_);
  for (const auto& e : entries_) {
    if (e.rater_id == entry.rater_id && e.tool_id == entry.tool_id) {
      throw Error(ErrorCode::kDuplicateEntry,
                  "'" + entry.rater_id + "' already rated '" + entry.tool_id + "'");
    }
  }
  entries_.push_back(std::move(entry));
  return entries_.back();
}

TrustReport aggregate(const std::vector<ScorecardEntry>& entries, const std::string& tool_id) {
  TrustReport report;
  report.tool_id = tool_id;
  std::map<Item, long> item_sums;
  long total = 0;
  long satisfaction = 0;
  for (const auto& e : entries) {
    if (e.tool_id != tool_id) continue;
    ++report.n_raters;
    for (auto item : kScoredItems) {
      const int p = points(e.ratings.at(item));
      item_sums[item] += p;
      total += p;
    }
    satisfaction += points(e.ratings.at(Item::kSatisfaction));
  }
  if (report.n_raters == 0) {
    throw Error(ErrorCode::kNoEntries, "no scorecard entries for '" + tool_id + "'");
  }
  const auto n = static_cast<double>(report.n_raters);
  for (auto item : kScoredItems) report.per_item_mean[item] = static_cast<double>(item_sums[item]) / n;
  report.overall_mean_of_sums = static_cast<double>(total) / n;
  report.satisfaction_mean = static_cast<double>(satisfaction) / n;
  return report;
}

TrustReport Scorecard::aggregate(const std::string& tool_id) const {
  std::lock_guard lock(mutex_);
  return scorecard::aggregate(entries_, tool_id);
}

ToolComparison Scorecard::compare_tools(const std::string& tool_a, const std::string& tool_b) const {
  const auto a = aggregate(tool_a);
  const auto b = aggregate(tool_b);
  ToolComparison out{tool_a, tool_b, {}, b.overall_mean_of_sums - a.overall_mean_of_sums,
                     b.satisfaction_mean - a.satisfaction_mean};
  for (auto item : kScoredItems) {
    out.per_item_delta[item] = b.per_item_mean.at(item) - a.per_item_mean.at(item);
  }
  return out;
}

std::vector<ScorecardEntry> Scorecard::entries() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

std::vector<std::string> Scorecard::tools() const {
  std::lock_guard lock(mutex_);
  std::set<std::string> tools;
  for (const auto& e : entries_) tools.insert(e.tool_id);
  return {tools.begin(), tools.end()};
}

// --- delimited rows ------------------------------------------------------------

namespace {

std::string quote(const std::string& field, char delimiter) {
  if (field.find_first_of(std::string{delimiter, '"', '\n', '\r'}) == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> parse_rows(std::string_view s, char delimiter) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (quoted) {
      if (c == '"' && i + 1 < s.size() && s[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == delimiter) {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorCode::kInvalidArgument, "unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string export_rows(const std::vector<ScorecardEntry>& entries, char delimiter) {
  std::string out = "rater_id";
  out += delimiter;
  out += "tool_id";
  for (const auto& item : trust_items()) {
    out += delimiter;
    out += item.key;
  }
  out += delimiter;
  out += "recorded_at\n";
  for (const auto& e : entries) {
    out += quote(e.rater_id, delimiter);
    out += delimiter;
    out += quote(e.tool_id, delimiter);
    for (const auto& item : trust_items()) {
      out += delimiter;
      out += to_string(e.ratings.at(item.id));
    }
    out += delimiter;
    out += format_timestamp(e.recorded_at);
    out += '\n';
  }
  return out;
}

std::vector<ScorecardEntry> import_rows(std::string_view contents, char delimiter) {
  std::vector<ScorecardEntry> out;
  std::size_t line = 0;
  for (const auto& row : parse_rows(contents, delimiter)) {
    ++line;
    if (!row.empty() && row[0] == "rater_id") continue;
    if (row.size() < 8) {
      throw Error(ErrorCode::kIncompleteRatings,
                  "row " + std::to_string(line) + " has " + std::to_string(row.size()) +
                      " fields, expected 8 or 9");
    }
    if (row.size() > 9) {
      throw Error(ErrorCode::kInvalidArgument, "row " + std::to_string(line) + " has extra fields");
    }
    ScorecardEntry e;
    e.rater_id = row[0];
    e.tool_id = row[1];
    for (std::size_t i = 0; i < trust_items().size(); ++i) {
      e.ratings[trust_items()[i].id] = parse_rating(row[2 + i]);
    }
    e.recorded_at = row.size() == 9 && !row[8].empty() ? parse_timestamp(row[8]) : now_utc();
    out.push_back(std::move(e));
  }
  return out;
}

json to_json(const ScorecardEntry& e) {
  json ratings = json::object();
  for (const auto& [item, rating] : e.ratings) ratings[std::string(to_string(item))] = to_string(rating);
  return json{{"rater_id", e.rater_id},
              {"tool_id", e.tool_id},
              {"ratings", ratings},
              {"recorded_at", format_timestamp(e.recorded_at)}};
}

ScorecardEntry scorecard_entry_from_json(const json& j) {
  ScorecardEntry e;
  e.rater_id = j.at("rater_id").get<std::string>();
  e.tool_id = j.at("tool_id").get<std::string>();
  for (const auto& [key, value] : j.at("ratings").items()) {
    e.ratings[parse_item(key)] = parse_rating(value.get<std::string>());
  }
  e.recorded_at = j.contains("recorded_at")
                      ? parse_timestamp(j.at("recorded_at").get<std::string>())
                      : now_utc();
  return e;
}

json to_json(const TrustReport& r) {
  json items = json::object();
  for (const auto& [item, mean] : r.per_item_mean) items[std::string(to_string(item))] = mean;
  return json{{"tool_id", r.tool_id},
              {"n_raters", r.n_raters},
              {"per_item_mean", items},
              {"overall_mean_of_sums", r.overall_mean_of_sums},
              {"satisfaction_mean", r.satisfaction_mean}};
}

json to_json(const ToolComparison& c) {
  json items = json::object();
  for (const auto& [item, d] : c.per_item_delta) items[std::string(to_string(item))] = d;
  return json{{"tool_a", c.tool_a},
              {"tool_b", c.tool_b},
              {"per_item_delta", items},
              {"overall_delta", c.overall_delta},
              {"satisfaction_delta", c.satisfaction_delta}};
}

}  // namespace twai::scorecard
