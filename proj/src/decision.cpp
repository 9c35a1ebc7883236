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

#include "twai/decision.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "twai/errors.hpp"

namespace twai::decision {

using nlohmann::json;

std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::kSource: return "source";
    case Criterion::kDoubleCheck: return "double_check";
    case Criterion::kCompare: return "compare";
  }
  return "source";
}

Criterion parse_criterion(std::string_view s) {
  for (auto c : kCriteria) {
    if (to_string(c) == s) return c;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown criterion '" + std::string(s) + "'");
}

CriterionSet unevaluated() {
  CriterionSet set;
  for (auto c : kCriteria) set[static_cast<std::size_t>(c)] = CriterionResult{c, 0.0, false, false};
  return set;
}

double Weights::of(Criterion c) const {
  switch (c) {
    case Criterion::kSource: return source;
    case Criterion::kDoubleCheck: return double_check;
    case Criterion::kCompare: return compare;
  }
  return 0.0;
}

void Weights::validate() const {
  for (auto c : kCriteria) {
    const double w = of(c);
    if (!std::isfinite(w) || w <= 0.0) {
      throw Error(ErrorCode::kInvalidWeights,
                  "weight for " + std::string(to_string(c)) + " must be positive");
    }
  }
  if (std::abs(source + double_check + compare - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidWeights, "weights must sum to 1");
  }
}

ReliabilityScore score_response(const CriterionSet& results, const Weights& weights) {
  weights.validate();
  ReliabilityScore score;
  score.fully_verified = true;
  for (auto c : kCriteria) {
    const auto& r = results[static_cast<std::size_t>(c)];
    const double coverage = r.evaluated ? std::clamp(r.coverage, 0.0, 1.0) : 0.0;
    score.breakdown[static_cast<std::size_t>(c)] = {c, weights.of(c), coverage};
    score.value += weights.of(c) * coverage;
    score.fully_verified = score.fully_verified && r.evaluated && r.passed;
  }
  score.value = std::clamp(score.value, 0.0, 1.0);
  return score;
}

bool DecisionTable::contains(std::string_view response_id) const {
  return std::any_of(rows.begin(), rows.end(),
                     [&](const auto& r) { return r.response_id == response_id; });
}

bool ranks_before(const DecisionRow& a, const DecisionRow& b) {
  if (a.score.fully_verified != b.score.fully_verified) return a.score.fully_verified;
  if (a.score.value != b.score.value) return a.score.value > b.score.value;
  if (a.provider_id != b.provider_id) return a.provider_id < b.provider_id;
  return a.response_id < b.response_id;
}

DecisionTable build_table(const std::string& session_id, const std::vector<Candidate>& candidates,
                          const Weights& weights, Timestamp generated_at) {
  weights.validate();
  DecisionTable table{session_id, {}, generated_at};
  for (const auto& c : candidates) {
    const bool any = std::any_of(c.results.begin(), c.results.end(),
                                 [](const auto& r) { return r.evaluated; });
    if (!any) continue;
    table.rows.push_back(
        DecisionRow{0, c.response_id, c.provider_id, score_response(c.results, weights), c.results});
  }
  std::sort(table.rows.begin(), table.rows.end(), ranks_before);
  for (std::size_t i = 0; i < table.rows.size(); ++i) table.rows[i].rank = i + 1;
  return table;
}

std::string render_text(const DecisionTable& table) {
  auto cell = [](const CriterionResult& r) -> std::string {
    if (!r.evaluated) return "-";
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f%s", r.coverage, r.passed ? "*" : "");
    return buf;
  };
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-4s %-16s %-20s %-7s %-8s %-13s %-8s %s\n", "rank",
                "provider", "response", "score", "source", "double_check", "compare", "verified");
  out += line;
  for (const auto& row : table.rows) {
    std::snprintf(line, sizeof(line), "%-4zu %-16s %-20s %-7.3f %-8s %-13s %-8s %s\n", row.rank,
                  row.provider_id.c_str(), row.response_id.c_str(), row.score.value,
                  cell(row.results[0]).c_str(), cell(row.results[1]).c_str(),
                  cell(row.results[2]).c_str(), row.score.fully_verified ? "yes" : "no");
    out += line;
  }
  return out;
}

json to_json(const Weights& w) {
  return json{{"source", w.source}, {"double_check", w.double_check}, {"compare", w.compare}};
}

Weights weights_from_json(const json& j) {
  Weights w;
  w.source = j.value("source", w.source);
  w.double_check = j.value("double_check", w.double_check);
  w.compare = j.value("compare", w.compare);
  return w;
}

json to_json(const DecisionTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows) {
    json criteria = json::object();
    json breakdown = json::array();
    for (auto c : kCriteria) {
      const auto& res = r.results[static_cast<std::size_t>(c)];
      criteria[std::string(to_string(c))] = {
          {"coverage", res.coverage}, {"passed", res.passed}, {"evaluated", res.evaluated}};
      const auto& b = r.score.breakdown[static_cast<std::size_t>(c)];
      breakdown.push_back(
          {{"criterion", to_string(c)}, {"weight", b.weight}, {"coverage", b.coverage}});
    }
    rows.push_back({{"rank", r.rank},
                    {"response_id", r.response_id},
                    {"provider_id", r.provider_id},
                    {"score", r.score.value},
                    {"fully_verified", r.score.fully_verified},
                    {"breakdown", breakdown},
                    {"criteria", criteria}});
  }
  return json{{"session_id", table.session_id},
              {"rows", rows},
              {"generated_at", format_timestamp(table.generated_at)}};
}

json to_json(const DecisionRecord& record) {
  return json{{"id", record.id},
              {"session_id", record.session_id},
              {"chosen_response_id", record.chosen_response_id},
              {"rationale", record.rationale},
              {"decided_at", format_timestamp(record.decided_at)}};
}

DecisionRecord decision_record_from_json(const json& j) {
  return DecisionRecord{j.at("id").get<std::string>(), j.at("session_id").get<std::string>(),
                        j.at("chosen_response_id").get<std::string>(),
                        j.at("rationale").get<std::string>(),
                        parse_timestamp(j.at("decided_at").get<std::string>())};
}

}  // namespace twai::decision
