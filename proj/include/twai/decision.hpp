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
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "twai/util.hpp"

// Decision support: weighted reliability scores over the three verification
// criteria and the ranked table built from them.
namespace twai::decision {

enum class Criterion { kSource = 0, kDoubleCheck = 1, kCompare = 2 };
inline constexpr std::array<Criterion, 3> kCriteria = {Criterion::kSource,
                                                       Criterion::kDoubleCheck,
                                                       Criterion::kCompare};

std::string_view to_string(Criterion c);
Criterion parse_criterion(std::string_view s);

struct CriterionResult {
  Criterion criterion = Criterion::kSource;
  double coverage = 0.0;
  bool passed = false;
  /// False when the verification was never run; coverage then counts as 0.
  bool evaluated = false;

  friend bool operator==(const CriterionResult&, const CriterionResult&) = default;
};

/// Indexed by Criterion.
using CriterionSet = std::array<CriterionResult, 3>;

CriterionSet unevaluated();

struct Weights {
  double source = 0.5;
  double double_check = 0.3;
  double compare = 0.2;

  double of(Criterion c) const;
  /// Throws kInvalidWeights unless all weights are positive and sum to 1 within 1e-9.
  void validate() const;
};

struct ReliabilityScore {
  struct Component {
    Criterion criterion;
    double weight;
    double coverage;
  };

  double value = 0.0;
  std::array<Component, 3> breakdown{};
  /// Passed on all three criteria.
  bool fully_verified = false;
};

ReliabilityScore score_response(const CriterionSet& results, const Weights& weights);

struct Candidate {
  std::string response_id;
  std::string provider_id;
  CriterionSet results = unevaluated();
};

struct DecisionRow {
  std::size_t rank = 0;
  std::string response_id;
  std::string provider_id;
  ReliabilityScore score;
  CriterionSet results;
};

struct DecisionTable {
  std::string session_id;
  std::vector<DecisionRow> rows;
  Timestamp generated_at{};

  bool contains(std::string_view response_id) const;
};

/// Strict weak order: fully_verified first, then value desc, provider_id asc,
/// response_id asc.
bool ranks_before(const DecisionRow& a, const DecisionRow& b);

/// Candidates without any evaluated criterion are left out. Ranks are 1..n.
DecisionTable build_table(const std::string& session_id, const std::vector<Candidate>& candidates,
                          const Weights& weights, Timestamp generated_at);

struct DecisionRecord {
  std::string id;
  std::string session_id;
  std::string chosen_response_id;
  std::string rationale;
  Timestamp decided_at{};

  friend bool operator==(const DecisionRecord&, const DecisionRecord&) = default;
};

/// Fixed-width plain-text rendering for reports.
std::string render_text(const DecisionTable& table);

nlohmann::json to_json(const Weights& w);
Weights weights_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DecisionTable& table);
nlohmann::json to_json(const DecisionRecord& record);
DecisionRecord decision_record_from_json(const nlohmann::json& j);

}  // namespace twai::decision
