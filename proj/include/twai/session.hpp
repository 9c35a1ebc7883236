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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "twai/compare.hpp"
#include "twai/decision.hpp"
#include "twai/double_check.hpp"
#include "twai/provider.hpp"
#include "twai/source.hpp"
#include "twai/text.hpp"
#include "twai/util.hpp"

namespace twai {

enum class Mode { kGeneration, kVerification, kDecision };

std::string_view to_string(Mode m);
/// Throws kInvalidMode.
Mode parse_mode(std::string_view s);

struct Turn {
  std::string id;
  std::string session_id;
  std::size_t index = 0;
  std::string prompt_text;
  /// "prompt" for submit_prompt, "compare" for turns created by a compare run.
  std::string origin = "prompt";
  std::vector<std::string> provider_ids;
  std::vector<GenerationResponse> responses;
  /// Keyed by response id; segmented when the turn is created.
  std::map<std::string, std::vector<text::Claim>> claims;
  std::vector<compare::ProviderFailure> errors;
  Timestamp created_at{};
};

struct PromptTemplate {
  std::string id;
  std::string label;
  std::string body;
  Timestamp created_at{};
};

struct Bookmark {
  std::string id;
  std::string label;
  std::string response_id;
  Timestamp created_at{};
};

struct Library {
  std::vector<PromptTemplate> templates;
  std::vector<Bookmark> bookmarks;
};

using VerificationResult =
    std::variant<source::SourceVerification, double_check::DoubleCheckReport, compare::CompareReport>;

struct VerificationArtifact {
  std::string id;
  std::string session_id;
  decision::Criterion criterion = decision::Criterion::kSource;
  /// Responses this artifact scores.
  std::vector<std::string> response_ids;
  Timestamp created_at{};
  VerificationResult result;

  /// Coverage and pass flag for one of response_ids.
  decision::CriterionResult criterion_result(const std::string& response_id) const;
};

struct Session {
  std::string id;
  std::string title;
  Mode mode = Mode::kGeneration;
  Timestamp created_at{};
  std::vector<Turn> turns;
  Library library;
  std::vector<VerificationArtifact> verifications;
  std::vector<decision::DecisionRecord> decisions;

  std::size_t response_count() const;
  const GenerationResponse* find_response(std::string_view response_id) const;
  const std::vector<text::Claim>* claims_for(std::string_view response_id) const;
};

/// Entering verification needs a response, entering decision needs a
/// recorded verification, generation is always reachable.
/// Throws kNoResponses / kNoVerifications.
void check_transition(const Session& session, Mode target);

struct Metric {
  std::string name;
  double value = 0.0;
  std::string unit;
  std::string as_of;
};

/// Read-only service metrics shown beside the prompt library.
class MetricsPanel {
 public:
  MetricsPanel() = default;
  explicit MetricsPanel(std::vector<Metric> metrics) : metrics_(std::move(metrics)) {}

  /// {metric_name: {value, unit, as_of}}
  static MetricsPanel from_json(const nlohmann::json& doc);
  static MetricsPanel from_file(const std::filesystem::path& path);

  const std::vector<Metric>& metrics() const { return metrics_; }
  nlohmann::json to_json() const;

 private:
  std::vector<Metric> metrics_;
};

/// Static help document for a mode.
std::string_view help_text(Mode mode);

nlohmann::json to_json(const Turn& t);
Turn turn_from_json(const nlohmann::json& j);
nlohmann::json to_json(const text::Claim& c);
text::Claim claim_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Library& l);
Library library_from_json(const nlohmann::json& j);
nlohmann::json to_json(const VerificationArtifact& v);
VerificationArtifact verification_from_json(const nlohmann::json& j);
/// Header fields plus library; turns, verifications and decisions are stored
/// as their own records.
nlohmann::json session_header_json(const Session& s);
nlohmann::json to_json(const Session& s);

}  // namespace twai
