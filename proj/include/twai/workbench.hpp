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
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "twai/compare.hpp"
#include "twai/decision.hpp"
#include "twai/double_check.hpp"
#include "twai/provider.hpp"
#include "twai/scorecard.hpp"
#include "twai/session.hpp"
#include "twai/source.hpp"
#include "twai/store.hpp"
#include "twai/text.hpp"

namespace twai {

struct WorkbenchConfig {
  source::SourceConfig source;
  double_check::DoubleCheckConfig double_check;
  compare::CompareConfig compare;
  decision::Weights weights;
  std::shared_ptr<const text::Lexicon> lexicon;
};

struct SessionSummary {
  std::string id;
  std::string title;
  Mode mode = Mode::kGeneration;
  Timestamp created_at{};
  std::size_t turns = 0;
  std::size_t verifications = 0;
  std::size_t decisions = 0;
};

/// The generate / verify / decide loop over persisted sessions. Operations on
/// one session are serialized; distinct sessions proceed independently.
class Workbench {
 public:
  /// Loads every session, corpus document and scorecard entry from the store.
  Workbench(store::Store& store, ProviderRegistry& providers,
            std::shared_ptr<double_check::SearchClient> search, WorkbenchConfig config = {},
            MetricsPanel metrics = {});

  // Generation mode.
  Session create_session(const std::string& title);
  std::vector<SessionSummary> list_sessions() const;
  /// Snapshot copy. Throws kSessionNotFound.
  Session session(const std::string& session_id) const;
  /// Requires generation mode. Throws kWrongMode, kEmptyPrompt, kSessionNotFound.
  Turn submit_prompt(const std::string& session_id, const std::string& prompt,
                     const std::vector<std::string>& provider_ids);
  Session switch_mode(const std::string& session_id, Mode target);

  Library library(const std::string& session_id) const;
  Library add_template(const std::string& session_id, const std::string& label,
                       const std::string& body);
  Library remove_template(const std::string& session_id, const std::string& template_id);
  /// Throws kUnknownResponse when the response is not in the session.
  Library add_bookmark(const std::string& session_id, const std::string& response_id,
                       const std::string& label);
  Library remove_bookmark(const std::string& session_id, const std::string& bookmark_id);

  // Verification mode.
  source::SourceVerification verify_source(const std::string& session_id,
                                           const std::string& response_id);
  double_check::DoubleCheckReport double_check(const std::string& session_id,
                                               const std::string& response_id);
  /// Fans the prompt out, records the answers as a new turn and the report as
  /// a verification. Allowed in generation and verification mode.
  compare::CompareReport run_compare(const std::string& session_id, const std::string& prompt,
                                     const std::vector<std::string>& provider_ids);
  /// Compares the responses of an existing turn without generating again.
  compare::CompareReport compare_turn(const std::string& session_id, std::size_t turn_index);

  // Decision mode.
  /// Throws kNoVerifications.
  decision::DecisionTable decision_table(const std::string& session_id) const;
  /// Requires decision mode; the response must appear in the current table.
  decision::DecisionRecord record_decision(const std::string& session_id,
                                           const std::string& response_id,
                                           const std::string& rationale);

  // Corpus.
  std::size_t ingest(source::CorpusDocument doc);
  const source::SourceIndex& corpus() const { return index_; }
  std::string source_guidance(const source::SourceVerification& v) const {
    return index_.guidance_message(v);
  }

  // Scorecard.
  scorecard::ScorecardEntry record_scorecard(scorecard::ScorecardEntry entry);
  scorecard::TrustReport aggregate_scorecard(const std::string& tool_id) const;
  scorecard::ToolComparison compare_tools(const std::string& tool_a,
                                          const std::string& tool_b) const;
  std::vector<scorecard::ScorecardEntry> scorecard_entries() const { return scorecard_.entries(); }

  // Archives.
  store::SessionArchive export_archive(const std::string& session_id) const;
  std::string import_archive(const store::SessionArchive& archive);

  const MetricsPanel& metrics() const { return metrics_; }
  ProviderRegistry& providers() { return providers_; }
  const WorkbenchConfig& config() const { return config_; }

 private:
  struct Slot {
    mutable std::mutex mutex;
    Session session;
  };

  std::shared_ptr<Slot> slot(const std::string& session_id) const;
  void load_session(const std::string& session_id);
  void persist_header(const Session& s);
  void persist_turn(const Turn& t);
  void persist_verification(const VerificationArtifact& v);
  Turn make_turn(const Session& s, const std::string& prompt,
                 const std::vector<std::string>& provider_ids,
                 const std::vector<ProviderOutcome>& outcomes, std::string origin);
  compare::CompareReport compare_responses(Session& s, const Turn& turn);
  const text::Lexicon& lexicon() const;

  store::Store& store_;
  ProviderRegistry& providers_;
  std::shared_ptr<double_check::SearchClient> search_;
  WorkbenchConfig config_;
  MetricsPanel metrics_;
  source::SourceIndex index_;
  scorecard::Scorecard scorecard_;
  mutable IdGenerator ids_;

  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
};

decision::DecisionTable build_decision_table(const Session& session,
                                             const decision::Weights& weights,
                                             Timestamp generated_at);

}  // namespace twai
