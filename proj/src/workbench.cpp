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

#include "twai/workbench.hpp"

#include <algorithm>
#include <set>

#include "twai/errors.hpp"

namespace twai {

using nlohmann::json;
using store::RecordKind;
using store::StoreRecord;

namespace {

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; }

std::string scorecard_record_id(const scorecard::ScorecardEntry& e) {
  return e.tool_id + "|" + e.rater_id;
}

}  // namespace

Workbench::Workbench(store::Store& store, ProviderRegistry& providers,
                     std::shared_ptr<double_check::SearchClient> search, WorkbenchConfig config,
                     MetricsPanel metrics)
    : store_(store),
      providers_(providers),
      search_(std::move(search)),
      config_(std::move(config)),
      metrics_(std::move(metrics)),
      index_(config_.source) {
  config_.weights.validate();
  if (!search_) search_ = std::make_shared<double_check::FixtureSearchClient>();
  for (const auto& r : store_.all(RecordKind::kCorpusDoc)) {
    index_.ingest(source::corpus_document_from_json(r.payload));
  }
  for (const auto& r : store_.all(RecordKind::kScorecard)) {
    scorecard_.record(scorecard::scorecard_entry_from_json(r.payload));
  }
  for (const auto& r : store_.all(RecordKind::kSession)) load_session(r.id);
}

const text::Lexicon& Workbench::lexicon() const {
  return config_.lexicon ? *config_.lexicon : text::Lexicon::defaults();
}

void Workbench::load_session(const std::string& session_id) {
  const auto header = store_.load(RecordKind::kSession, session_id).payload;
  auto slot = std::make_shared<Slot>();
  auto& s = slot->session;
  s.id = header.at("id").get<std::string>();
  s.title = header.at("title").get<std::string>();
  s.mode = parse_mode(header.at("mode").get<std::string>());
  s.created_at = parse_timestamp(header.at("created_at").get<std::string>());
  s.library = library_from_json(header.at("library"));
  for (const auto& id : header.at("turn_ids")) {
    s.turns.push_back(turn_from_json(store_.load(RecordKind::kTurn, id.get<std::string>()).payload));
  }
  for (const auto& id : header.value("verification_ids", json::array())) {
    s.verifications.push_back(verification_from_json(
        store_.load(RecordKind::kVerification, id.get<std::string>()).payload));
  }
  for (const auto& id : header.value("decision_ids", json::array())) {
    s.decisions.push_back(decision::decision_record_from_json(
        store_.load(RecordKind::kDecision, id.get<std::string>()).payload));
  }
  std::unique_lock lock(sessions_mutex_);
  sessions_[s.id] = std::move(slot);
}

void Workbench::persist_header(const Session& s) {
  auto header = session_header_json(s);
  json verification_ids = json::array();
  for (const auto& v : s.verifications) verification_ids.push_back(v.id);
  json decision_ids = json::array();
  for (const auto& d : s.decisions) decision_ids.push_back(d.id);
  header["verification_ids"] = verification_ids;
  header["decision_ids"] = decision_ids;
  store_.save(StoreRecord{RecordKind::kSession, s.id, store::kSchemaVersion, std::move(header)});
}

void Workbench::persist_turn(const Turn& t) {
  store_.save(StoreRecord{RecordKind::kTurn, t.id, store::kSchemaVersion, to_json(t)});
}

void Workbench::persist_verification(const VerificationArtifact& v) {
  store_.save(StoreRecord{RecordKind::kVerification, v.id, store::kSchemaVersion, to_json(v)});
}

std::shared_ptr<Workbench::Slot> Workbench::slot(const std::string& session_id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kSessionNotFound, "session '" + session_id + "' not found");
  }
  return it->second;
}

// --- generation mode -------------------------------------------------------------

Session Workbench::create_session(const std::string& title) {
  auto slot = std::make_shared<Slot>();
  slot->session.id = ids_.next("ses");
  slot->session.title = title;
  slot->session.created_at = now_utc();
  persist_header(slot->session);
  std::unique_lock lock(sessions_mutex_);
  sessions_[slot->session.id] = slot;
  return slot->session;
}

std::vector<SessionSummary> Workbench::list_sessions() const {
  std::vector<std::shared_ptr<Slot>> slots;
  {
    std::shared_lock lock(sessions_mutex_);
    for (const auto& [id, s] : sessions_) slots.push_back(s);
  }
  std::vector<SessionSummary> out;
  for (const auto& slot : slots) {
    std::lock_guard lock(slot->mutex);
    const auto& s = slot->session;
    out.push_back(SessionSummary{s.id, s.title, s.mode, s.created_at, s.turns.size(),
                                 s.verifications.size(), s.decisions.size()});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.created_at != b.created_at ? a.created_at < b.created_at : a.id < b.id;
  });
  return out;
}

Session Workbench::session(const std::string& session_id) const {
  auto s = slot(session_id);
  std::lock_guard lock(s->mutex);
  return s->session;
}

Turn Workbench::make_turn(const Session& s, const std::string& prompt,
                          const std::vector<std::string>& provider_ids,
                          const std::vector<ProviderOutcome>& outcomes, std::string origin) {
  Turn turn;
  turn.id = ids_.next("trn");
  turn.session_id = s.id;
  turn.index = s.turns.size();
  turn.prompt_text = prompt;
  turn.origin = std::move(origin);
  turn.provider_ids = provider_ids;
  turn.created_at = now_utc();
  for (const auto& o : outcomes) {
    if (o.ok()) {
      turn.claims[o.response->id] = text::segment_claims(o.response->id, o.response->text, lexicon());
      turn.responses.push_back(*o.response);
    } else {
      turn.errors.push_back(compare::ProviderFailure{o.provider_id, *o.error});
    }
  }
  return turn;
}

namespace {

std::vector<HistoryTurn> history_of(const Session& s) {
  std::vector<HistoryTurn> history;
  for (const auto& t : s.turns) {
    if (!t.responses.empty()) history.push_back({t.prompt_text, t.responses.front().text});
  }
  return history;
}

void require_mode(const Session& s, std::initializer_list<Mode> allowed, std::string_view action) {
  if (std::find(allowed.begin(), allowed.end(), s.mode) != allowed.end()) return;
  throw Error(ErrorCode::kWrongMode, std::string(action) + " is not allowed in " +
                                         std::string(to_string(s.mode)) + " mode");
}

}  // namespace

Turn Workbench::submit_prompt(const std::string& session_id, const std::string& prompt,
                              const std::vector<std::string>& provider_ids) {
  auto slot = this->slot(session_id);
  std::lock_guard lock(slot->mutex);
  auto& s = slot->session;
  require_mode(s, {Mode::kGeneration}, "submitting a prompt");
  if (blank(prompt)) throw Error(ErrorCode::kEmptyPrompt, "prompt must not be empty");

  const auto outcomes = providers_.fan_out(prompt, provider_ids, history_of(s));
  auto turn = make_turn(s, prompt, provider_ids, outcomes, "prompt");
  if (turn.responses.empty()) {
    std::string msg = "every provider failed";
    for (const auto& e : turn.errors) msg += "; " + e.provider_id + ": " + e.error.message;
    throw Error(ErrorCode::kProviderUnavailable, msg);
  }
  persist_turn(turn);
  s.turns.push_back(turn);
  persist_header(s);
  return turn;
}

Session Workbench::switch_mode(const std::string& session_id, Mode target) {
  auto slot = this->slot(session_id);
  std::lock_guard lock(slot->mutex);
  auto& s = slot->session;
  check_transition(s, target);
  if (s.mode != target) {
    s.mode = target;
    persist_header(s);
  }
  return s;
}

Library Workbench::library(const std::string& session_id) const {
  auto slot = this->slot(session_id);
  std::lock_guard lock(slot->mutex);
  return slot->session.library;
}

Library Workbench::add_template(const std::string& session_id, const std::string& label,
                                const std::string& body) {
  if (blank(body)) throw Error(ErrorCode::kInvalidArgument, "template body must not be empty");
  auto slot = this->slot(session_id);
  std::lock_guard lock(slot->mutex);
  auto& s = slot->session;
  s.library.templates.push_back(PromptTemplate{ids_.next("tpl"), label, body, now_utc()});
  persist_header(s);
  return s.library;
}

Library Workbench::remove_template(const std::string& session_id, const std::string& template_id) {
  auto slot = this->slot(session_id);
  std::lock_guard lock(slot->mutex);
  auto& s = slot->session;
  auto& list = s.library.templates;
  auto it = std::find_if(list.begin(), list.end(), [&](const auto& t) { return t.id == template_id; });
  if (it == list.end()) {
    throw Error(ErrorCode::kUnknownTemplate, "template '" + template_id + "' not found");
  }
  list.erase(it);
  persist_header(s);
  return s.library;
}

Library Workbench::add_bookmark(const std::string& session_id, const std::string& response_id,
                                const std::string& label) {
  auto slot = this->slot(session_id);
  std::lock_guard lock(slot->mutex);
  auto& s = slot->session;
  if (s.find_response(response_id) == nullptr) {
    throw Error(ErrorCode::kUnknownResponse, "response '" + response_id + "' not in session");
  }
  s.library.bookmarks.push_back(Bookmark{ids_.next("bmk"), label, response_id, now_utc()});
  persist_header(s);
  return s.library;
}

Library Workbench::remove_bookmark(const std::string& session_id, const std::string& bookmark_id) {
  auto slot = this->slot(session_id);
  std::lock_guard lock(slot->mutex);
  auto& s = slot->session;
  auto& list = s.library.bookmarks;
  auto it = std::find_if(list.begin(), list.end(), [&](const auto& b) { return b.id == bookmark_id; });
  if (it == list.end()) {
    throw Error(ErrorCode::kUnknownResponse, "bookmark '" + bookmark_id + "' not found");
  }
  list.erase(it);
  persist_header(s);
  return s.library;
}

// --- verification mode -------------------------------------------------------------

source::SourceVerification Workbench::verify_source(const std::string& session_id,
                                                    const std::string& response_id) {
  auto slot = this->slot(session_id);
  std::lock_guard lock(slot->mutex);
  auto& s = slot->session;
  require_mode(s, {Mode::kVerification}, "source verification");
  const auto* claims = s.claims_for(response_id);
  if (claims == nullptr) {
    throw Error(ErrorCode::kUnknownResponse, "response '" + response_id + "' not in session");
  }
  auto result = index_.verify(response_id, *claims);
  VerificationArtifact artifact{ids_.next("ver"), s.id, decision::Criterion::kSource,
                                {response_id}, now_utc(), result};
  persist_verification(artifact);
  s.verifications.push_back(std::move(artifact));
  persist_header(s);
  return result;
}

double_check::DoubleCheckReport Workbench::double_check(const std::string& session_id,
                                                        const std::string& response_id) {
  auto slot = this->slot(session_id);
  std::lock_guard lock(slot->mutex);
  auto& s = slot->session;
  require_mode(s, {Mode::kVerification}, "double check");
  const auto* claims = s.claims_for(response_id);
  if (claims == nullptr) {
    throw Error(ErrorCode::kUnknownResponse, "response '" + response_id + "' not in session");
  }
  auto report = double_check::double_check(response_id, *claims, *search_, config_.double_check);
  VerificationArtifact artifact{ids_.next("ver"), s.id, decision::Criterion::kDoubleCheck,
                                {response_id}, now_utc(), report};
  persist_verification(artifact);
  s.verifications.push_back(std::move(artifact));
  persist_header(s);
  return report;
}

compare::CompareReport Workbench::compare_responses(Session& s, const Turn& turn) {
  std::vector<compare::ProviderClaims> groups;
  for (const auto& r : turn.responses) {
    groups.push_back(compare::ProviderClaims{r.provider_id, r.id, turn.claims.at(r.id)});
  }
  auto report = compare::build_report(turn.prompt_text, groups, config_.compare);
  report.failures = turn.errors;

  VerificationArtifact artifact;
  artifact.id = ids_.next("ver");
  artifact.session_id = s.id;
  artifact.criterion = decision::Criterion::kCompare;
  for (const auto& r : turn.responses) artifact.response_ids.push_back(r.id);
  artifact.created_at = now_utc();
  artifact.result = report;
  persist_verification(artifact);
  s.verifications.push_back(std::move(artifact));
  return report;
}

compare::CompareReport Workbench::run_compare(const std::string& session_id,
                                              const std::string& prompt,
                                              const std::vector<std::string>& provider_ids) {
  auto slot = this->slot(session_id);
  std::lock_guard lock(slot->mutex);
  auto& s = slot->session;
  require_mode(s, {Mode::kGeneration, Mode::kVerification}, "compare");
  if (provider_ids.size() < 2) {
    throw Error(ErrorCode::kTooFewProviders, "compare needs at least two providers");
  }
  if (blank(prompt)) throw Error(ErrorCode::kEmptyPrompt, "prompt must not be empty");

  const auto outcomes = providers_.fan_out(prompt, provider_ids, history_of(s));
  auto turn = make_turn(s, prompt, provider_ids, outcomes, "compare");
  if (turn.responses.size() < 2) {
    std::string msg = "compare needs two successful responses, got " +
                      std::to_string(turn.responses.size());
    for (const auto& e : turn.errors) msg += "; " + e.provider_id + ": " + e.error.message;
    throw Error(ErrorCode::kCompareFailed, msg);
  }
  persist_turn(turn);
  s.turns.push_back(turn);
  auto report = compare_responses(s, s.turns.back());
  persist_header(s);
  return report;
}

compare::CompareReport Workbench::compare_turn(const std::string& session_id,
                                               std::size_t turn_index) {
  auto slot = this->slot(session_id);
  std::lock_guard lock(slot->mutex);
  auto& s = slot->session;
  require_mode(s, {Mode::kGeneration, Mode::kVerification}, "compare");
  if (turn_index >= s.turns.size()) {
    throw Error(ErrorCode::kInvalidArgument, "turn " + std::to_string(turn_index) + " not found");
  }
  if (s.turns[turn_index].responses.size() < 2) {
    throw Error(ErrorCode::kTooFewProviders, "compare needs at least two responses in the turn");
  }
  auto report = compare_responses(s, s.turns[turn_index]);
  persist_header(s);
  return report;
}

// --- decision mode -----------------------------------------------------------------

decision::DecisionTable build_decision_table(const Session& session,
                                             const decision::Weights& weights,
                                             Timestamp generated_at) {
  std::vector<decision::Candidate> candidates;
  std::map<std::string, std::size_t> position;
  for (const auto& t : session.turns) {
    for (const auto& r : t.responses) {
      position[r.id] = candidates.size();
      candidates.push_back(decision::Candidate{r.id, r.provider_id, decision::unevaluated()});
    }
  }
  // Later verifications of the same criterion replace earlier ones.
  for (const auto& v : session.verifications) {
    for (const auto& rid : v.response_ids) {
      auto it = position.find(rid);
      if (it == position.end()) continue;
      const auto result = v.criterion_result(rid);
      if (result.evaluated) {
        candidates[it->second].results[static_cast<std::size_t>(v.criterion)] = result;
      }
    }
  }
  return decision::build_table(session.id, candidates, weights, generated_at);
}

decision::DecisionTable Workbench::decision_table(const std::string& session_id) const {
  auto slot = this->slot(session_id);
  std::lock_guard lock(slot->mutex);
  const auto& s = slot->session;
  if (s.verifications.empty()) {
    throw Error(ErrorCode::kNoVerifications, "session '" + s.id + "' has no recorded verifications");
  }
  return build_decision_table(s, config_.weights, now_utc());
}

decision::DecisionRecord Workbench::record_decision(const std::string& session_id,
                                                    const std::string& response_id,
                                                    const std::string& rationale) {
  auto slot = this->slot(session_id);
  std::lock_guard lock(slot->mutex);
  auto& s = slot->session;
  if (s.verifications.empty()) {
    throw Error(ErrorCode::kNoVerifications, "session '" + s.id + "' has no recorded verifications");
  }
  require_mode(s, {Mode::kDecision}, "recording a decision");
  const auto table = build_decision_table(s, config_.weights, now_utc());
  if (!table.contains(response_id)) {
    throw Error(ErrorCode::kNotInTable, "response '" + response_id + "' is not in the decision table");
  }
  decision::DecisionRecord record{ids_.next("dec"), s.id, response_id, rationale, now_utc()};
  store_.save(StoreRecord{RecordKind::kDecision, record.id, store::kSchemaVersion,
                          decision::to_json(record)});
  s.decisions.push_back(record);
  persist_header(s);
  return record;
}

// --- corpus and scorecard -------------------------------------------------------------

std::size_t Workbench::ingest(source::CorpusDocument doc) {
  if (doc.ingested_at == Timestamp{}) doc.ingested_at = now_utc();
  auto payload = source::to_json(doc);
  const auto id = doc.doc_id;
  const auto chunks = index_.ingest(std::move(doc));
  store_.save(StoreRecord{RecordKind::kCorpusDoc, id, store::kSchemaVersion, std::move(payload)});
  return chunks;
}

scorecard::ScorecardEntry Workbench::record_scorecard(scorecard::ScorecardEntry entry) {
  if (entry.recorded_at == Timestamp{}) entry.recorded_at = now_utc();
  const auto& stored = scorecard_.record(std::move(entry));
  auto copy = stored;
  store_.save(StoreRecord{RecordKind::kScorecard, scorecard_record_id(copy), store::kSchemaVersion,
                          scorecard::to_json(copy)});
  return copy;
}

scorecard::TrustReport Workbench::aggregate_scorecard(const std::string& tool_id) const {
  return scorecard_.aggregate(tool_id);
}

scorecard::ToolComparison Workbench::compare_tools(const std::string& tool_a,
                                                   const std::string& tool_b) const {
  return scorecard_.compare_tools(tool_a, tool_b);
}

// --- archives ------------------------------------------------------------------------

store::SessionArchive Workbench::export_archive(const std::string& session_id) const {
  auto slot = this->slot(session_id);
  std::lock_guard lock(slot->mutex);
  return store_.export_archive(session_id);
}

std::string Workbench::import_archive(const store::SessionArchive& archive) {
  {
    std::shared_lock lock(sessions_mutex_);
    if (sessions_.contains(archive.manifest.session_id)) {
      throw Error(ErrorCode::kDuplicateRecord,
                  "session '" + archive.manifest.session_id + "' already exists");
    }
  }
  const auto session_id = store_.import_archive(archive);
  for (const auto& r : archive.records) {
    if (r.kind == RecordKind::kCorpusDoc && !index_.contains(r.id)) {
      index_.ingest(source::corpus_document_from_json(r.payload));
    }
  }
  load_session(session_id);
  return session_id;
}

}  // namespace twai
