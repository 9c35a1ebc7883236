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

#include "twai/session.hpp"

#include "twai/errors.hpp"

namespace twai {

using nlohmann::json;

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::kGeneration: return "generation";
    case Mode::kVerification: return "verification";
    case Mode::kDecision: return "decision";
  }
  return "generation";
}

Mode parse_mode(std::string_view s) {
  if (s == "generation") return Mode::kGeneration;
  if (s == "verification") return Mode::kVerification;
  if (s == "decision") return Mode::kDecision;
  throw Error(ErrorCode::kInvalidMode, "unknown mode '" + std::string(s) + "'");
}

decision::CriterionResult VerificationArtifact::criterion_result(
    const std::string& response_id) const {
  decision::CriterionResult r{criterion, 0.0, false, true};
  if (const auto* s = std::get_if<source::SourceVerification>(&result)) {
    r.coverage = s->coverage;
    r.passed = s->passed;
  } else if (const auto* d = std::get_if<double_check::DoubleCheckReport>(&result)) {
    r.coverage = d->coverage;
    r.passed = d->passed;
  } else if (const auto* c = std::get_if<compare::CompareReport>(&result)) {
    auto cov = c->per_response_coverage.find(response_id);
    auto pass = c->per_response_passed.find(response_id);
    if (cov == c->per_response_coverage.end()) return {criterion, 0.0, false, false};
    r.coverage = cov->second;
    r.passed = pass != c->per_response_passed.end() && pass->second;
  }
  return r;
}

std::size_t Session::response_count() const {
  std::size_t n = 0;
  for (const auto& t : turns) n += t.responses.size();
  return n;
}

const GenerationResponse* Session::find_response(std::string_view response_id) const {
  for (const auto& t : turns) {
    for (const auto& r : t.responses) {
      if (r.id == response_id) return &r;
    }
  }
  return nullptr;
}

const std::vector<text::Claim>* Session::claims_for(std::string_view response_id) const {
  for (const auto& t : turns) {
    auto it = t.claims.find(std::string(response_id));
    if (it != t.claims.end()) return &it->second;
  }
  return nullptr;
}

void check_transition(const Session& session, Mode target) {
  switch (target) {
    case Mode::kGeneration:
      return;
    case Mode::kVerification:
      if (session.response_count() == 0) {
        throw Error(ErrorCode::kNoResponses,
                    "session '" + session.id + "' has no responses to verify");
      }
      return;
    case Mode::kDecision:
      if (session.verifications.empty()) {
        throw Error(ErrorCode::kNoVerifications,
                    "session '" + session.id + "' has no recorded verifications");
      }
      return;
  }
}

MetricsPanel MetricsPanel::from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidConfig, "metrics config must be an object");
  std::vector<Metric> metrics;
  try {
    for (const auto& [name, m] : doc.items()) {
      metrics.push_back(Metric{name, m.at("value").get<double>(), m.value("unit", std::string{}),
                               m.value("as_of", std::string{})});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("malformed metrics config: ") + e.what());
  }
  return MetricsPanel(std::move(metrics));
}

MetricsPanel MetricsPanel::from_file(const std::filesystem::path& path) {
  try {
    return from_json(json::parse(read_file(path)));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidConfig, path.string() + ": " + e.what());
  }
}

json MetricsPanel::to_json() const {
  json out = json::object();
  for (const auto& m : metrics_) {
    out[m.name] = {{"value", m.value}, {"unit", m.unit}, {"as_of", m.as_of}};
  }
  return out;
}

std::string_view help_text(Mode mode) {
  switch (mode) {
    case Mode::kGeneration:
      return "Generation mode\n"
             "Enter a prompt and pick one or more providers. Each provider answers the same "
             "prompt and the answers are split into claims. Save useful prompts as templates "
             "and bookmark answers you want to keep. Switch to verification once at least one "
             "answer exists.\n";
    case Mode::kVerification:
      return "Verification mode\n"
             "Select an answer and run any of the three checks.\n"
             "  Source: matches claims against ingested internal research and cites documents.\n"
             "  Double check: searches the web for each claim. Blue means similar content was "
             "found (links attached), red means nothing similar was found (search further), no "
             "highlight means the claim needs no check or could not be checked.\n"
             "  Compare: sends one prompt to several providers and surfaces the claims they "
             "share.\n"
             "Switch to decision once at least one check has run.\n";
    case Mode::kDecision:
      return "Decision mode\n"
             "Answers are ranked by reliability. Answers that pass all three checks come first, "
             "the rest are ordered by their weighted verification coverage. Pick any row, note "
             "why, and return to generation for the next question.\n";
  }
  return "";
}

// --- JSON ----------------------------------------------------------------------

json to_json(const text::Claim& c) {
  return json{{"id", c.id},
              {"response_id", c.response_id},
              {"text", c.text},
              {"span", {c.span.begin, c.span.end}},
              {"checkable", c.checkable}};
}

text::Claim claim_from_json(const json& j) {
  text::Claim c;
  c.id = j.at("id").get<std::string>();
  c.response_id = j.at("response_id").get<std::string>();
  c.text = j.at("text").get<std::string>();
  c.span = {j.at("span").at(0).get<std::size_t>(), j.at("span").at(1).get<std::size_t>()};
  c.checkable = j.at("checkable").get<bool>();
  return c;
}

json to_json(const Turn& t) {
  json responses = json::array();
  for (const auto& r : t.responses) responses.push_back(twai::to_json(r));
  json claims = json::object();
  for (const auto& [rid, list] : t.claims) {
    json arr = json::array();
    for (const auto& c : list) arr.push_back(to_json(c));
    claims[rid] = arr;
  }
  json errors = json::array();
  for (const auto& e : t.errors) {
    errors.push_back({{"provider_id", e.provider_id}, {"error", twai::to_json(e.error)}});
  }
  return json{{"id", t.id},
              {"session_id", t.session_id},
              {"index", t.index},
              {"prompt_text", t.prompt_text},
              {"origin", t.origin},
              {"provider_ids", t.provider_ids},
              {"responses", responses},
              {"claims", claims},
              {"errors", errors},
              {"created_at", format_timestamp(t.created_at)}};
}

Turn turn_from_json(const json& j) {
  Turn t;
  t.id = j.at("id").get<std::string>();
  t.session_id = j.at("session_id").get<std::string>();
  t.index = j.at("index").get<std::size_t>();
  t.prompt_text = j.at("prompt_text").get<std::string>();
  t.origin = j.value("origin", std::string("prompt"));
  t.provider_ids = j.at("provider_ids").get<std::vector<std::string>>();
  for (const auto& r : j.at("responses")) t.responses.push_back(generation_response_from_json(r));
  for (const auto& [rid, list] : j.at("claims").items()) {
    auto& out = t.claims[rid];
    for (const auto& c : list) out.push_back(claim_from_json(c));
  }
  for (const auto& e : j.at("errors")) {
    t.errors.push_back(compare::ProviderFailure{e.at("provider_id").get<std::string>(),
                                                error_info_from_json(e.at("error"))});
  }
  t.created_at = parse_timestamp(j.at("created_at").get<std::string>());
  return t;
}

json to_json(const Library& l) {
  json templates = json::array();
  for (const auto& t : l.templates) {
    templates.push_back({{"id", t.id},
                         {"label", t.label},
                         {"body", t.body},
                         {"created_at", format_timestamp(t.created_at)}});
  }
  json bookmarks = json::array();
  for (const auto& b : l.bookmarks) {
    bookmarks.push_back({{"id", b.id},
                         {"label", b.label},
                         {"response_id", b.response_id},
                         {"created_at", format_timestamp(b.created_at)}});
  }
  return json{{"templates", templates}, {"bookmarks", bookmarks}};
}

Library library_from_json(const json& j) {
  Library l;
  for (const auto& t : j.at("templates")) {
    l.templates.push_back(PromptTemplate{t.at("id").get<std::string>(),
                                         t.at("label").get<std::string>(),
                                         t.at("body").get<std::string>(),
                                         parse_timestamp(t.at("created_at").get<std::string>())});
  }
  for (const auto& b : j.at("bookmarks")) {
    l.bookmarks.push_back(Bookmark{b.at("id").get<std::string>(), b.at("label").get<std::string>(),
                                   b.at("response_id").get<std::string>(),
                                   parse_timestamp(b.at("created_at").get<std::string>())});
  }
  return l;
}

json to_json(const VerificationArtifact& v) {
  json result = std::visit([](const auto& r) { return to_json(r); }, v.result);
  return json{{"id", v.id},
              {"session_id", v.session_id},
              {"criterion", decision::to_string(v.criterion)},
              {"response_ids", v.response_ids},
              {"created_at", format_timestamp(v.created_at)},
              {"result", result}};
}

VerificationArtifact verification_from_json(const json& j) {
  VerificationArtifact v;
  v.id = j.at("id").get<std::string>();
  v.session_id = j.at("session_id").get<std::string>();
  v.criterion = decision::parse_criterion(j.at("criterion").get<std::string>());
  v.response_ids = j.at("response_ids").get<std::vector<std::string>>();
  v.created_at = parse_timestamp(j.at("created_at").get<std::string>());
  const auto& r = j.at("result");
  switch (v.criterion) {
    case decision::Criterion::kSource:
      v.result = source::source_verification_from_json(r);
      break;
    case decision::Criterion::kDoubleCheck:
      v.result = double_check::double_check_report_from_json(r);
      break;
    case decision::Criterion::kCompare:
      v.result = compare::compare_report_from_json(r);
      break;
  }
  return v;
}

json session_header_json(const Session& s) {
  json turn_ids = json::array();
  for (const auto& t : s.turns) turn_ids.push_back(t.id);
  return json{{"id", s.id},
              {"title", s.title},
              {"mode", to_string(s.mode)},
              {"created_at", format_timestamp(s.created_at)},
              {"library", to_json(s.library)},
              {"turn_ids", turn_ids}};
}

json to_json(const Session& s) {
  json out = session_header_json(s);
  json turns = json::array();
  for (const auto& t : s.turns) turns.push_back(to_json(t));
  json verifications = json::array();
  for (const auto& v : s.verifications) verifications.push_back(to_json(v));
  json decisions = json::array();
  for (const auto& d : s.decisions) decisions.push_back(decision::to_json(d));
  out["turns"] = turns;
  out["verifications"] = verifications;
  out["decisions"] = decisions;
  return out;
}

}  // namespace twai
