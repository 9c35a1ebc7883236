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

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "api_harness.hpp"
#include "twai/decision.hpp"
#include "twai/double_check.hpp"
#include "twai/provider.hpp"
#include "twai/scorecard.hpp"
#include "twai/source.hpp"
#include "twai/store.hpp"

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;
using twai::testing::ApiHarness;

struct Outcome {
  bool ok = true;
  std::string detail;
};

/// Collects failures; the first few messages are kept for the report line.
struct Check {
  std::size_t failures = 0;
  std::vector<std::string> messages;

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ++failures;
    if (messages.size() < 3) messages.push_back(what);
  }

  Outcome outcome(std::string detail) const {
    if (failures == 0) return {true, std::move(detail)};
    std::string msg = std::to_string(failures) + " failures";
    for (const auto& m : messages) msg += "; " + m;
    return {false, msg};
  }
};

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

int run(const std::string& name, double budget_ms, const std::function<Outcome()>& fn) {
  const auto start = Clock::now();
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = ms_since(start);
  if (budget_ms > 0 && elapsed >= budget_ms) {
    out.ok = false;
    out.detail += " (over budget " + std::to_string(static_cast<long>(budget_ms)) + " ms)";
  }
  std::printf("%s %-22s %9.1f ms  %s\n", out.ok ? "PASS" : "FAIL", name.c_str(), elapsed,
              out.detail.c_str());
  std::fflush(stdout);
  return out.ok ? 0 : 1;
}

// --- scorecard ------------------------------------------------------------------

Outcome scorecard_arithmetic() {
  using namespace twai::scorecard;
  Scorecard sc;
  for (const auto& e : import_rows(twai::read_file(twai::testing::fixture("scorecard.csv")))) {
    sc.record(e);
  }
  const auto tw = sc.aggregate("tw_ai");
  const auto ex = sc.aggregate("existing");
  const auto delta = sc.compare_tools("existing", "tw_ai").overall_delta;
  Check c;
  c.expect(tw.n_raters == 20 && ex.n_raters == 20, "rater counts");
  c.expect(std::abs(tw.overall_mean_of_sums - 3.65) <= 1e-9, "tw_ai overall");
  c.expect(std::abs(ex.overall_mean_of_sums - (-0.1)) <= 1e-9, "existing overall");
  c.expect(std::abs(delta - 3.75) <= 1e-9, "delta");
  std::ostringstream d;
  d << "tw_ai " << tw.overall_mean_of_sums << ", existing " << ex.overall_mean_of_sums << ", delta "
    << delta;
  return c.outcome(d.str());
}

// --- ranking --------------------------------------------------------------------

Outcome ranking_rule() {
  using namespace twai::decision;
  std::mt19937 rng(20240501);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::array<double, 3> pass = {0.8, 0.8, 0.5};

  auto make = [&](std::array<double, 3> cov) {
    CriterionSet out = unevaluated();
    for (std::size_t i = 0; i < 3; ++i) {
      if (cov[i] < 0) continue;
      out[i] = {kCriteria[i], cov[i], cov[i] >= pass[i], true};
    }
    return out;
  };
  auto random_cov = [&] {
    std::array<double, 3> cov{};
    for (std::size_t i = 0; i < 3; ++i) {
      const double r = unit(rng);
      cov[i] = r < 0.15 ? -1.0 : r < 0.45 ? pass[i] + (1.0 - pass[i]) * unit(rng) : unit(rng);
    }
    return cov;
  };
  auto dominates = [](const CriterionSet& b, const CriterionSet& a, bool& strict) {
    strict = false;
    for (std::size_t i = 0; i < 3; ++i) {
      const double ca = a[i].evaluated ? a[i].coverage : 0.0;
      const double cb = b[i].evaluated ? b[i].coverage : 0.0;
      if (a[i].evaluated && !b[i].evaluated) return false;
      if (cb < ca) return false;
      if (cb > ca) strict = true;
    }
    return true;
  };

  Check c;
  std::size_t fully = 0;
  std::size_t dominance_pairs = 0;
  std::vector<Weights> weights;
  for (int i = 0; i < 10; ++i) {
    double a = 0.01 + unit(rng);
    double b = 0.01 + unit(rng);
    double d = 0.01 + unit(rng);
    const double sum = a + b + d;
    weights.push_back({a / sum, b / sum, 1.0 - a / sum - b / sum});
  }
  for (int session = 0; session < 1000; ++session) {
    std::vector<Candidate> cands;
    const int n = 2 + static_cast<int>(rng() % 7);
    for (int i = 0; i < n; ++i) {
      cands.push_back({"rsp-" + std::to_string(i), "p" + std::to_string(rng() % 3), make(random_cov())});
    }
    // Plant a dominating copy of the first candidate.
    auto raised = cands[0].results;
    for (std::size_t i = 0; i < 3; ++i) {
      if (unit(rng) < 0.5) continue;
      const double lo = raised[i].evaluated ? raised[i].coverage : 0.0;
      const double up = lo + (1.0 - lo) * unit(rng);
      raised[i] = {kCriteria[i], up, up >= pass[i], true};
    }
    cands.push_back({"rsp-raised", "p9", raised});

    for (const auto& w : weights) {
      const auto table = build_table("s", cands, w, {});
      std::map<std::string, std::size_t> rank;
      bool seen_partial = false;
      for (const auto& row : table.rows) {
        rank[row.response_id] = row.rank;
        if (row.score.fully_verified) {
          ++fully;
          c.expect(!seen_partial, "fully verified row below a partial one");
        } else {
          seen_partial = true;
        }
      }
      for (const auto& a : cands) {
        for (const auto& b : cands) {
          if (&a == &b || !rank.count(a.response_id) || !rank.count(b.response_id)) continue;
          bool strict = false;
          if (!dominates(b.results, a.results, strict) || !strict) continue;
          ++dominance_pairs;
          c.expect(rank[b.response_id] < rank[a.response_id],
                   "superset " + b.response_id + " ranked below " + a.response_id);
        }
      }
    }
  }
  return c.outcome(std::to_string(fully) + " fully-verified rows, " +
                   std::to_string(dominance_pairs) + " dominance pairs, 0 counterexamples");
}

// --- source oracle --------------------------------------------------------------

std::vector<std::string> oracle_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    const auto u = static_cast<unsigned char>(ch);
    if (std::isalnum(u)) {
      cur += static_cast<char>(std::tolower(u));
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

Outcome source_oracle() {
  std::mt19937 rng(99);
  std::vector<std::string> vocab;
  for (int i = 0; i < 400; ++i) vocab.push_back("w" + std::to_string(i));
  // Skewed draws so common words repeat within chunks.
  std::vector<double> weights;
  for (int i = 0; i < 400; ++i) weights.push_back(1.0 / (1 + i % 50));
  std::discrete_distribution<int> pick(weights.begin(), weights.end());

  Check c;
  std::size_t total_chunks = 0;
  std::size_t queries = 0;
  for (int corpus = 0; corpus < 50; ++corpus) {
    twai::source::SourceIndex index;
    struct OracleChunk {
      std::string doc_id;
      std::size_t seq;
      std::map<std::string, std::uint64_t> counts;
      std::uint64_t norm_sq = 0;
    };
    std::vector<OracleChunk> chunks;
    const std::size_t chunk_budget = 50 + rng() % 951;
    std::vector<std::string> bodies;
    int doc = 0;
    while (true) {
      std::string body;
      if (!bodies.empty() && rng() % 8 == 0) {
        body = bodies[rng() % bodies.size()];  // duplicate content forces score ties
      } else {
        const std::size_t n = 1 + rng() % 1500;
        for (std::size_t i = 0; i < n; ++i) {
          body += vocab[pick(rng)];
          body += (rng() % 12 == 0) ? ". " : " ";
        }
      }
      const auto tokens = oracle_tokens(body);
      std::vector<OracleChunk> mine;
      const std::size_t n = tokens.size();
      const std::size_t count = n <= 200 ? 1 : 1 + (n - 200 + 159) / 160;
      if (chunks.size() + count > chunk_budget) break;
      char id[16];
      std::snprintf(id, sizeof id, "doc-%03d", doc++);
      for (std::size_t s = 0; s < count; ++s) {
        OracleChunk oc{id, s, {}, 0};
        for (std::size_t t = s * 160; t < std::min(n, s * 160 + 200); ++t) ++oc.counts[tokens[t]];
        for (const auto& [_, k] : oc.counts) oc.norm_sq += k * k;
        mine.push_back(std::move(oc));
      }
      const auto made = index.ingest({id, "", body, {}, {}});
      c.expect(made == count, std::string(id) + " chunk count");
      chunks.insert(chunks.end(), mine.begin(), mine.end());
      bodies.push_back(body);
    }
    if (chunks.empty()) continue;
    total_chunks += chunks.size();

    for (int q = 0; q < 20; ++q) {
      std::string query;
      const int len = 1 + static_cast<int>(rng() % 12);
      for (int i = 0; i < len; ++i) {
        query += (rng() % 10 == 0) ? "unseen" + std::to_string(i) : vocab[pick(rng)];
        query += " ";
      }
      const std::size_t k = 1 + rng() % (q % 5 == 0 ? chunks.size() + 5 : 12);
      std::map<std::string, std::uint64_t> qc;
      for (const auto& t : oracle_tokens(query)) ++qc[t];
      std::uint64_t qn = 0;
      for (const auto& [_, v] : qc) qn += v * v;

      struct Scored {
        double sim;
        const OracleChunk* chunk;
      };
      std::vector<Scored> scored;
      for (const auto& ch : chunks) {
        std::uint64_t dot = 0;
        for (const auto& [t, v] : qc) {
          auto it = ch.counts.find(t);
          if (it != ch.counts.end()) dot += v * it->second;
        }
        double sim = dot == 0 ? 0.0 : static_cast<double>(dot) /
                                          std::sqrt(static_cast<double>(qn) *
                                                    static_cast<double>(ch.norm_sq));
        scored.push_back({std::min(sim, 1.0), &ch});
      }
      std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.sim != b.sim) return a.sim > b.sim;
        if (a.chunk->doc_id != b.chunk->doc_id) return a.chunk->doc_id < b.chunk->doc_id;
        return a.chunk->seq < b.chunk->seq;
      });
      scored.resize(std::min(k, scored.size()));

      const auto hits = index.retrieve(query, k);
      ++queries;
      c.expect(hits.size() == scored.size(), "hit count");
      for (std::size_t i = 0; i < std::min(hits.size(), scored.size()); ++i) {
        c.expect(hits[i].doc_id == scored[i].chunk->doc_id && hits[i].seq == scored[i].chunk->seq &&
                     hits[i].similarity == scored[i].sim,
                 "corpus " + std::to_string(corpus) + " query " + std::to_string(q) + " rank " +
                     std::to_string(i));
      }
    }
  }
  return c.outcome(std::to_string(total_chunks) + " chunks, " + std::to_string(queries) +
                   " queries, exact match");
}

// --- tri-state ------------------------------------------------------------------

Outcome tri_state() {
  using namespace twai::double_check;
  std::mt19937 rng(7);
  auto words = [&](const std::string& prefix, int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s += (i ? " " : "") + prefix + std::to_string(rng() % 500);
    return s;
  };

  Check c;
  // true class -> predicted class counts
  std::map<Status, std::map<Status, std::size_t>> confusion;
  std::size_t highlights = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Status> truth;
    std::string response;
    const int n = 3 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      const auto kind = static_cast<Status>(rng() % 3);
      truth.push_back(kind);
      if (kind == Status::kNotApplicable) {
        response += "Maybe " + words("va", 4 + static_cast<int>(rng() % 5)) + ". ";
      } else {
        response += "Clearly " + words("va", 4 + static_cast<int>(rng() % 5)) + ". ";
      }
    }
    const auto rid = "rsp-" + std::to_string(trial);
    const auto claims = twai::text::segment_claims(rid, response);
    if (claims.size() != truth.size()) {
      c.expect(false, "segmentation produced " + std::to_string(claims.size()) + " claims");
      continue;
    }
    std::map<std::string, std::vector<SearchHit>> table;
    for (std::size_t i = 0; i < claims.size(); ++i) {
      const auto noise = SearchHit{"https://noise.example/" + std::to_string(i), "noise",
                                   words("vb", 8)};
      if (truth[i] == Status::kSupported) {
        table[claims[i].text] = {noise, {"https://src.example/" + std::to_string(i), "source",
                                         claims[i].text}};
      } else if (truth[i] == Status::kUnsupported) {
        table[claims[i].text] = rng() % 2 ? std::vector<SearchHit>{noise} : std::vector<SearchHit>{};
      } else {
        table[claims[i].text] = {{"https://src.example/h", "hedge", claims[i].text}};
      }
    }
    FixtureSearchClient client(table);
    const auto report = double_check(rid, claims, client);
    c.expect(report.highlights.size() == claims.size(), "highlight count");
    for (std::size_t i = 0; i < report.highlights.size(); ++i) {
      const auto& h = report.highlights[i];
      ++highlights;
      ++confusion[truth[i]][h.status];
      c.expect(highlight_consistent(h), "inconsistent highlight " + h.claim_id);
      c.expect(h.color == color_for(h.status), "color mapping " + h.claim_id);
      c.expect(h.claim_id == claims[i].id, "claim order");
    }
  }

  std::ostringstream d;
  for (auto cls : {Status::kSupported, Status::kUnsupported, Status::kNotApplicable}) {
    std::size_t tp = confusion[cls][cls];
    std::size_t actual = 0;
    std::size_t predicted = 0;
    for (const auto& [t, row] : confusion) {
      for (const auto& [p, k] : row) {
        if (t == cls) actual += k;
        if (p == cls) predicted += k;
      }
    }
    const double precision = predicted ? static_cast<double>(tp) / predicted : 0.0;
    const double recall = actual ? static_cast<double>(tp) / actual : 0.0;
    c.expect(precision == 1.0 && recall == 1.0, std::string(to_string(cls)) + " P/R");
    d << to_string(cls) << " P=" << precision << " R=" << recall << " (n=" << actual << ") ";
  }
  d << "over " << highlights << " highlights";
  return c.outcome(d.str());
}

// --- compare via API --------------------------------------------------------------

std::filesystem::path write_compare_providers(const std::filesystem::path& dir) {
  const std::string shared = "Autoplay previews start playing without user consent.";
  const std::string same =
      "Autoplay previews start playing without user consent. Subtitle preferences reset whenever "
      "members change devices.";
  const std::vector<std::pair<std::string, std::string>> texts = {
      {"same-1", same},
      {"same-2", same},
      {"same-3", same},
      {"disjoint-1", "Autoplay previews start playing without user consent."},
      {"disjoint-2", "Quarterly subscriber revenue grew across several regions."},
      {"disjoint-3", "Download quotas confuse travelling viewers often."},
      {"plant-a", "Household profiles clutter the account switcher badly. " + shared},
      {"plant-b", shared + " Subtitle preferences reset whenever members change devices."},
      {"plant-c", "Search ignores misspelled movie queries entirely. " + shared +
                      " Download quotas confuse travelling viewers often."},
  };
  json providers = json::array();
  for (const auto& [id, text] : texts) {
    twai::testing::write_json(dir / (id + ".json"), json{{"*", {text}}});
    providers.push_back({{"id", id},
                         {"display_name", id},
                         {"kind", "mock"},
                         {"endpoint_config", {{"fixture", id + ".json"}}}});
  }
  const auto path = dir / "providers.json";
  twai::testing::write_json(path, json{{"providers", providers}});
  return path;
}

Outcome compare_consensus() {
  twai::testing::TempDir dir;
  ApiHarness api(dir / "ws", write_compare_providers(dir.path()));
  const std::string sid = api.post("/api/sessions", {{"title", "compare"}}).body["id"];
  auto compare = [&](const std::string& prefix) {
    const auto r = api.post("/api/sessions/" + sid + "/verifications/compare",
                            {{"prompt", "What is wrong with the streaming UI?"},
                             {"providers", {prefix + "1", prefix + "2", prefix + "3"}}});
    if (r.status != 200) throw std::runtime_error("compare failed: " + r.raw);
    return r.body["result"];
  };
  Check c;
  const auto same = compare("same-");
  for (const auto& [rid, cov] : same["per_response_coverage"].items()) {
    c.expect(cov.get<double>() == 1.0, "identical coverage " + rid);
  }
  const auto disjoint = compare("disjoint-");
  for (const auto& [rid, cov] : disjoint["per_response_coverage"].items()) {
    c.expect(cov.get<double>() == 0.0, "disjoint coverage " + rid);
  }
  const auto r = api.post("/api/sessions/" + sid + "/verifications/compare",
                          {{"prompt", "What is wrong with the streaming UI?"},
                           {"providers", {"plant-a", "plant-b", "plant-c"}}});
  const auto planted = r.body["result"];
  std::size_t support3 = 0;
  std::size_t other = 0;
  for (const auto& cl : planted["clusters"]) {
    if (cl["support"] == 3) {
      ++support3;
      c.expect(cl["representative_text"] == "Autoplay previews start playing without user consent.",
               "planted representative");
    } else if (cl["support"] != 1) {
      ++other;
    }
  }
  c.expect(support3 == 1, "support-3 clusters: " + std::to_string(support3));
  c.expect(other == 0, "unexpected multi-support clusters");
  return c.outcome("identical 1.0, disjoint 0.0, planted support-3 clusters = " +
                   std::to_string(support3));
}

// --- state machine via API ---------------------------------------------------------

Outcome state_machine() {
  twai::testing::TempDir dir;
  ApiHarness api(dir / "ws");
  const std::string prompt = "Tell me about the most critical problem of Netflix's UI.";
  Check c;
  std::size_t checks = 0;

  struct State {
    std::string name;
    std::string mode;
    bool responses;
    bool verifications;
  };
  const std::vector<State> states = {
      {"G0", "generation", false, false},  {"G1", "generation", true, false},
      {"V1", "verification", true, false}, {"V2", "verification", true, true},
      {"D2", "decision", true, true},      {"G2", "generation", true, true},
  };

  struct Built {
    std::string sid;
    std::string rid;
  };
  auto build = [&](const State& st) {
    Built b;
    b.sid = api.post("/api/sessions", {{"title", st.name}}).body["id"];
    const auto base = "/api/sessions/" + b.sid;
    if (st.responses) {
      const auto t = api.post(base + "/prompts", {{"prompt", prompt}, {"providers", {"mock-a", "mock-b"}}});
      b.rid = t.body["responses"][0]["id"];
    }
    if (st.verifications) {
      api.post(base + "/mode", {{"mode", "verification"}});
      api.post(base + "/verifications/double-check", {{"response_id", b.rid}});
    }
    if (st.mode != "generation") {
      const auto r = api.post(base + "/mode", {{"mode", st.mode}});
      if (r.status != 200) throw std::runtime_error("setup of " + st.name + ": " + r.raw);
    } else if (st.verifications) {
      api.post(base + "/mode", {{"mode", "generation"}});
    }
    const auto mode = api.get(base).body["mode"];
    if (mode != st.mode) throw std::runtime_error("setup of " + st.name + " ended in " + mode.dump());
    return b;
  };

  auto expect_reply = [&](const ApiHarness::Reply& r, int status, const std::string& code,
                          const std::string& what) {
    ++checks;
    bool ok = r.status == status;
    if (ok && !code.empty()) ok = r.body["error"]["code"] == code;
    c.expect(ok, what + " -> " + std::to_string(r.status) + " " + r.raw.substr(0, 80));
  };

  std::size_t transitions = 0;
  for (const auto& st : states) {
    // Mode transitions.
    for (const std::string target : {"generation", "verification", "decision"}) {
      const auto b = build(st);
      const auto r = api.post("/api/sessions/" + b.sid + "/mode", {{"mode", target}});
      ++transitions;
      std::string expected_code;
      if (target == "verification" && !st.responses) expected_code = "NoResponses";
      if (target == "decision" && !st.verifications) expected_code = "NoVerifications";
      const auto what = st.name + " -> " + target;
      if (expected_code.empty()) {
        expect_reply(r, 200, "", what);
        c.expect(r.body["mode"] == target, what + " mode");
      } else {
        expect_reply(r, 409, expected_code, what);
        c.expect(api.get("/api/sessions/" + b.sid).body["mode"] == st.mode, what + " unchanged");
      }
    }

    // Mode-gated operations.
    const auto b = build(st);
    const auto base = "/api/sessions/" + b.sid;
    const auto rid = b.rid.empty() ? std::string("rsp-none") : b.rid;
    const bool gen = st.mode == "generation";
    const bool ver = st.mode == "verification";
    const bool dec = st.mode == "decision";

    expect_reply(api.post(base + "/verifications/double-check", {{"response_id", rid}}),
                 ver ? 200 : 409, ver ? "" : "WrongMode", st.name + " double-check");
    expect_reply(api.post(base + "/verifications/source", {{"response_id", rid}}), 409,
                 ver ? "EmptyIndex" : "WrongMode", st.name + " source");
    if (st.responses) {
      expect_reply(api.post(base + "/verifications/compare", {{"turn", 0}}), dec ? 409 : 200,
                   dec ? "WrongMode" : "", st.name + " compare");
    }
    const bool has_verifications = st.verifications || ver || (st.responses && !dec);
    expect_reply(api.get(base + "/decision-table"), has_verifications ? 200 : 409,
                 has_verifications ? "" : "NoVerifications", st.name + " decision-table");
    if (!dec) {
      expect_reply(api.post(base + "/decisions", {{"response_id", rid}}), 409,
                   has_verifications ? "WrongMode" : "NoVerifications", st.name + " decide");
    }
    expect_reply(api.post(base + "/prompts", {{"prompt", prompt}, {"providers", {"mock-a"}}}),
                 gen ? 201 : 409, gen ? "" : "WrongMode", st.name + " prompt");
  }

  // Happy path: generate -> verify -> decide -> generate.
  api.post("/api/corpus", {{"doc_id", "notes"},
                           {"title", "Research notes"},
                           {"body", twai::read_file(twai::testing::fixture("research_notes.txt"))}});
  const std::string sid = api.post("/api/sessions", {{"title", "happy"}}).body["id"];
  const auto base = "/api/sessions/" + sid;
  const auto turn = api.post(base + "/prompts", {{"prompt", prompt}, {"providers", {"mock-a", "mock-b"}}});
  expect_reply(turn, 201, "", "happy prompt");
  const std::string ra = turn.body["responses"][0]["id"];
  const std::string rb = turn.body["responses"][1]["id"];
  expect_reply(api.post(base + "/mode", {{"mode", "verification"}}), 200, "", "happy verification");
  expect_reply(api.post(base + "/verifications/source", {{"response_id", ra}}), 200, "", "happy source");
  expect_reply(api.post(base + "/verifications/double-check", {{"response_id", rb}}), 200, "",
               "happy double-check");
  expect_reply(api.post(base + "/verifications/compare", {{"turn", 0}}), 200, "", "happy compare");
  expect_reply(api.post(base + "/mode", {{"mode", "decision"}}), 200, "", "happy decision");
  const auto table = api.get(base + "/decision-table");
  expect_reply(table, 200, "", "happy table");
  const std::string chosen = table.body["rows"][1]["response_id"];
  const auto dec = api.post(base + "/decisions", {{"response_id", chosen}, {"rationale", "rank 2"}});
  expect_reply(dec, 201, "", "happy record");
  expect_reply(api.post(base + "/mode", {{"mode", "generation"}}), 200, "", "happy back to generation");

  const twai::store::Store reader(dir / "ws", twai::store::Store::Access::kReadOnly);
  const auto persisted = reader.find(twai::store::RecordKind::kDecision, dec.body["id"]);
  c.expect(persisted.has_value(), "decision record persisted");
  if (persisted) {
    c.expect(persisted->payload["chosen_response_id"] == chosen, "persisted response id");
    c.expect(persisted->payload["session_id"] == sid, "persisted session id");
  }
  return c.outcome(std::to_string(transitions) + " transitions, " + std::to_string(checks) +
                   " checked replies, decision " + dec.body.value("id", std::string("?")) +
                   " persisted");
}

// --- fan-out ----------------------------------------------------------------------

Outcome fan_out() {
  twai::testing::TempDir dir;
  json providers = json::array();
  std::vector<std::string> ids;
  for (int i = 0; i < 5; ++i) {
    const auto id = "slow-" + std::to_string(i);
    ids.push_back(id);
    providers.push_back({{"id", id},
                         {"display_name", id},
                         {"kind", "mock"},
                         {"endpoint_config", {{"delay_ms", "100"}}}});
  }
  const auto path = dir / "providers.json";
  twai::testing::write_json(path, json{{"providers", providers}});

  twai::ProviderRegistry registry;
  for (const auto& spec : twai::ProviderRegistry::load_specs(path)) registry.register_provider(spec);
  auto start = Clock::now();
  const auto outcomes = registry.fan_out("hello there", ids);
  const double direct = ms_since(start);

  ApiHarness api(dir / "ws", path);
  const std::string sid = api.post("/api/sessions", {{"title", "fan"}}).body["id"];
  start = Clock::now();
  const auto r = api.post("/api/sessions/" + sid + "/prompts", {{"prompt", "hello there"}, {"providers", ids}});
  const double over_api = ms_since(start);

  Check c;
  c.expect(outcomes.size() == 5, "outcome count");
  for (const auto& o : outcomes) c.expect(o.ok(), o.provider_id + " failed");
  c.expect(r.status == 201 && r.body["responses"].size() == 5, "api prompt");
  c.expect(direct < 250.0, "registry fan_out took " + std::to_string(direct) + " ms");
  c.expect(over_api < 250.0, "api prompt took " + std::to_string(over_api) + " ms");
  std::ostringstream d;
  d.precision(1);
  d << std::fixed << "5 x 100 ms: fan_out " << direct << " ms, via API " << over_api << " ms";
  return c.outcome(d.str());
}

// --- persistence --------------------------------------------------------------------

Outcome persistence() {
  twai::testing::TempDir dir;
  ApiHarness src(dir / "src");
  ApiHarness dst(dir / "dst");
  std::mt19937 rng(4242);
  const std::vector<std::string> prompts = {
      "Tell me about the most critical problem of Netflix's UI.",
      "I'd like to redesign the UI of Netflix.",
      "Summarize the onboarding flow.",
  };
  src.post("/api/corpus", {{"doc_id", "notes"},
                           {"title", "Research notes"},
                           {"body", twai::read_file(twai::testing::fixture("research_notes.txt"))}});

  Check c;
  std::size_t records = 0;
  std::vector<std::string> sessions;
  for (int i = 0; i < 200; ++i) {
    const std::string sid = src.post("/api/sessions", {{"title", "s" + std::to_string(i)}}).body["id"];
    const auto base = "/api/sessions/" + sid;
    sessions.push_back(sid);
    if (rng() % 3 == 0) {
      src.post(base + "/library", {{"action", "add_template"}, {"label", "t"}, {"body", prompts[rng() % 3]}});
    }
    const int n_turns = static_cast<int>(rng() % 3);
    std::vector<std::string> rids;
    for (int t = 0; t < n_turns; ++t) {
      json providers = json::array({"mock-a"});
      if (rng() % 2) providers.push_back("mock-b");
      if (rng() % 4 == 0) providers.push_back("mock-down");
      const auto turn = src.post(base + "/prompts", {{"prompt", prompts[rng() % 3]}, {"providers", providers}});
      for (const auto& r : turn.body["responses"]) rids.push_back(r["id"]);
    }
    if (!rids.empty() && rng() % 3 == 0) {
      src.post(base + "/library", {{"action", "add_bookmark"}, {"response_id", rids[0]}, {"label", "b"}});
    }
    if (!rids.empty() && rng() % 2 == 0) {
      src.post(base + "/mode", {{"mode", "verification"}});
      src.post(base + "/verifications/source", {{"response_id", rids[rng() % rids.size()]}});
      if (rng() % 2) src.post(base + "/verifications/double-check", {{"response_id", rids.back()}});
      if (rng() % 2 == 0) {
        src.post(base + "/mode", {{"mode", "decision"}});
        const auto table = src.get(base + "/decision-table").body;
        src.post(base + "/decisions", {{"response_id", table["rows"][0]["response_id"]}, {"rationale", "top"}});
        if (rng() % 2) src.post(base + "/mode", {{"mode", "generation"}});
      }
    }

    const auto exported = src.get(base + "/export");
    c.expect(exported.status == 200, "export " + sid);
    const auto imported = dst.post_raw("/api/archives", exported.raw, "application/gzip");
    c.expect(imported.status == 201, "import " + sid + ": " + imported.raw.substr(0, 80));
    c.expect(dst.get(base).body == src.get(base).body, "session document " + sid);
  }

  // Record-level identity: every record the source holds for a session exists
  // byte-identically in the destination.
  const twai::store::Store a(dir / "src", twai::store::Store::Access::kReadOnly);
  const twai::store::Store b(dir / "dst", twai::store::Store::Access::kReadOnly);
  for (const auto& sid : sessions) {
    for (const auto& r : a.export_archive(sid).records) {
      ++records;
      const auto other = b.find(r.kind, r.id);
      c.expect(other.has_value() && *other == r,
               std::string(twai::store::to_string(r.kind)) + " " + r.id + " differs");
    }
  }
  return c.outcome(std::to_string(sessions.size()) + " sessions, " + std::to_string(records) +
                   " records identical after export/import");
}

}  // namespace

int main() {
  int failed = 0;
  failed += run("scorecard-arithmetic", 1000, scorecard_arithmetic);
  failed += run("ranking-rule", 10000, ranking_rule);
  failed += run("source-oracle", 60000, source_oracle);
  failed += run("tri-state-exactness", 5000, tri_state);
  failed += run("compare-consensus", 5000, compare_consensus);
  failed += run("state-machine-api", 10000, state_machine);
  failed += run("fan-out-concurrency", 0, fan_out);
  failed += run("persistence-roundtrip", 0, persistence);
  std::printf("%d of 8 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
