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

#include "twai/double_check.hpp"

#include <algorithm>
#include <future>

#include "twai/errors.hpp"
#include "twai/util.hpp"

namespace twai::double_check {

using nlohmann::json;

namespace {

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

FixtureSearchClient FixtureSearchClient::from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidConfig, "search fixture must be an object");
  std::map<std::string, std::vector<SearchHit>> table;
  try {
    for (const auto& [query, hits] : doc.items()) {
      auto& out = table[query];
      for (const auto& h : hits) out.push_back(search_hit_from_json(h));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("malformed search fixture: ") + e.what());
  }
  return FixtureSearchClient(std::move(table));
}

FixtureSearchClient FixtureSearchClient::from_file(const std::filesystem::path& path) {
  try {
    return from_json(json::parse(read_file(path)));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidConfig, path.string() + ": " + e.what());
  }
}

std::vector<SearchHit> FixtureSearchClient::search(const std::string& query) {
  if (blank(query)) throw Error(ErrorCode::kEmptyQuery, "search query must not be empty");
  auto it = table_.find(query);
  return it == table_.end() ? std::vector<SearchHit>{} : it->second;
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::kSupported: return "supported";
    case Status::kUnsupported: return "unsupported";
    case Status::kNotApplicable: return "not_applicable";
  }
  return "not_applicable";
}

std::string_view to_string(Color c) {
  switch (c) {
    case Color::kBlue: return "blue";
    case Color::kRed: return "red";
    case Color::kNone: return "none";
  }
  return "none";
}

Status parse_status(std::string_view s) {
  if (s == "supported") return Status::kSupported;
  if (s == "unsupported") return Status::kUnsupported;
  if (s == "not_applicable") return Status::kNotApplicable;
  throw Error(ErrorCode::kInvalidArgument, "unknown highlight status '" + std::string(s) + "'");
}

Color color_for(Status s) {
  switch (s) {
    case Status::kSupported: return Color::kBlue;
    case Status::kUnsupported: return Color::kRed;
    case Status::kNotApplicable: return Color::kNone;
  }
  return Color::kNone;
}

bool highlight_consistent(const ClaimHighlight& h) {
  const bool supported = h.status == Status::kSupported;
  const bool unsupported = h.status == Status::kUnsupported;
  const bool none = h.status == Status::kNotApplicable;
  return supported == (h.color == Color::kBlue) && supported == !h.evidence.empty() &&
         unsupported == (h.color == Color::kRed) && unsupported == !h.recommended_query.empty() &&
         none == (h.color == Color::kNone) &&
         none == (h.evidence.empty() && h.recommended_query.empty());
}

DoubleCheckReport double_check(const std::string& response_id,
                               const std::vector<text::Claim>& claims, SearchClient& client,
                               const DoubleCheckConfig& config) {
  for (const auto& c : claims) {
    if (c.response_id != response_id) {
      throw Error(ErrorCode::kInvalidArgument,
                  "claim '" + c.id + "' does not belong to response '" + response_id + "'");
    }
  }

  std::vector<std::future<std::vector<SearchHit>>> searches(claims.size());
  for (std::size_t i = 0; i < claims.size(); ++i) {
    if (!claims[i].checkable) continue;
    searches[i] = std::async(std::launch::async,
                             [&client, query = claims[i].text] { return client.search(query); });
  }

  DoubleCheckReport report;
  report.response_id = response_id;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    const auto& claim = claims[i];
    ClaimHighlight h;
    h.claim_id = claim.id;
    if (!claim.checkable) {
      report.highlights.push_back(std::move(h));
      continue;
    }
    ++report.checkable_claims;

    std::vector<SearchHit> hits;
    try {
      hits = searches[i].get();
    } catch (const std::exception& e) {
      report.warnings.push_back(claim.id + ": " + e.what());
      report.highlights.push_back(std::move(h));
      continue;
    }

    for (const auto& hit : hits) {
      const double sim = text::similarity(claim.text, hit.snippet);
      h.best_similarity = std::max(h.best_similarity, sim);
      if (sim >= config.support_threshold) h.evidence.push_back(hit);
    }
    if (h.best_similarity >= config.support_threshold) {
      h.status = Status::kSupported;
      ++report.supported_claims;
    } else {
      h.status = Status::kUnsupported;
      h.recommended_query = claim.text;
    }
    h.color = color_for(h.status);
    report.highlights.push_back(std::move(h));
  }
  report.coverage = report.checkable_claims == 0
                        ? 0.0
                        : static_cast<double>(report.supported_claims) /
                              static_cast<double>(report.checkable_claims);
  report.passed = report.coverage >= config.pass_threshold;
  return report;
}

std::string guidance_message(const DoubleCheckReport& report) {
  std::size_t red = 0;
  for (const auto& h : report.highlights) red += h.status == Status::kUnsupported;
  std::string msg = std::to_string(report.supported_claims) + " of " +
                    std::to_string(report.checkable_claims) +
                    " checkable claims have similar content on the web (blue)";
  if (red > 0) msg += "; " + std::to_string(red) + " found no match (red), search further";
  if (!report.warnings.empty()) {
    msg += "; " + std::to_string(report.warnings.size()) + " could not be searched";
  }
  return msg + ".";
}

json to_json(const SearchHit& hit) {
  return json{{"url", hit.url}, {"title", hit.title}, {"snippet", hit.snippet}};
}

SearchHit search_hit_from_json(const json& j) {
  SearchHit hit{j.at("url").get<std::string>(), j.value("title", std::string{}),
                j.value("snippet", std::string{})};
  if (hit.url.empty()) throw Error(ErrorCode::kInvalidConfig, "search hit url must not be empty");
  return hit;
}

json to_json(const DoubleCheckReport& report) {
  json highlights = json::array();
  for (const auto& h : report.highlights) {
    json evidence = json::array();
    for (const auto& e : h.evidence) evidence.push_back(to_json(e));
    highlights.push_back({{"claim_id", h.claim_id},
                          {"status", to_string(h.status)},
                          {"color", to_string(h.color)},
                          {"evidence", evidence},
                          {"recommended_query", h.recommended_query},
                          {"best_similarity", h.best_similarity}});
  }
  return json{{"response_id", report.response_id},
              {"highlights", highlights},
              {"checkable_claims", report.checkable_claims},
              {"supported_claims", report.supported_claims},
              {"coverage", report.coverage},
              {"passed", report.passed},
              {"warnings", report.warnings}};
}

DoubleCheckReport double_check_report_from_json(const json& j) {
  DoubleCheckReport r;
  r.response_id = j.at("response_id").get<std::string>();
  for (const auto& h : j.at("highlights")) {
    ClaimHighlight out;
    out.claim_id = h.at("claim_id").get<std::string>();
    out.status = parse_status(h.at("status").get<std::string>());
    out.color = color_for(out.status);
    for (const auto& e : h.at("evidence")) out.evidence.push_back(search_hit_from_json(e));
    out.recommended_query = h.at("recommended_query").get<std::string>();
    out.best_similarity = h.at("best_similarity").get<double>();
    r.highlights.push_back(std::move(out));
  }
  r.checkable_claims = j.at("checkable_claims").get<std::size_t>();
  r.supported_claims = j.at("supported_claims").get<std::size_t>();
  r.coverage = j.at("coverage").get<double>();
  r.passed = j.at("passed").get<bool>();
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

}  // namespace twai::double_check
