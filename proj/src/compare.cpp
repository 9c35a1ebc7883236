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

#include "twai/compare.hpp"

#include <algorithm>
#include <set>

namespace twai::compare {

using nlohmann::json;

std::vector<ClaimCluster> cluster_claims(const std::vector<ProviderClaims>& groups,
                                         double threshold) {
  std::vector<ClaimCluster> clusters;
  std::vector<text::TermVector> reps;
  std::vector<std::set<std::string>> providers;
  for (const auto& group : groups) {
    for (const auto& claim : group.claims) {
      const auto tv = text::term_vector(claim.text);
      std::size_t target = clusters.size();
      for (std::size_t i = 0; i < clusters.size(); ++i) {
        if (text::cosine(tv, reps[i]) >= threshold) {
          target = i;
          break;
        }
      }
      if (target == clusters.size()) {
        clusters.push_back(ClaimCluster{clusters.size(), {}, claim.text, 0});
        reps.push_back(tv);
        providers.emplace_back();
      }
      clusters[target].members.push_back(ClaimRef{group.provider_id, claim.id});
      providers[target].insert(group.provider_id);
      clusters[target].support = providers[target].size();
    }
  }
  return clusters;
}

std::vector<ClaimCluster> CompareReport::common_clusters() const {
  std::vector<ClaimCluster> out;
  for (auto id : common_cluster_ids) out.push_back(clusters.at(id));
  return out;
}

CompareReport build_report(const std::string& prompt, const std::vector<ProviderClaims>& groups,
                           const CompareConfig& config) {
  CompareReport report;
  report.prompt = prompt;
  for (const auto& g : groups) report.provider_ids.push_back(g.provider_id);
  report.clusters = cluster_claims(groups, config.cluster_threshold);

  std::set<std::string> common_claims;
  for (const auto& c : report.clusters) {
    if (c.support < config.min_support) continue;
    report.common_cluster_ids.push_back(c.cluster_id);
    for (const auto& m : c.members) common_claims.insert(m.claim_id);
  }

  for (const auto& g : groups) {
    std::size_t checkable = 0;
    std::size_t shared = 0;
    for (const auto& claim : g.claims) {
      if (!claim.checkable) continue;
      ++checkable;
      shared += common_claims.contains(claim.id);
    }
    const double coverage =
        checkable == 0 ? 0.0 : static_cast<double>(shared) / static_cast<double>(checkable);
    report.per_response_coverage[g.response_id] = coverage;
    report.per_response_passed[g.response_id] = coverage >= config.pass_threshold;
  }
  return report;
}

namespace {

json cluster_json(const ClaimCluster& c) {
  json members = json::array();
  for (const auto& m : c.members) {
    members.push_back({{"provider_id", m.provider_id}, {"claim_id", m.claim_id}});
  }
  return json{{"cluster_id", c.cluster_id},
              {"members", members},
              {"representative_text", c.representative_text},
              {"support", c.support}};
}

}  // namespace

json to_json(const CompareReport& report) {
  json clusters = json::array();
  for (const auto& c : report.clusters) clusters.push_back(cluster_json(c));
  json common = json::array();
  for (const auto& c : report.common_clusters()) common.push_back(cluster_json(c));
  json failures = json::array();
  for (const auto& f : report.failures) {
    failures.push_back({{"provider_id", f.provider_id}, {"error", to_json(f.error)}});
  }
  return json{{"prompt", report.prompt},
              {"provider_ids", report.provider_ids},
              {"clusters", clusters},
              {"common_cluster_ids", report.common_cluster_ids},
              {"common_clusters", common},
              {"per_response_coverage", report.per_response_coverage},
              {"per_response_passed", report.per_response_passed},
              {"failures", failures}};
}

CompareReport compare_report_from_json(const json& j) {
  CompareReport r;
  r.prompt = j.at("prompt").get<std::string>();
  r.provider_ids = j.at("provider_ids").get<std::vector<std::string>>();
  for (const auto& c : j.at("clusters")) {
    ClaimCluster cluster;
    cluster.cluster_id = c.at("cluster_id").get<std::size_t>();
    for (const auto& m : c.at("members")) {
      cluster.members.push_back(
          ClaimRef{m.at("provider_id").get<std::string>(), m.at("claim_id").get<std::string>()});
    }
    cluster.representative_text = c.at("representative_text").get<std::string>();
    cluster.support = c.at("support").get<std::size_t>();
    r.clusters.push_back(std::move(cluster));
  }
  r.common_cluster_ids = j.at("common_cluster_ids").get<std::vector<std::size_t>>();
  r.per_response_coverage = j.at("per_response_coverage").get<std::map<std::string, double>>();
  r.per_response_passed = j.at("per_response_passed").get<std::map<std::string, bool>>();
  for (const auto& f : j.at("failures")) {
    r.failures.push_back(
        ProviderFailure{f.at("provider_id").get<std::string>(), error_info_from_json(f.at("error"))});
  }
  return r;
}

}  // namespace twai::compare
