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

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twai/provider.hpp"
#include "twai/text.hpp"

// Cross-provider consensus: claims from several providers answering the same
// prompt are clustered lexically and shared content is surfaced.
namespace twai::compare {

struct ClaimRef {
  std::string provider_id;
  std::string claim_id;

  friend bool operator==(const ClaimRef&, const ClaimRef&) = default;
};

struct ClaimCluster {
  std::size_t cluster_id = 0;
  std::vector<ClaimRef> members;
  /// Text of the first member; never recomputed.
  std::string representative_text;
  /// Number of distinct providers among the members.
  std::size_t support = 0;
};

/// The claims of one provider's response, in span order.
struct ProviderClaims {
  std::string provider_id;
  std::string response_id;
  std::vector<text::Claim> claims;
};

struct CompareConfig {
  /// tau_cluster
  double cluster_threshold = 0.6;
  std::size_t min_support = 2;
  /// theta_cmp_pass
  double pass_threshold = 0.5;
};

/// Greedy single pass over providers in the given order and their claims in
/// span order: each claim joins the first cluster whose representative has
/// similarity >= threshold, otherwise it founds a new cluster.
std::vector<ClaimCluster> cluster_claims(const std::vector<ProviderClaims>& groups,
                                         double threshold);

struct ProviderFailure {
  std::string provider_id;
  ErrorInfo error;
};

struct CompareReport {
  std::string prompt;
  std::vector<std::string> provider_ids;
  std::vector<ClaimCluster> clusters;
  std::vector<std::size_t> common_cluster_ids;
  std::map<std::string, double> per_response_coverage;
  std::map<std::string, bool> per_response_passed;
  std::vector<ProviderFailure> failures;

  std::vector<ClaimCluster> common_clusters() const;
};

/// Clusters the groups and scores each response by the share of its
/// checkable claims that land in a cluster with support >= min_support.
CompareReport build_report(const std::string& prompt, const std::vector<ProviderClaims>& groups,
                           const CompareConfig& config = {});

nlohmann::json to_json(const CompareReport& report);
CompareReport compare_report_from_json(const nlohmann::json& j);

}  // namespace twai::compare
