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

#include <random>
#include <set>

#include <gtest/gtest.h>

namespace twai::compare {
namespace {

ProviderClaims group(const std::string& provider, const std::string& text) {
  const auto rid = "rsp-" + provider;
  return ProviderClaims{provider, rid, text::segment_claims(rid, text)};
}

text::Claim raw_claim(const std::string& rid, std::size_t n, const std::string& text) {
  return text::Claim{rid + "#" + std::to_string(n), rid, text, {0, text.size()}, true};
}

void expect_partition(const std::vector<ProviderClaims>& groups,
                      const std::vector<ClaimCluster>& clusters, double threshold) {
  std::multiset<std::string> seen;
  std::map<std::string, std::string> text_of;
  for (const auto& g : groups) {
    for (const auto& c : g.claims) text_of[c.id] = c.text;
  }
  for (const auto& cl : clusters) {
    std::set<std::string> providers;
    for (const auto& m : cl.members) {
      seen.insert(m.claim_id);
      providers.insert(m.provider_id);
      EXPECT_GE(text::similarity(text_of.at(m.claim_id), cl.representative_text), threshold);
    }
    EXPECT_EQ(cl.support, providers.size());
    EXPECT_GE(cl.support, 1u);
    EXPECT_LE(cl.support, groups.size());
    EXPECT_EQ(cl.representative_text, text_of.at(cl.members.front().claim_id));
  }
  std::multiset<std::string> all;
  for (const auto& [id, _] : text_of) all.insert(id);
  EXPECT_EQ(seen, all);
}

TEST(Cluster, SingleClaim) {
  const auto clusters = cluster_claims({group("a", "Autoplay previews annoy many subscribers.")}, 0.6);
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_EQ(clusters[0].support, 1u);
}

TEST(Cluster, IdenticalClaimsFromTwoProviders) {
  const std::string s = "Autoplay previews annoy many subscribers.";
  const auto clusters = cluster_claims({group("a", s), group("b", s)}, 0.6);
  ASSERT_EQ(clusters.size(), 1u);
  EXPECT_EQ(clusters[0].support, 2u);
  EXPECT_EQ(clusters[0].members.size(), 2u);
}

TEST(Cluster, HalfSimilarClaimsStaySeparate) {
  ASSERT_DOUBLE_EQ(text::similarity("a b", "a c"), 0.5);
  std::vector<ProviderClaims> groups{{"p", "rp", {raw_claim("rp", 0, "a b")}},
                                     {"q", "rq", {raw_claim("rq", 0, "a c")}}};
  EXPECT_EQ(cluster_claims(groups, 0.6).size(), 2u);
  EXPECT_EQ(cluster_claims(groups, 0.5).size(), 1u);
}

TEST(Cluster, JoinsFirstMatchingClusterOnly) {
  // The third claim is similar to both founders (cosine 0.707); it joins the earlier one.
  std::vector<ProviderClaims> groups{
      {"p", "rp", {raw_claim("rp", 0, "a b c d"), raw_claim("rp", 1, "e f g h")}},
      {"q", "rq", {raw_claim("rq", 0, "a b c d e f g h")}}};
  const auto clusters = cluster_claims(groups, 0.6);
  ASSERT_EQ(clusters.size(), 2u);
  EXPECT_EQ(clusters[0].members, (std::vector<ClaimRef>{{"p", "rp#0"}, {"q", "rq#0"}}));
  EXPECT_EQ(clusters[0].support, 2u);
  EXPECT_EQ(clusters[1].support, 1u);
}

TEST(Report, IdenticalResponsesGiveFullCoverage) {
  const std::string text =
      "Autoplay previews start playing without user consent. Subtitle preferences reset whenever "
      "members change devices.";
  const auto report = build_report("p", {group("a", text), group("b", text)});
  for (const auto& c : report.clusters) EXPECT_EQ(c.support, 2u);
  for (const auto& [rid, cov] : report.per_response_coverage) {
    EXPECT_DOUBLE_EQ(cov, 1.0) << rid;
    EXPECT_TRUE(report.per_response_passed.at(rid));
  }
  EXPECT_EQ(report.common_cluster_ids.size(), 2u);
}

TEST(Report, DisjointResponsesGiveZeroCoverage) {
  const auto report = build_report(
      "p", {group("a", "Autoplay previews start playing without user consent."),
            group("b", "Quarterly subscriber revenue grew across several regions.")});
  EXPECT_TRUE(report.common_cluster_ids.empty());
  for (const auto& [rid, cov] : report.per_response_coverage) {
    EXPECT_EQ(cov, 0.0);
    EXPECT_FALSE(report.per_response_passed.at(rid));
  }
}

TEST(Report, PlantedSharedSentence) {
  const std::string shared = "Autoplay previews start playing without user consent.";
  std::vector<ProviderClaims> groups{
      group("a", "Household profiles clutter the account switcher badly. " + shared),
      group("b", shared + " Subtitle preferences reset whenever members change devices."),
      group("c", "Search ignores misspelled movie queries entirely. " + shared +
                     " Download quotas confuse travelling viewers often.")};
  // Brute-force pairwise check: only the planted sentence crosses the threshold.
  std::size_t cross_pairs = 0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      for (const auto& x : groups[i].claims) {
        for (const auto& y : groups[j].claims) {
          if (text::similarity(x.text, y.text) >= 0.6) {
            ++cross_pairs;
            EXPECT_EQ(x.text, shared);
            EXPECT_EQ(y.text, shared);
          }
        }
      }
    }
  }
  ASSERT_EQ(cross_pairs, 3u);

  const auto report = build_report("p", groups);
  std::size_t support3 = 0;
  for (const auto& c : report.clusters) {
    if (c.support == 3) {
      ++support3;
      EXPECT_EQ(c.representative_text, shared);
    } else {
      EXPECT_EQ(c.support, 1u);
    }
  }
  EXPECT_EQ(support3, 1u);
  ASSERT_EQ(report.common_clusters().size(), 1u);
  EXPECT_DOUBLE_EQ(report.per_response_coverage.at("rsp-a"), 0.5);
  EXPECT_DOUBLE_EQ(report.per_response_coverage.at("rsp-b"), 0.5);
  EXPECT_NEAR(report.per_response_coverage.at("rsp-c"), 1.0 / 3.0, 1e-15);
  EXPECT_TRUE(report.per_response_passed.at("rsp-a"));
  EXPECT_FALSE(report.per_response_passed.at("rsp-c"));
}

TEST(ClusterProperty, PartitionDeterminismSupportBound) {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> vocab(0, 12);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<ProviderClaims> groups;
    const int n_providers = 1 + static_cast<int>(rng() % 4);
    for (int p = 0; p < n_providers; ++p) {
      const auto rid = "r" + std::to_string(p);
      ProviderClaims g{"p" + std::to_string(p), rid, {}};
      const int n_claims = static_cast<int>(rng() % 5);
      for (int c = 0; c < n_claims; ++c) {
        std::string t;
        for (int w = 0; w < 4; ++w) t += "w" + std::to_string(vocab(rng)) + " ";
        g.claims.push_back(raw_claim(rid, c, t));
      }
      groups.push_back(std::move(g));
    }
    const auto clusters = cluster_claims(groups, 0.6);
    expect_partition(groups, clusters, 0.6);
    const auto again = cluster_claims(groups, 0.6);
    ASSERT_EQ(again.size(), clusters.size());
    for (std::size_t i = 0; i < again.size(); ++i) {
      EXPECT_EQ(again[i].members, clusters[i].members);
      EXPECT_EQ(again[i].cluster_id, i);
    }
  }
}

TEST(Json, RoundTrip) {
  const std::string shared = "Autoplay previews start playing without user consent.";
  auto report = build_report("p", {group("a", shared), group("b", shared)});
  report.failures.push_back({"c", {ErrorCode::kProviderUnavailable, "down"}});
  const auto j = to_json(report);
  EXPECT_EQ(j["common_clusters"].size(), 1u);
  EXPECT_EQ(to_json(compare_report_from_json(j)), j);
}

}  // namespace
}  // namespace twai::compare
