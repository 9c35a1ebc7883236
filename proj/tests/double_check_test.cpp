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

#include <gtest/gtest.h>

#include "support.hpp"
#include "twai/errors.hpp"

namespace twai::double_check {
namespace {

const std::string kAutoplay = "Autoplay previews start playing without user consent.";

class ThrowingClient : public SearchClient {
 public:
  std::vector<SearchHit> search(const std::string&) override {
    throw Error(ErrorCode::kSearchUnavailable, "search backend down");
  }
};

TEST(FixtureClient, EchoesHitsInOrder) {
  auto client = FixtureSearchClient::from_file(testing::fixture("search.json"));
  const auto hits = client.search("netflix autoplay complaint");
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].url, "https://example.org/a");
  EXPECT_EQ(hits[1].url, "https://example.org/b");
  EXPECT_TRUE(client.search("not in fixture").empty());
  try {
    client.search("   ");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyQuery);
  }
}

TEST(FixtureClient, RejectsHitWithoutUrl) {
  EXPECT_THROW(FixtureSearchClient::from_json(
                   nlohmann::json{{"q", {{{"url", ""}, {"title", "t"}, {"snippet", "s"}}}}}),
               Error);
}

TEST(Status, ColorMappingAndNames) {
  EXPECT_EQ(color_for(Status::kSupported), Color::kBlue);
  EXPECT_EQ(color_for(Status::kUnsupported), Color::kRed);
  EXPECT_EQ(color_for(Status::kNotApplicable), Color::kNone);
  for (auto s : {Status::kSupported, Status::kUnsupported, Status::kNotApplicable}) {
    EXPECT_EQ(parse_status(to_string(s)), s);
  }
  EXPECT_EQ(to_string(Color::kBlue), "blue");
}

TEST(Highlight, ConsistencyPredicate) {
  ClaimHighlight h;
  EXPECT_TRUE(highlight_consistent(h));
  h.recommended_query = "x";
  EXPECT_FALSE(highlight_consistent(h));
  h = {"c", Status::kSupported, Color::kBlue, {{"u", "t", "s"}}, "", 1.0};
  EXPECT_TRUE(highlight_consistent(h));
  h.color = Color::kRed;
  EXPECT_FALSE(highlight_consistent(h));
  h = {"c", Status::kUnsupported, Color::kRed, {}, "q", 0.0};
  EXPECT_TRUE(highlight_consistent(h));
  h.evidence.push_back({"u", "t", "s"});
  EXPECT_FALSE(highlight_consistent(h));
}

TEST(DoubleCheck, ThreeOutcomes) {
  auto client = FixtureSearchClient::from_file(testing::fixture("search.json"));
  const auto claims = text::segment_claims(
      "r", kAutoplay + " The most critical problem is content discovery on the home screen. "
                       "Maybe users dislike ads.");
  ASSERT_EQ(claims.size(), 3u);
  const auto report = double_check("r", claims, client);
  ASSERT_EQ(report.highlights.size(), 3u);

  const auto& supported = report.highlights[0];
  EXPECT_EQ(supported.claim_id, "r#0");
  EXPECT_EQ(supported.status, Status::kSupported);
  EXPECT_EQ(supported.color, Color::kBlue);
  ASSERT_EQ(supported.evidence.size(), 1u);  // the unrelated hit falls below the threshold
  EXPECT_EQ(supported.evidence[0].url, "https://example.org/autoplay-complaints");
  EXPECT_DOUBLE_EQ(supported.best_similarity, 1.0);

  const auto& unsupported = report.highlights[1];
  EXPECT_EQ(unsupported.status, Status::kUnsupported);
  EXPECT_EQ(unsupported.color, Color::kRed);
  EXPECT_EQ(unsupported.recommended_query, claims[1].text);
  EXPECT_EQ(unsupported.best_similarity, 0.0);

  const auto& hedged = report.highlights[2];
  EXPECT_EQ(hedged.status, Status::kNotApplicable);
  EXPECT_EQ(hedged.color, Color::kNone);

  EXPECT_EQ(report.checkable_claims, 2u);
  EXPECT_EQ(report.supported_claims, 1u);
  EXPECT_DOUBLE_EQ(report.coverage, 0.5);
  EXPECT_FALSE(report.passed);
  for (const auto& h : report.highlights) EXPECT_TRUE(highlight_consistent(h));
}

TEST(DoubleCheck, SearchFailureBecomesNotApplicableWithWarning) {
  ThrowingClient client;
  const auto claims = text::segment_claims("r", kAutoplay);
  const auto report = double_check("r", claims, client);
  ASSERT_EQ(report.highlights.size(), 1u);
  EXPECT_EQ(report.highlights[0].status, Status::kNotApplicable);
  EXPECT_EQ(report.warnings.size(), 1u);
  EXPECT_TRUE(highlight_consistent(report.highlights[0]));
}

TEST(DoubleCheck, PassThresholdAndNoCheckableClaims) {
  FixtureSearchClient client({{kAutoplay, {{"https://x", "t", kAutoplay}}}});
  auto report = double_check("r", text::segment_claims("r", kAutoplay), client);
  EXPECT_DOUBLE_EQ(report.coverage, 1.0);
  EXPECT_TRUE(report.passed);

  report = double_check("r", text::segment_claims("r", "Why? Yes."), client);
  EXPECT_EQ(report.checkable_claims, 0u);
  EXPECT_EQ(report.coverage, 0.0);
  EXPECT_FALSE(report.passed);
}

TEST(DoubleCheck, RejectsForeignClaims) {
  FixtureSearchClient client;
  EXPECT_THROW(double_check("other", text::segment_claims("r", kAutoplay), client), Error);
}

TEST(DoubleCheck, ClientSubstitutionGivesSameReport) {
  auto a = FixtureSearchClient::from_file(testing::fixture("search.json"));
  FixtureSearchClient b({{kAutoplay, a.search(kAutoplay)}});
  const auto claims = text::segment_claims("r", kAutoplay + " Purple giraffes juggle lunar rocks.");
  EXPECT_EQ(to_json(double_check("r", claims, a)), to_json(double_check("r", claims, b)));
}

TEST(DoubleCheck, GuidanceAndJson) {
  auto client = FixtureSearchClient::from_file(testing::fixture("search.json"));
  const auto report = double_check("r", text::segment_claims("r", kAutoplay), client);
  EXPECT_FALSE(guidance_message(report).empty());
  const auto j = to_json(report);
  EXPECT_EQ(j["highlights"][0]["color"], "blue");
  EXPECT_EQ(to_json(double_check_report_from_json(j)), j);
}

}  // namespace
}  // namespace twai::double_check
