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

#include "twai/text.hpp"

#include <cmath>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"

namespace twai::text {
namespace {

using Tokens = std::vector<std::string>;

TEST(Tokenize, SplitsOnPunctuationAndLowercases) {
  EXPECT_EQ(tokenize("Netflix's UI is cluttered."), (Tokens{"netflix", "s", "ui", "is", "cluttered"}));
  EXPECT_EQ(tokenize(""), Tokens{});
  EXPECT_EQ(tokenize("A-B A-B"), (Tokens{"a", "b", "a", "b"}));
}

TEST(Tokenize, KeepsDigitsAndNonAsciiLetters) {
  EXPECT_EQ(tokenize("Top 10 titles, 2023!"), (Tokens{"top", "10", "titles", "2023"}));
  EXPECT_EQ(tokenize("Café ÜBER straße"), (Tokens{"café", "über", "straße"}));
  EXPECT_EQ(tokenize("\xe2\x80\x9cquoted\xe2\x80\x9d \xe2\x80\x94 dash\xe2\x80\xa6"), (Tokens{"quoted", "dash"}));
}

TEST(Tokenize, SpansPointIntoSource) {
  const std::string text = "  Hello, wide World ";
  for (const auto& t : tokenize_with_spans(text)) {
    std::string lowered;
    for (char c : text.substr(t.span.begin, t.span.end - t.span.begin)) {
      lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    EXPECT_EQ(lowered, t.text);
  }
}

TEST(Segment, TwoSentencesWithHandCountedSpans) {
  const std::string text = "The home screen is cluttered. Users cannot find titles.";
  const auto claims = segment_claims("r1", text);
  ASSERT_EQ(claims.size(), 2u);
  EXPECT_EQ(claims[0].span, (Span{0, 29}));
  EXPECT_EQ(claims[1].span, (Span{30, 55}));
  EXPECT_EQ(claims[0].text, "The home screen is cluttered.");
  EXPECT_EQ(claims[1].text, "Users cannot find titles.");
  EXPECT_EQ(claims[0].id, "r1#0");
  EXPECT_EQ(claims[1].id, "r1#1");
  // home, screen, cluttered: three content tokens.
  EXPECT_FALSE(claims[0].checkable);
  // users, cannot, find, titles
  EXPECT_TRUE(claims[1].checkable);
}

TEST(Segment, Interrogative) {
  const auto why = segment_claims("r", "Why?");
  ASSERT_EQ(why.size(), 1u);
  EXPECT_FALSE(why[0].checkable);

  const auto table6 = segment_claims(
      "r", "I'd like to redesign the UI of Netflix. Can you select one problem that I need to redesign?");
  ASSERT_EQ(table6.size(), 2u);
  EXPECT_EQ(table6[1].text, "Can you select one problem that I need to redesign?");
  EXPECT_FALSE(table6[1].checkable);
}

TEST(Segment, EllipsisDecimalsAndNewlines) {
  const auto claims = segment_claims("r", "Wait... the rating is 3.5 stars overall!\nNext line here");
  ASSERT_EQ(claims.size(), 2u);
  EXPECT_EQ(claims[0].text, "Wait... the rating is 3.5 stars overall!");
  EXPECT_EQ(claims[1].text, "Next line here");
}

TEST(Segment, WhitespaceOnlyYieldsNothing) {
  EXPECT_TRUE(segment_claims("r", " \n\t ").empty());
}

TEST(Checkability, Rules) {
  EXPECT_FALSE(classify_checkability("Maybe the search is slow."));
  EXPECT_TRUE(classify_checkability("The autoplay preview cannot be disabled in the mobile app."));
  EXPECT_FALSE(classify_checkability("Yes."));
  EXPECT_FALSE(classify_checkability("In my opinion autoplay previews annoy many subscribers."));
  EXPECT_FALSE(classify_checkability("I think autoplay previews annoy many subscribers."));
  EXPECT_TRUE(classify_checkability("Autoplay previews annoy many subscribers."));
  EXPECT_FALSE(classify_checkability("Do autoplay previews annoy many subscribers?"));
  // A hedge word later in the sentence is not a leading marker.
  EXPECT_TRUE(classify_checkability("Subscribers perhaps dislike autoplay previews."));
}

TEST(Checkability, CustomLexicon) {
  Lexicon lex({"autoplay"}, {"reportedly"});
  EXPECT_FALSE(classify_checkability("Reportedly autoplay previews annoy many subscribers.", lex));
  EXPECT_FALSE(classify_checkability("autoplay previews annoy subscribers", lex));
  EXPECT_TRUE(classify_checkability("Maybe previews annoy subscribers", lex));
}

TEST(Lexicon, ParseListSkipsBlanksAndComments) {
  EXPECT_EQ(Lexicon::parse_list("# header\nthe\n\n  A \nin my opinion\n"),
            (Tokens{"the", "A", "in my opinion"}));
  const Lexicon lex(Lexicon::parse_list("A\n"), {});
  EXPECT_TRUE(lex.is_stopword("a"));
}

TEST(Lexicon, FromFiles) {
  testing::TempDir dir;
  testing::write_text(dir / "stop.txt", "foo\nbar\n");
  testing::write_text(dir / "hedge.txt", "allegedly\n");
  const auto lex = Lexicon::from_files(dir / "stop.txt", dir / "hedge.txt");
  EXPECT_TRUE(lex.is_stopword("foo"));
  EXPECT_FALSE(lex.is_stopword("the"));
  EXPECT_TRUE(lex.starts_with_hedge({"allegedly", "x"}));
}

TEST(Similarity, Examples) {
  EXPECT_DOUBLE_EQ(similarity("the cat sat", "the cat sat"), 1.0);
  EXPECT_DOUBLE_EQ(similarity("alpha beta", "gamma delta"), 0.0);
  EXPECT_DOUBLE_EQ(similarity("a b", "a c"), 0.5);
  EXPECT_DOUBLE_EQ(similarity("", "a"), 0.0);
  EXPECT_DOUBLE_EQ(similarity("...", "..."), 0.0);
}

// Independent oracle: term frequencies in a std::map, floating dot product.
double oracle_cosine(const std::string& a, const std::string& b) {
  std::map<std::string, double> fa;
  std::map<std::string, double> fb;
  for (const auto& t : tokenize(a)) fa[t] += 1;
  for (const auto& t : tokenize(b)) fb[t] += 1;
  if (fa.empty() || fb.empty()) return 0.0;
  double dot = 0;
  double na = 0;
  double nb = 0;
  for (const auto& [t, v] : fa) {
    na += v * v;
    if (auto it = fb.find(t); it != fb.end()) dot += v * it->second;
  }
  for (const auto& [t, v] : fb) nb += v * v;
  return dot / std::sqrt(na * nb);
}

std::string random_text(std::mt19937& rng, std::size_t max_words) {
  static const std::vector<std::string> vocab = {"netflix", "ui", "home", "screen", "autoplay",
                                                 "the", "is", "search", "slow", "titles",
                                                 "users", "cannot", "find", "a", "menu"};
  static const std::vector<std::string> seps = {" ", " ", " ", ", ", ". ", "? ", "\n", "... "};
  std::uniform_int_distribution<std::size_t> n_words(0, max_words);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::uniform_int_distribution<std::size_t> sep(0, seps.size() - 1);
  std::string out;
  const auto n = n_words(rng);
  for (std::size_t i = 0; i < n; ++i) {
    auto w = vocab[pick(rng)];
    if (rng() % 5 == 0) w[0] = static_cast<char>(std::toupper(w[0]));
    out += w + seps[sep(rng)];
  }
  return out;
}

TEST(SimilarityProperty, MatchesOracleSymmetricBounded) {
  std::mt19937 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const auto a = random_text(rng, 12);
    const auto b = random_text(rng, 12);
    const double s = similarity(a, b);
    EXPECT_EQ(s, similarity(b, a)) << a << " | " << b;
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_NEAR(s, oracle_cosine(a, b), 1e-12);
    if (!tokenize(a).empty()) {
      EXPECT_EQ(similarity(a, a), 1.0);
    }
  }
}

TEST(SegmentProperty, SpansTileNonWhitespaceContent) {
  std::mt19937 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto text = random_text(rng, 25);
    const auto claims = segment_claims("r", text);
    std::vector<int> cover(text.size(), 0);
    std::size_t last_end = 0;
    for (std::size_t k = 0; k < claims.size(); ++k) {
      const auto& c = claims[k];
      ASSERT_LE(c.span.end, text.size());
      ASSERT_LT(c.span.begin, c.span.end);
      ASSERT_GE(c.span.begin, last_end);
      last_end = c.span.end;
      EXPECT_EQ(text.substr(c.span.begin, c.span.end - c.span.begin), c.text);
      EXPECT_EQ(c.id, "r#" + std::to_string(k));
      EXPECT_EQ(c.checkable, classify_checkability(c.text));
      for (auto p = c.span.begin; p < c.span.end; ++p) ++cover[p];
    }
    for (std::size_t p = 0; p < text.size(); ++p) {
      const bool space = std::isspace(static_cast<unsigned char>(text[p])) != 0;
      if (!space) {
        EXPECT_EQ(cover[p], 1) << "byte " << p << " of: " << text;
      }
    }
  }
}

TEST(CheckabilityProperty, FewerThanFourContentTokensNeverCheckable) {
  std::mt19937 rng(3);
  const auto& lex = Lexicon::defaults();
  for (int i = 0; i < 1000; ++i) {
    const auto text = random_text(rng, 8);
    std::size_t content = 0;
    for (const auto& t : tokenize(text)) content += lex.is_stopword(t) ? 0 : 1;
    if (content < 4) {
      EXPECT_FALSE(classify_checkability(text)) << text;
    }
  }
}

}  // namespace
}  // namespace twai::text
