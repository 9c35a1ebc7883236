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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

// Deterministic text primitives shared by every verifier. All offsets are
// UTF-8 byte offsets into the original text.
namespace twai::text {

/// Half-open [begin, end) byte range.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

/// A sentence-level verifiable unit of a response.
struct Claim {
  std::string id;
  std::string response_id;
  std::string text;
  Span span;
  bool checkable = false;

  friend bool operator==(const Claim&, const Claim&) = default;
};

struct Token {
  std::string text;
  Span span;
};

/// Stopwords and hedging markers. Content tokens are tokens not in the
/// stopword list; a claim that starts with a hedging marker is not checkable.
class Lexicon {
 public:
  /// Built-in English lists (version kDefaultVersion).
  static const Lexicon& defaults();
  static constexpr int kDefaultVersion = 1;

  Lexicon(std::vector<std::string> stopwords, std::vector<std::string> hedges);

  /// One entry per line, UTF-8. Blank lines and lines starting with '#' are skipped.
  static Lexicon from_files(const std::filesystem::path& stopwords,
                            const std::filesystem::path& hedges);
  static std::vector<std::string> parse_list(std::string_view contents);

  bool is_stopword(std::string_view token) const;
  /// True when the token sequence begins with any hedging marker.
  bool starts_with_hedge(const std::vector<std::string>& tokens) const;

  const std::vector<std::string>& stopwords() const { return stopword_list_; }
  const std::vector<std::string>& hedges() const { return hedge_list_; }

 private:
  std::vector<std::string> stopword_list_;
  std::vector<std::string> hedge_list_;
  std::unordered_set<std::string> stopwords_;
  std::vector<std::vector<std::string>> hedge_tokens_;
};

/// Maximal runs of letters/digits, lowercased.
std::vector<std::string> tokenize(std::string_view text);
std::vector<Token> tokenize_with_spans(std::string_view text);

bool classify_checkability(std::string_view claim_text,
                           const Lexicon& lexicon = Lexicon::defaults());

/// Splits at . ! ? and newline (a run of two or more dots, or U+2026, is an
/// ellipsis and does not split). Claim ids are "<response_id>#<ordinal>".
std::vector<Claim> segment_claims(std::string_view response_id, std::string_view text,
                                  const Lexicon& lexicon = Lexicon::defaults());

/// Sparse term-frequency vector with terms sorted ascending.
struct TermVector {
  std::vector<std::pair<std::string, std::uint32_t>> terms;
  std::uint64_t norm_sq = 0;

  bool empty() const { return terms.empty(); }
};

TermVector term_vector(const std::vector<std::string>& tokens);
inline TermVector term_vector(std::string_view text) { return term_vector(tokenize(text)); }

/// Cosine from exact integer dot product and squared norms; 0 if either norm is 0.
double cosine_from_counts(std::uint64_t dot, std::uint64_t norm_sq_a, std::uint64_t norm_sq_b);
double cosine(const TermVector& a, const TermVector& b);

/// Cosine similarity of term-frequency vectors over tokenize(a) and tokenize(b).
/// In [0,1], symmetric, 0 when either side has no tokens.
double similarity(std::string_view a, std::string_view b);

}  // namespace twai::text
