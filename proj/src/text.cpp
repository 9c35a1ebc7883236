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

#include <algorithm>
#include <cmath>

#include "twai/errors.hpp"
#include "twai/util.hpp"

namespace twai::text {

namespace {

// Version 1 of the built-in lists. Changing either list changes
// checkability results, so bump Lexicon::kDefaultVersion when editing.
constexpr std::string_view kDefaultStopwords[] = {
    "a",     "an",    "the",   "and",   "or",    "but",   "if",    "of",    "to",
    "in",    "on",    "at",    "by",    "for",   "with",  "from",  "as",    "into",
    "is",    "are",   "was",   "were",  "be",    "been",  "being", "am",    "it",
    "its",   "this",  "that",  "these", "those", "i",     "me",    "my",    "we",
    "our",   "you",   "your",  "he",    "she",   "they",  "them",  "their", "his",
    "her",   "do",    "does",  "did",   "so",    "than",  "then",  "there", "here",
    "what",  "which", "who",   "can",   "will",  "would", "should", "could", "has",
    "have",  "had",   "s",     "t",     "d",     "ll",    "re",    "ve",    "m",
};

constexpr std::string_view kDefaultHedges[] = {
    "maybe",
    "perhaps",
    "i think",
    "in my opinion",
};

struct Decoded {
  char32_t cp;
  std::size_t len;
  bool valid;
};

Decoded decode_utf8(std::string_view s, std::size_t i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) return {b0, 1, true};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0, 1, false};
  }
  if (i + len > s.size()) return {0, 1, false};
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) return {0, 1, false};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len, true};
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool in_range(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
  }
  // Punctuation, symbols and spaces in the blocks most likely to show up in
  // model output. Everything else non-ASCII counts as a letter.
  return !(in_range(cp, 0x0080, 0x00BF) || cp == 0x00D7 || cp == 0x00F7 ||
           in_range(cp, 0x2000, 0x206F) || in_range(cp, 0x2190, 0x23FF) ||
           in_range(cp, 0x2500, 0x27BF) || in_range(cp, 0x2E00, 0x2E7F) ||
           in_range(cp, 0x3000, 0x303F) || in_range(cp, 0xFE30, 0xFE4F) ||
           in_range(cp, 0xFF00, 0xFF0F) || in_range(cp, 0xFF1A, 0xFF20) ||
           in_range(cp, 0xFF3B, 0xFF40) || in_range(cp, 0xFF5B, 0xFF65) || cp == 0xFEFF ||
           in_range(cp, 0x1F300, 0x1FAFF));
}

char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if (cp < 0x80) return cp;
  if (in_range(cp, 0x00C0, 0x00DE) && cp != 0x00D7) return cp + 32;
  if (in_range(cp, 0x0391, 0x03A9) && cp != 0x03A2) return cp + 32;
  if (in_range(cp, 0x0410, 0x042F)) return cp + 32;
  if (in_range(cp, 0x0400, 0x040F)) return cp + 80;
  return cp;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_digit(char c) { return c >= '0' && c <= '9'; }

}  // namespace

Lexicon::Lexicon(std::vector<std::string> stopwords, std::vector<std::string> hedges)
    : stopword_list_(std::move(stopwords)), hedge_list_(std::move(hedges)) {
  for (const auto& w : stopword_list_) {
    for (auto& tok : tokenize(w)) stopwords_.insert(std::move(tok));
  }
  for (const auto& h : hedge_list_) {
    auto toks = tokenize(h);
    if (!toks.empty()) hedge_tokens_.push_back(std::move(toks));
  }
}

const Lexicon& Lexicon::defaults() {
  static const Lexicon lexicon(
      std::vector<std::string>(std::begin(kDefaultStopwords), std::end(kDefaultStopwords)),
      std::vector<std::string>(std::begin(kDefaultHedges), std::end(kDefaultHedges)));
  return lexicon;
}

std::vector<std::string> Lexicon::parse_list(std::string_view contents) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    auto nl = contents.find('\n', pos);
    if (nl == std::string_view::npos) nl = contents.size();
    auto line = contents.substr(pos, nl - pos);
    while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
    while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
    if (!line.empty() && line.front() != '#') out.emplace_back(line);
    pos = nl + 1;
  }
  return out;
}

Lexicon Lexicon::from_files(const std::filesystem::path& stopwords,
                            const std::filesystem::path& hedges) {
  return Lexicon(parse_list(read_file(stopwords)), parse_list(read_file(hedges)));
}

bool Lexicon::is_stopword(std::string_view token) const {
  return stopwords_.contains(std::string(token));
}

bool Lexicon::starts_with_hedge(const std::vector<std::string>& tokens) const {
  for (const auto& hedge : hedge_tokens_) {
    if (hedge.size() <= tokens.size() && std::equal(hedge.begin(), hedge.end(), tokens.begin())) {
      return true;
    }
  }
  return false;
}

std::vector<Token> tokenize_with_spans(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  Token current;
  bool in_token = false;
  while (i < text.size()) {
    const auto d = decode_utf8(text, i);
    if (d.valid && is_word_char(d.cp)) {
      if (!in_token) {
        current = Token{{}, {i, i}};
        in_token = true;
      }
      append_utf8(current.text, to_lower(d.cp));
      current.span.end = i + d.len;
    } else if (in_token) {
      tokens.push_back(std::move(current));
      in_token = false;
    }
    i += d.len;
  }
  if (in_token) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  for (auto& t : tokenize_with_spans(text)) out.push_back(std::move(t.text));
  return out;
}

bool classify_checkability(std::string_view claim_text, const Lexicon& lexicon) {
  auto trimmed = claim_text;
  while (!trimmed.empty() && is_space(trimmed.back())) trimmed.remove_suffix(1);
  if (!trimmed.empty() && trimmed.back() == '?') return false;

  const auto tokens = tokenize(trimmed);
  if (lexicon.starts_with_hedge(tokens)) return false;
  const auto content = std::count_if(tokens.begin(), tokens.end(),
                                     [&](const auto& t) { return !lexicon.is_stopword(t); });
  return content >= 4;
}

std::vector<Claim> segment_claims(std::string_view response_id, std::string_view text,
                                  const Lexicon& lexicon) {
  std::vector<Claim> claims;
  auto emit = [&](std::size_t begin, std::size_t end) {
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    if (begin == end) return;
    Claim c;
    c.id = std::string(response_id) + "#" + std::to_string(claims.size());
    c.response_id = std::string(response_id);
    c.text = std::string(text.substr(begin, end - begin));
    c.span = {begin, end};
    c.checkable = classify_checkability(c.text, lexicon);
    claims.push_back(std::move(c));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      emit(start, i);
      start = ++i;
      continue;
    }
    if (!is_terminator(c)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    bool all_dots = true;
    while (j < text.size() && is_terminator(text[j])) {
      all_dots = all_dots && text[j] == '.';
      ++j;
    }
    const bool ellipsis = all_dots && j - i >= 2;
    // "3.5" is a number, not a sentence end.
    const bool decimal = c == '.' && j - i == 1 && i > 0 && is_digit(text[i - 1]) &&
                         j < text.size() && is_digit(text[j]);
    if (!ellipsis && !decimal) {
      emit(start, j);
      start = j;
    }
    i = j;
  }
  emit(start, text.size());
  return claims;
}

TermVector term_vector(const std::vector<std::string>& tokens) {
  std::vector<std::string> sorted = tokens;
  std::sort(sorted.begin(), sorted.end());
  TermVector tv;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const auto count = static_cast<std::uint32_t>(j - i);
    tv.norm_sq += static_cast<std::uint64_t>(count) * count;
    tv.terms.emplace_back(std::move(sorted[i]), count);
    i = j;
  }
  return tv;
}

double cosine_from_counts(std::uint64_t dot, std::uint64_t norm_sq_a, std::uint64_t norm_sq_b) {
  if (norm_sq_a == 0 || norm_sq_b == 0 || dot == 0) return 0.0;
  const double value = static_cast<double>(dot) /
                       std::sqrt(static_cast<double>(norm_sq_a) * static_cast<double>(norm_sq_b));
  return std::min(value, 1.0);
}

double cosine(const TermVector& a, const TermVector& b) {
  std::uint64_t dot = 0;
  auto ia = a.terms.begin();
  auto ib = b.terms.begin();
  while (ia != a.terms.end() && ib != b.terms.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += static_cast<std::uint64_t>(ia->second) * ib->second;
      ++ia;
      ++ib;
    }
  }
  return cosine_from_counts(dot, a.norm_sq, b.norm_sq);
}

double similarity(std::string_view a, std::string_view b) {
  return cosine(term_vector(a), term_vector(b));
}

}  // namespace twai::text
