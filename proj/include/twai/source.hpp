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
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "twai/text.hpp"
#include "twai/util.hpp"

// Corpus-grounded verification: ingest internal research documents, index
// them, and cite corpus chunks that match response claims.
namespace twai::source {

struct CorpusDocument {
  std::string doc_id;
  std::string title;
  std::string body;
  Timestamp ingested_at{};
  std::map<std::string, std::string> metadata;

  friend bool operator==(const CorpusDocument&, const CorpusDocument&) = default;
};

struct Chunk {
  std::string doc_id;
  std::size_t seq = 0;
  std::string text;
  std::size_t token_count = 0;
  /// Byte range of the chunk inside the document body.
  text::Span span;
};

struct SourceConfig {
  std::size_t max_chunk_tokens = 200;
  std::size_t overlap_tokens = 40;
  /// Minimum similarity for a citation (tau_source).
  double citation_threshold = 0.5;
  /// Minimum coverage for passed (theta_source_pass).
  double pass_threshold = 0.8;
  std::size_t top_k = 5;
};

/// Splits body into windows of at most max_chunk_tokens tokens, consecutive
/// windows sharing overlap_tokens tokens. Throws kInvalidConfig when
/// overlap >= max.
std::vector<Chunk> chunk_document(const std::string& doc_id, std::string_view body,
                                  const SourceConfig& config);

struct RetrievalHit {
  std::string doc_id;
  std::size_t seq = 0;
  std::string text;
  double similarity = 0.0;
};

struct SourceCitation {
  std::string claim_id;
  std::string doc_id;
  std::size_t chunk_seq = 0;
  double similarity = 0.0;

  friend bool operator==(const SourceCitation&, const SourceCitation&) = default;
};

struct SourceVerification {
  std::string response_id;
  std::vector<SourceCitation> citations;
  std::size_t checkable_claims = 0;
  std::size_t matched_claims = 0;
  /// matched / checkable, 0 when nothing is checkable.
  double coverage = 0.0;
  bool passed = false;
};

/// Inverted token index with exact cosine scoring. Many readers, one writer.
class SourceIndex {
 public:
  explicit SourceIndex(SourceConfig config = {});

  /// Returns the number of chunks created.
  std::size_t ingest(CorpusDocument doc);

  /// Exactly min(k, chunk_count()) hits ordered by similarity desc, then
  /// (doc_id, seq) asc. Throws kEmptyIndex / kInvalidArgument (k == 0).
  std::vector<RetrievalHit> retrieve(std::string_view query, std::size_t k) const;

  /// Claims must all belong to response_id. Throws kEmptyIndex.
  SourceVerification verify(const std::string& response_id,
                            const std::vector<text::Claim>& claims) const;

  /// Human-readable summary naming the best-matching document and an excerpt.
  std::string guidance_message(const SourceVerification& result) const;

  std::size_t chunk_count() const;
  std::size_t document_count() const;
  bool contains(const std::string& doc_id) const;
  std::optional<CorpusDocument> document(const std::string& doc_id) const;
  /// Sorted by doc_id.
  std::vector<CorpusDocument> documents() const;
  std::vector<Chunk> chunks() const;
  const SourceConfig& config() const { return config_; }

 private:
  struct Posting {
    std::uint32_t chunk;
    std::uint32_t tf;
  };

  std::vector<RetrievalHit> retrieve_locked(std::string_view query, std::size_t k) const;

  SourceConfig config_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, CorpusDocument> docs_;
  std::vector<Chunk> chunks_;
  std::vector<std::uint64_t> chunk_norm_sq_;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
};

nlohmann::json to_json(const CorpusDocument& doc);
CorpusDocument corpus_document_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SourceVerification& v);
SourceVerification source_verification_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RetrievalHit& hit);

}  // namespace twai::source
