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

#include "twai/source.hpp"

#include <algorithm>
#include <mutex>

#include "twai/errors.hpp"

namespace twai::source {

using nlohmann::json;

std::vector<Chunk> chunk_document(const std::string& doc_id, std::string_view body,
                                  const SourceConfig& config) {
  if (config.max_chunk_tokens == 0 || config.overlap_tokens >= config.max_chunk_tokens) {
    throw Error(ErrorCode::kInvalidConfig, "chunk overlap must be smaller than the chunk size");
  }
  const auto tokens = text::tokenize_with_spans(body);
  const std::size_t stride = config.max_chunk_tokens - config.overlap_tokens;
  std::vector<Chunk> out;
  for (std::size_t start = 0; start < tokens.size(); start += stride) {
    const std::size_t end = std::min(start + config.max_chunk_tokens, tokens.size());
    const auto begin_byte = tokens[start].span.begin;
    const auto end_byte = tokens[end - 1].span.end;
    out.push_back(Chunk{doc_id, out.size(),
                        std::string(body.substr(begin_byte, end_byte - begin_byte)), end - start,
                        {begin_byte, end_byte}});
    if (end == tokens.size()) break;
  }
  return out;
}

SourceIndex::SourceIndex(SourceConfig config) : config_(config) {
  if (config_.overlap_tokens >= config_.max_chunk_tokens) {
    throw Error(ErrorCode::kInvalidConfig, "chunk overlap must be smaller than the chunk size");
  }
  if (config_.top_k == 0) throw Error(ErrorCode::kInvalidConfig, "top_k must be positive");
}

std::size_t SourceIndex::ingest(CorpusDocument doc) {
  if (doc.doc_id.empty()) throw Error(ErrorCode::kInvalidArgument, "doc_id must not be empty");
  auto chunks = chunk_document(doc.doc_id, doc.body, config_);
  if (chunks.empty()) {
    throw Error(ErrorCode::kEmptyDocument, "document '" + doc.doc_id + "' has no text");
  }

  std::unique_lock lock(mutex_);
  if (docs_.contains(doc.doc_id)) {
    throw Error(ErrorCode::kDuplicateDocument, "document '" + doc.doc_id + "' already ingested");
  }
  for (auto& chunk : chunks) {
    const auto index = static_cast<std::uint32_t>(chunks_.size());
    const auto tv = text::term_vector(chunk.text);
    for (const auto& [term, tf] : tv.terms) postings_[term].push_back({index, tf});
    chunk_norm_sq_.push_back(tv.norm_sq);
    chunks_.push_back(std::move(chunk));
  }
  const auto count = chunks.size();
  auto id = doc.doc_id;
  docs_.emplace(std::move(id), std::move(doc));
  return count;
}

std::vector<RetrievalHit> SourceIndex::retrieve(std::string_view query, std::size_t k) const {
  std::shared_lock lock(mutex_);
  return retrieve_locked(query, k);
}

std::vector<RetrievalHit> SourceIndex::retrieve_locked(std::string_view query,
                                                       std::size_t k) const {
  if (chunks_.empty()) throw Error(ErrorCode::kEmptyIndex, "the corpus index is empty");
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");

  const auto q = text::term_vector(query);
  std::vector<std::uint64_t> dots(chunks_.size(), 0);
  for (const auto& [term, qtf] : q.terms) {
    auto it = postings_.find(term);
    if (it == postings_.end()) continue;
    for (const auto& p : it->second) dots[p.chunk] += static_cast<std::uint64_t>(qtf) * p.tf;
  }

  std::vector<double> scores(chunks_.size());
  for (std::size_t i = 0; i < chunks_.size(); ++i) {
    scores[i] = text::cosine_from_counts(dots[i], q.norm_sq, chunk_norm_sq_[i]);
  }

  std::vector<std::uint32_t> order(chunks_.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto n = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(),
                    [&](std::uint32_t a, std::uint32_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      if (chunks_[a].doc_id != chunks_[b].doc_id) {
                        return chunks_[a].doc_id < chunks_[b].doc_id;
                      }
                      return chunks_[a].seq < chunks_[b].seq;
                    });

  std::vector<RetrievalHit> hits;
  hits.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = chunks_[order[i]];
    hits.push_back(RetrievalHit{c.doc_id, c.seq, c.text, scores[order[i]]});
  }
  return hits;
}

SourceVerification SourceIndex::verify(const std::string& response_id,
                                       const std::vector<text::Claim>& claims) const {
  for (const auto& c : claims) {
    if (c.response_id != response_id) {
      throw Error(ErrorCode::kInvalidArgument,
                  "claim '" + c.id + "' does not belong to response '" + response_id + "'");
    }
  }
  std::shared_lock lock(mutex_);
  if (chunks_.empty()) throw Error(ErrorCode::kEmptyIndex, "the corpus index is empty");

  SourceVerification result;
  result.response_id = response_id;
  for (const auto& claim : claims) {
    if (!claim.checkable) continue;
    ++result.checkable_claims;
    bool matched = false;
    for (const auto& hit : retrieve_locked(claim.text, config_.top_k)) {
      if (hit.similarity < config_.citation_threshold) break;
      result.citations.push_back(SourceCitation{claim.id, hit.doc_id, hit.seq, hit.similarity});
      matched = true;
    }
    if (matched) ++result.matched_claims;
  }
  result.coverage = result.checkable_claims == 0
                        ? 0.0
                        : static_cast<double>(result.matched_claims) /
                              static_cast<double>(result.checkable_claims);
  result.passed = result.coverage >= config_.pass_threshold;
  return result;
}

std::string SourceIndex::guidance_message(const SourceVerification& result) const {
  std::string msg = std::to_string(result.matched_claims) + " of " +
                    std::to_string(result.checkable_claims) +
                    " checkable claims match internal research";
  if (result.citations.empty()) return msg + ".";

  const auto best = std::max_element(
      result.citations.begin(), result.citations.end(),
      [](const auto& a, const auto& b) { return a.similarity < b.similarity; });
  std::shared_lock lock(mutex_);
  auto doc = docs_.find(best->doc_id);
  if (doc == docs_.end()) return msg + ".";
  std::string excerpt;
  for (const auto& c : chunks_) {
    if (c.doc_id == best->doc_id && c.seq == best->chunk_seq) {
      excerpt = c.text.size() > 160 ? c.text.substr(0, 157) + "..." : c.text;
      break;
    }
  }
  return msg + ". Best match: \"" + doc->second.title + "\": " + excerpt;
}

std::size_t SourceIndex::chunk_count() const {
  std::shared_lock lock(mutex_);
  return chunks_.size();
}

std::size_t SourceIndex::document_count() const {
  std::shared_lock lock(mutex_);
  return docs_.size();
}

bool SourceIndex::contains(const std::string& doc_id) const {
  std::shared_lock lock(mutex_);
  return docs_.contains(doc_id);
}

std::optional<CorpusDocument> SourceIndex::document(const std::string& doc_id) const {
  std::shared_lock lock(mutex_);
  auto it = docs_.find(doc_id);
  if (it == docs_.end()) return std::nullopt;
  return it->second;
}

std::vector<CorpusDocument> SourceIndex::documents() const {
  std::shared_lock lock(mutex_);
  std::vector<CorpusDocument> out;
  for (const auto& [id, doc] : docs_) out.push_back(doc);
  return out;
}

std::vector<Chunk> SourceIndex::chunks() const {
  std::shared_lock lock(mutex_);
  return chunks_;
}

json to_json(const CorpusDocument& doc) {
  return json{{"doc_id", doc.doc_id},
              {"title", doc.title},
              {"body", doc.body},
              {"ingested_at", format_timestamp(doc.ingested_at)},
              {"metadata", doc.metadata}};
}

CorpusDocument corpus_document_from_json(const json& j) {
  CorpusDocument doc;
  doc.doc_id = j.at("doc_id").get<std::string>();
  doc.title = j.value("title", doc.doc_id);
  doc.body = j.at("body").get<std::string>();
  doc.ingested_at = j.contains("ingested_at")
                        ? parse_timestamp(j.at("ingested_at").get<std::string>())
                        : now_utc();
  if (j.contains("metadata")) {
    for (const auto& [k, v] : j.at("metadata").items()) {
      doc.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
  }
  return doc;
}

json to_json(const SourceVerification& v) {
  json citations = json::array();
  for (const auto& c : v.citations) {
    citations.push_back({{"claim_id", c.claim_id},
                         {"doc_id", c.doc_id},
                         {"chunk_seq", c.chunk_seq},
                         {"similarity", c.similarity}});
  }
  return json{{"response_id", v.response_id},     {"citations", citations},
              {"checkable_claims", v.checkable_claims}, {"matched_claims", v.matched_claims},
              {"coverage", v.coverage},           {"passed", v.passed}};
}

SourceVerification source_verification_from_json(const json& j) {
  SourceVerification v;
  v.response_id = j.at("response_id").get<std::string>();
  for (const auto& c : j.at("citations")) {
    v.citations.push_back(SourceCitation{c.at("claim_id").get<std::string>(),
                                         c.at("doc_id").get<std::string>(),
                                         c.at("chunk_seq").get<std::size_t>(),
                                         c.at("similarity").get<double>()});
  }
  v.checkable_claims = j.at("checkable_claims").get<std::size_t>();
  v.matched_claims = j.at("matched_claims").get<std::size_t>();
  v.coverage = j.at("coverage").get<double>();
  v.passed = j.at("passed").get<bool>();
  return v;
}

json to_json(const RetrievalHit& hit) {
  return json{{"doc_id", hit.doc_id},
              {"seq", hit.seq},
              {"text", hit.text},
              {"similarity", hit.similarity}};
}

}  // namespace twai::source
