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

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "twai/util.hpp"

// Workspace persistence. Layout:
//
//   <workspace>/.lock                 advisory writer lock (flock)
//   <workspace>/records/<kind>.jsonl  one StoreRecord per line, last write wins
//
// A save appends one line with a single write(2). A crash mid-write can only
// leave a partial final line, which the next open discards, so readers see
// either the previous or the new record.
namespace twai::store {

inline constexpr int kSchemaVersion = 1;

enum class RecordKind { kSession, kTurn, kVerification, kDecision, kScorecard, kCorpusDoc };
inline constexpr RecordKind kAllKinds[] = {RecordKind::kSession,      RecordKind::kTurn,
                                           RecordKind::kVerification, RecordKind::kDecision,
                                           RecordKind::kScorecard,    RecordKind::kCorpusDoc};

std::string_view to_string(RecordKind kind);
RecordKind parse_kind(std::string_view s);

struct StoreRecord {
  RecordKind kind = RecordKind::kSession;
  std::string id;
  int schema_version = kSchemaVersion;
  nlohmann::json payload;

  friend bool operator==(const StoreRecord& a, const StoreRecord& b) {
    return a.kind == b.kind && a.id == b.id && a.schema_version == b.schema_version &&
           a.payload.dump() == b.payload.dump();
  }
};

nlohmann::json to_json(const StoreRecord& r);
/// Throws kVersionUnsupported for schema versions newer than kSchemaVersion.
StoreRecord store_record_from_json(const nlohmann::json& j);

struct ArchiveManifest {
  std::string format = "twai-archive";
  int schema_version = kSchemaVersion;
  Timestamp created_at{};
  std::string session_id;
  std::map<std::string, std::size_t> record_counts;
  std::size_t total_records = 0;
};

struct SessionArchive {
  ArchiveManifest manifest;
  std::vector<StoreRecord> records;
};

/// gzip stream: manifest line followed by one record per line.
std::string encode_archive(const SessionArchive& archive);
/// Throws kCorruptArchive on undecodable data or count mismatch,
/// kVersionUnsupported for newer schema versions.
SessionArchive decode_archive(std::string_view bytes);

class Store {
 public:
  enum class Access { kReadOnly, kReadWrite };

  /// Creates the workspace if needed. kReadWrite takes the workspace lock and
  /// throws kWorkspaceLocked when another writer holds it.
  explicit Store(std::filesystem::path workspace, Access access = Access::kReadWrite);
  ~Store();

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  /// Insert or replace by (kind, id).
  void save(const StoreRecord& record);
  /// Throws kNotFound.
  StoreRecord load(RecordKind kind, const std::string& id) const;
  std::optional<StoreRecord> find(RecordKind kind, const std::string& id) const;
  /// Ordered by id.
  std::vector<StoreRecord> all(RecordKind kind) const;
  std::size_t size() const;

  /// Every record belonging to the session, plus the corpus documents its
  /// source verifications cite.
  SessionArchive export_archive(const std::string& session_id) const;
  /// Keeps ids. Throws kDuplicateRecord if a record already exists with a
  /// different payload. Returns the session id.
  std::string import_archive(const SessionArchive& archive);

  /// Rewrites each kind file with only the live records.
  void compact();

  const std::filesystem::path& workspace() const { return workspace_; }
  bool writable() const { return access_ == Access::kReadWrite; }

 private:
  using Key = std::pair<RecordKind, std::string>;

  std::filesystem::path file_for(RecordKind kind) const;
  void append_line(RecordKind kind, const std::string& line);
  void load_all(bool repair);

  std::filesystem::path workspace_;
  Access access_;
  int lock_fd_ = -1;
  std::size_t lines_on_disk_ = 0;
  mutable std::shared_mutex mutex_;
  std::map<Key, StoreRecord> records_;
};

}  // namespace twai::store
