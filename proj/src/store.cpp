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

#include "twai/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>
#include <zlib.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>
#include <set>

#include "twai/errors.hpp"

namespace twai::store {

using nlohmann::json;

std::string_view to_string(RecordKind kind) {
  switch (kind) {
    case RecordKind::kSession: return "session";
    case RecordKind::kTurn: return "turn";
    case RecordKind::kVerification: return "verification";
    case RecordKind::kDecision: return "decision";
    case RecordKind::kScorecard: return "scorecard";
    case RecordKind::kCorpusDoc: return "corpus_doc";
  }
  return "session";
}

RecordKind parse_kind(std::string_view s) {
  for (auto k : kAllKinds) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorCode::kCorruptArchive, "unknown record kind '" + std::string(s) + "'");
}

json to_json(const StoreRecord& r) {
  return json{{"kind", to_string(r.kind)},
              {"id", r.id},
              {"schema_version", r.schema_version},
              {"payload", r.payload}};
}

StoreRecord store_record_from_json(const json& j) {
  StoreRecord r;
  r.kind = parse_kind(j.at("kind").get<std::string>());
  r.id = j.at("id").get<std::string>();
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version < 1 || r.schema_version > kSchemaVersion) {
    throw Error(ErrorCode::kVersionUnsupported,
                "record schema_version " + std::to_string(r.schema_version) + " is not supported");
  }
  r.payload = j.at("payload");
  return r;
}

// --- archive encoding ----------------------------------------------------------

namespace {

std::string gzip(std::string_view data) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(ErrorCode::kInternal, "deflateInit2 failed");
  }
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  std::string out;
  char buf[16384];
  int rc;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof(buf);
    rc = deflate(&zs, Z_FINISH);
    out.append(buf, sizeof(buf) - zs.avail_out);
  } while (rc == Z_OK);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorCode::kInternal, "deflate failed");
  return out;
}

std::string gunzip(std::string_view data) {
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 16) != Z_OK) throw Error(ErrorCode::kInternal, "inflateInit2 failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  zs.avail_in = static_cast<uInt>(data.size());
  std::string out;
  char buf[16384];
  int rc;
  do {
    zs.next_out = reinterpret_cast<Bytef*>(buf);
    zs.avail_out = sizeof(buf);
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw Error(ErrorCode::kCorruptArchive, "archive is not a valid gzip stream");
    }
    out.append(buf, sizeof(buf) - zs.avail_out);
  } while (rc != Z_STREAM_END);
  inflateEnd(&zs);
  return out;
}

std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < s.size()) {
    auto nl = s.find('\n', pos);
    if (nl == std::string_view::npos) nl = s.size();
    if (nl > pos) lines.push_back(s.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

}  // namespace

std::string encode_archive(const SessionArchive& archive) {
  const auto& m = archive.manifest;
  std::string text = json{{"format", m.format},
                          {"schema_version", m.schema_version},
                          {"created_at", format_timestamp(m.created_at)},
                          {"session_id", m.session_id},
                          {"record_counts", m.record_counts},
                          {"total_records", m.total_records}}
                         .dump();
  text += '\n';
  for (const auto& r : archive.records) {
    text += to_json(r).dump();
    text += '\n';
  }
  return gzip(text);
}

SessionArchive decode_archive(std::string_view bytes) {
  const auto text = gunzip(bytes);
  const auto lines = split_lines(text);
  if (lines.empty()) throw Error(ErrorCode::kCorruptArchive, "archive has no manifest");

  SessionArchive archive;
  try {
    const auto m = json::parse(lines[0]);
    auto& manifest = archive.manifest;
    manifest.format = m.at("format").get<std::string>();
    manifest.schema_version = m.at("schema_version").get<int>();
    manifest.created_at = parse_timestamp(m.at("created_at").get<std::string>());
    manifest.session_id = m.at("session_id").get<std::string>();
    manifest.record_counts = m.at("record_counts").get<std::map<std::string, std::size_t>>();
    manifest.total_records = m.at("total_records").get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kCorruptArchive, std::string("bad manifest: ") + e.what());
  }
  if (archive.manifest.format != "twai-archive") {
    throw Error(ErrorCode::kCorruptArchive, "not a twai archive");
  }
  if (archive.manifest.schema_version < 1 || archive.manifest.schema_version > kSchemaVersion) {
    throw Error(ErrorCode::kVersionUnsupported,
                "archive schema_version " + std::to_string(archive.manifest.schema_version) +
                    " is not supported");
  }

  std::map<std::string, std::size_t> counts;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    try {
      archive.records.push_back(store_record_from_json(json::parse(lines[i])));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kCorruptArchive,
                  "record " + std::to_string(i) + " is malformed: " + e.what());
    }
    ++counts[std::string(to_string(archive.records.back().kind))];
  }
  if (archive.records.size() != archive.manifest.total_records ||
      counts != archive.manifest.record_counts) {
    throw Error(ErrorCode::kCorruptArchive,
                "manifest lists " + std::to_string(archive.manifest.total_records) +
                    " records but archive holds " + std::to_string(archive.records.size()));
  }
  return archive;
}

// --- Store -----------------------------------------------------------------------

Store::Store(std::filesystem::path workspace, Access access)
    : workspace_(std::move(workspace)), access_(access) {
  std::filesystem::create_directories(workspace_ / "records");
  if (access_ == Access::kReadWrite) {
    const auto lock_path = workspace_ / ".lock";
    lock_fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
    if (lock_fd_ < 0) {
      throw Error(ErrorCode::kInternal, "cannot open " + lock_path.string() + ": " + std::strerror(errno));
    }
    if (::flock(lock_fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(lock_fd_);
      lock_fd_ = -1;
      throw Error(ErrorCode::kWorkspaceLocked,
                  "workspace " + workspace_.string() + " is locked by another writer");
    }
  }
  load_all(access_ == Access::kReadWrite);
  if (access_ == Access::kReadWrite && lines_on_disk_ > 2 * records_.size() + 64) compact();
}

Store::~Store() {
  if (lock_fd_ >= 0) {
    ::flock(lock_fd_, LOCK_UN);
    ::close(lock_fd_);
  }
}

std::filesystem::path Store::file_for(RecordKind kind) const {
  return workspace_ / "records" / (std::string(to_string(kind)) + ".jsonl");
}

void Store::load_all(bool repair) {
  lines_on_disk_ = 0;
  for (auto kind : kAllKinds) {
    const auto path = file_for(kind);
    if (!std::filesystem::exists(path)) continue;
    const auto contents = read_file(path);
    std::size_t pos = 0;
    while (pos < contents.size()) {
      const auto nl = contents.find('\n', pos);
      if (nl == std::string::npos) {
        // Torn tail from an interrupted append.
        if (repair) std::filesystem::resize_file(path, pos);
        break;
      }
      const std::string_view line(contents.data() + pos, nl - pos);
      pos = nl + 1;
      if (line.empty()) continue;
      StoreRecord r;
      try {
        r = store_record_from_json(json::parse(line));
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kInternal, path.string() + " is corrupt: " + e.what());
      }
      ++lines_on_disk_;
      Key key{r.kind, r.id};
      records_[std::move(key)] = std::move(r);
    }
  }
}

void Store::append_line(RecordKind kind, const std::string& line) {
  const auto path = file_for(kind);
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw Error(ErrorCode::kInternal, "cannot open " + path.string() + ": " + std::strerror(errno));
  }
  const off_t before = ::lseek(fd, 0, SEEK_END);
  const ssize_t n = ::write(fd, line.data(), line.size());
  if (n != static_cast<ssize_t>(line.size())) {
    // Drop the partial line so the next append starts on a clean boundary.
    const bool rolled_back = before >= 0 && ::ftruncate(fd, before) == 0;
    ::close(fd);
    throw Error(ErrorCode::kInternal, "short write to " + path.string() +
                                          (rolled_back ? "" : " (partial line left on disk)"));
  }
  ::close(fd);
}

void Store::save(const StoreRecord& record) {
  if (access_ != Access::kReadWrite) {
    throw Error(ErrorCode::kWorkspaceLocked, "store opened read-only");
  }
  if (record.schema_version < 1 || record.schema_version > kSchemaVersion) {
    throw Error(ErrorCode::kVersionUnsupported, "cannot save schema_version " +
                                                    std::to_string(record.schema_version));
  }
  if (record.id.empty()) throw Error(ErrorCode::kInvalidArgument, "record id must not be empty");
  std::unique_lock lock(mutex_);
  append_line(record.kind, to_json(record).dump() + "\n");
  ++lines_on_disk_;
  records_[{record.kind, record.id}] = record;
}

StoreRecord Store::load(RecordKind kind, const std::string& id) const {
  auto r = find(kind, id);
  if (!r) {
    throw Error(ErrorCode::kNotFound,
                std::string(to_string(kind)) + " '" + id + "' not found");
  }
  return std::move(*r);
}

std::optional<StoreRecord> Store::find(RecordKind kind, const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = records_.find({kind, id});
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

std::vector<StoreRecord> Store::all(RecordKind kind) const {
  std::shared_lock lock(mutex_);
  std::vector<StoreRecord> out;
  for (auto it = records_.lower_bound({kind, std::string{}});
       it != records_.end() && it->first.first == kind; ++it) {
    out.push_back(it->second);
  }
  return out;
}

std::size_t Store::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

SessionArchive Store::export_archive(const std::string& session_id) const {
  SessionArchive archive;
  archive.records.push_back(load(RecordKind::kSession, session_id));

  std::set<std::string> cited_docs;
  for (auto kind : {RecordKind::kTurn, RecordKind::kVerification, RecordKind::kDecision}) {
    for (auto& r : all(kind)) {
      if (r.payload.value("session_id", std::string{}) != session_id) continue;
      if (kind == RecordKind::kVerification && r.payload.value("criterion", "") == "source") {
        for (const auto& c : r.payload.at("result").at("citations")) {
          cited_docs.insert(c.at("doc_id").get<std::string>());
        }
      }
      archive.records.push_back(std::move(r));
    }
  }
  for (const auto& doc_id : cited_docs) {
    if (auto r = find(RecordKind::kCorpusDoc, doc_id)) archive.records.push_back(std::move(*r));
  }

  auto& m = archive.manifest;
  m.created_at = now_utc();
  m.session_id = session_id;
  m.total_records = archive.records.size();
  for (const auto& r : archive.records) ++m.record_counts[std::string(to_string(r.kind))];
  return archive;
}

std::string Store::import_archive(const SessionArchive& archive) {
  if (archive.manifest.schema_version > kSchemaVersion) {
    throw Error(ErrorCode::kVersionUnsupported, "archive schema version is newer than supported");
  }
  if (archive.records.size() != archive.manifest.total_records) {
    throw Error(ErrorCode::kCorruptArchive, "manifest record count does not match");
  }
  std::set<Key> seen;
  bool has_session = false;
  std::vector<const StoreRecord*> pending;
  for (const auto& r : archive.records) {
    if (!seen.insert({r.kind, r.id}).second) {
      throw Error(ErrorCode::kCorruptArchive, "archive repeats record '" + r.id + "'");
    }
    has_session = has_session ||
                  (r.kind == RecordKind::kSession && r.id == archive.manifest.session_id);
    auto existing = find(r.kind, r.id);
    if (!existing) {
      pending.push_back(&r);
    } else if (!(*existing == r)) {
      throw Error(ErrorCode::kDuplicateRecord, std::string(to_string(r.kind)) + " '" + r.id +
                                                   "' already exists with different content");
    } else if (r.kind == RecordKind::kSession) {
      throw Error(ErrorCode::kDuplicateRecord, "session '" + r.id + "' already exists");
    }
  }
  if (!has_session) throw Error(ErrorCode::kCorruptArchive, "archive holds no session record");
  for (const auto* r : pending) save(*r);
  return archive.manifest.session_id;
}

void Store::compact() {
  if (access_ != Access::kReadWrite) return;
  std::unique_lock lock(mutex_);
  std::map<RecordKind, std::string> files;
  for (const auto& [key, r] : records_) files[key.first] += to_json(r).dump() + "\n";
  for (auto kind : kAllKinds) {
    const auto path = file_for(kind);
    if (files.contains(kind)) {
      write_file_atomic(path, files[kind]);
    } else if (std::filesystem::exists(path)) {
      std::filesystem::remove(path);
    }
  }
  lines_on_disk_ = records_.size();
}

}  // namespace twai::store
