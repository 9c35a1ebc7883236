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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <random>
#include <string>
#include <string_view>

namespace twai {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

Timestamp now_utc();
/// "YYYY-MM-DDTHH:MM:SS.mmmZ"
std::string format_timestamp(Timestamp ts);
/// Inverse of format_timestamp. Throws Error(kInvalidArgument) on malformed input.
Timestamp parse_timestamp(std::string_view text);

/// 64-bit FNV-1a. Stable across platforms and runs.
std::uint64_t stable_hash(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// Produces "<prefix>-<12 hex digits>" identifiers. Thread-safe.
class IdGenerator {
 public:
  IdGenerator();
  explicit IdGenerator(std::uint64_t seed);

  std::string next(std::string_view prefix);

 private:
  std::mutex mutex_;
  std::mt19937_64 rng_;
};

std::string read_file(const std::filesystem::path& path);
/// Writes via a sibling temp file and rename, so readers never observe a torn file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace twai
