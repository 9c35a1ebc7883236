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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twai {

/// Every failure the library can report. The string form returned by
/// code_name() is part of the HTTP and CLI contract and must not change.
enum class ErrorCode {
  kBadRequest,
  kInvalidArgument,
  kInvalidConfig,
  kDuplicateProvider,
  kUnknownProvider,
  kProviderUnavailable,
  kEmptyPrompt,
  kSessionNotFound,
  kWrongMode,
  kInvalidMode,
  kNoResponses,
  kNoVerifications,
  kUnknownResponse,
  kUnknownTemplate,
  kDuplicateDocument,
  kEmptyDocument,
  kEmptyIndex,
  kEmptyQuery,
  kSearchUnavailable,
  kTooFewProviders,
  kCompareFailed,
  kInvalidWeights,
  kNotInTable,
  kIncompleteRatings,
  kDuplicateEntry,
  kNoEntries,
  kNotFound,
  kDuplicateRecord,
  kVersionUnsupported,
  kCorruptArchive,
  kWorkspaceLocked,
  kPortInUse,
  kJobNotFound,
  kInternal,
};

std::string_view code_name(ErrorCode code);
int http_status(ErrorCode code);
/// All codes in declaration order.
const std::vector<ErrorCode>& all_error_codes();

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace twai
