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

#include "twai/errors.hpp"

namespace twai {

namespace {

struct CodeInfo {
  ErrorCode code;
  std::string_view name;
  int status;
};

constexpr CodeInfo kCodes[] = {
    {ErrorCode::kBadRequest, "BadRequest", 400},
    {ErrorCode::kInvalidArgument, "InvalidArgument", 400},
    {ErrorCode::kInvalidConfig, "InvalidConfig", 400},
    {ErrorCode::kDuplicateProvider, "DuplicateProvider", 409},
    {ErrorCode::kUnknownProvider, "UnknownProvider", 404},
    {ErrorCode::kProviderUnavailable, "ProviderUnavailable", 502},
    {ErrorCode::kEmptyPrompt, "EmptyPrompt", 400},
    {ErrorCode::kSessionNotFound, "SessionNotFound", 404},
    {ErrorCode::kWrongMode, "WrongMode", 409},
    {ErrorCode::kInvalidMode, "InvalidMode", 400},
    {ErrorCode::kNoResponses, "NoResponses", 409},
    {ErrorCode::kNoVerifications, "NoVerifications", 409},
    {ErrorCode::kUnknownResponse, "UnknownResponse", 404},
    {ErrorCode::kUnknownTemplate, "UnknownTemplate", 404},
    {ErrorCode::kDuplicateDocument, "DuplicateDocument", 409},
    {ErrorCode::kEmptyDocument, "EmptyDocument", 400},
    {ErrorCode::kEmptyIndex, "EmptyIndex", 409},
    {ErrorCode::kEmptyQuery, "EmptyQuery", 400},
    {ErrorCode::kSearchUnavailable, "SearchUnavailable", 502},
    {ErrorCode::kTooFewProviders, "TooFewProviders", 400},
    {ErrorCode::kCompareFailed, "CompareFailed", 502},
    {ErrorCode::kInvalidWeights, "InvalidWeights", 400},
    {ErrorCode::kNotInTable, "NotInTable", 409},
    {ErrorCode::kIncompleteRatings, "IncompleteRatings", 400},
    {ErrorCode::kDuplicateEntry, "DuplicateEntry", 409},
    {ErrorCode::kNoEntries, "NoEntries", 404},
    {ErrorCode::kNotFound, "NotFound", 404},
    {ErrorCode::kDuplicateRecord, "DuplicateRecord", 409},
    {ErrorCode::kVersionUnsupported, "VersionUnsupported", 422},
    {ErrorCode::kCorruptArchive, "CorruptArchive", 422},
    {ErrorCode::kWorkspaceLocked, "WorkspaceLocked", 423},
    {ErrorCode::kPortInUse, "PortInUse", 500},
    {ErrorCode::kJobNotFound, "JobNotFound", 404},
    {ErrorCode::kInternal, "Internal", 500},
};

const CodeInfo& info(ErrorCode code) {
  for (const auto& entry : kCodes) {
    if (entry.code == code) return entry;
  }
  return kCodes[std::size(kCodes) - 1];
}

}  // namespace

std::string_view code_name(ErrorCode code) { return info(code).name; }

int http_status(ErrorCode code) { return info(code).status; }

const std::vector<ErrorCode>& all_error_codes() {
  static const std::vector<ErrorCode> codes = [] {
    std::vector<ErrorCode> out;
    for (const auto& entry : kCodes) out.push_back(entry.code);
    return out;
  }();
  return codes;
}

}  // namespace twai
