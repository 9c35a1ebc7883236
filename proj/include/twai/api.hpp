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

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "twai/errors.hpp"
#include "twai/workbench.hpp"

namespace twai {

/// {"error": {"code": ..., "message": ...}}
nlohmann::json error_body(ErrorCode code, const std::string& message);
/// The full code table: [{code, http_status}], in declaration order.
nlohmann::json error_table();

/// JSON-over-HTTP front end for a Workbench. Endpoints (all under /api):
///
///   GET  /health                                    liveness
///   GET  /errors                                    error code table
///   GET  /providers                                 registered providers
///   GET  /sessions                    POST /sessions {title}
///   GET  /sessions/:id
///   GET  /sessions/:id/turns/:index
///   POST /sessions/:id/prompts        {prompt, providers[]}
///   POST /sessions/:id/mode           {mode}
///   GET  /sessions/:id/library        POST /sessions/:id/library {action, ...}
///   POST /sessions/:id/verifications/source        {response_id, async?}
///   POST /sessions/:id/verifications/double-check  {response_id, async?}
///   POST /sessions/:id/verifications/compare       {prompt, providers[] | turn, async?}
///   GET  /sessions/:id/verifications
///   GET  /sessions/:id/decision-table   (?format=text for a plain table)
///   POST /sessions/:id/decisions      {response_id, rationale}
///   GET  /sessions/:id/export         gzip archive
///   POST /archives                    gzip archive body -> {session_id}
///   GET  /corpus                      POST /corpus {doc_id, title, body, metadata}
///   GET  /corpus/search?q=&k=
///   POST /scorecard/entries           GET /scorecard/entries
///   GET  /scorecard/tools/:tool       GET /scorecard/compare?a=&b=
///   GET  /help/:mode                  GET /metrics
///   GET  /jobs/:id                    status of an async verification
class ApiServer {
 public:
  explicit ApiServer(Workbench& workbench);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  /// Throws kPortInUse when the address cannot be bound.
  void bind(const std::string& host, int port);
  /// Binds an ephemeral port and returns it.
  int bind_any(const std::string& host);
  /// Blocks until stop().
  void listen();
  void stop();
  /// Blocks until the server accepts connections.
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace twai
