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

#include "twai/api.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include <httplib.h>

namespace twai {

using nlohmann::json;

json error_body(ErrorCode code, const std::string& message) {
  return json{{"error", {{"http_status", http_status(code)}, {"code", code_name(code)}, {"message", message}}}};
}

json error_table() {
  json out = json::array();
  for (auto code : all_error_codes()) {
    out.push_back({{"code", code_name(code)}, {"http_status", http_status(code)}});
  }
  return out;
}

namespace {

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json body;
  try {
    body = json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kBadRequest, std::string("request body is not JSON: ") + e.what());
  }
  if (!body.is_object()) throw Error(ErrorCode::kBadRequest, "request body must be a JSON object");
  return body;
}

std::string require_string(const json& body, const char* key) {
  if (!body.contains(key) || !body[key].is_string()) {
    throw Error(ErrorCode::kBadRequest, std::string("missing string field '") + key + "'");
  }
  return body[key].get<std::string>();
}

std::vector<std::string> require_strings(const json& body, const char* key) {
  if (!body.contains(key) || !body[key].is_array()) {
    throw Error(ErrorCode::kBadRequest, std::string("missing array field '") + key + "'");
  }
  std::vector<std::string> out;
  for (const auto& v : body[key]) {
    if (!v.is_string()) throw Error(ErrorCode::kBadRequest, std::string("'") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json summary_json(const SessionSummary& s) {
  return json{{"id", s.id},
              {"title", s.title},
              {"mode", to_string(s.mode)},
              {"created_at", format_timestamp(s.created_at)},
              {"turns", s.turns},
              {"verifications", s.verifications},
              {"decisions", s.decisions}};
}

// The workbench enforces the same gate; checking here keeps requests that
// would be rejected from reaching the providers or the search backend.
void require_api_mode(const Workbench& wb, const std::string& session_id,
                      std::initializer_list<Mode> allowed, std::string_view action) {
  const auto mode = wb.session(session_id).mode;
  if (std::find(allowed.begin(), allowed.end(), mode) != allowed.end()) return;
  throw Error(ErrorCode::kWrongMode,
              std::string(action) + " is not allowed in " + std::string(to_string(mode)) + " mode");
}

struct Job {
  std::string status = "running";
  json result;
  json error;
};

}  // namespace

struct ApiServer::Impl {
  Workbench& workbench;
  httplib::Server server;
  IdGenerator ids;

  std::mutex jobs_mutex;
  std::map<std::string, Job> jobs;
  std::vector<std::thread> workers;

  explicit Impl(Workbench& wb) : workbench(wb) {
    // httplib's default also sets SO_REUSEPORT, which lets a second server
    // share a busy port instead of failing.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    });
    routes();
  }

  ~Impl() {
    server.stop();
    for (auto& t : workers) {
      if (t.joinable()) t.join();
    }
  }

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  httplib::Server::Handler wrap(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res);
      } catch (const Error& e) {
        send_json(res, error_body(e.code(), e.what()), http_status(e.code()));
      } catch (const json::exception& e) {
        send_json(res, error_body(ErrorCode::kBadRequest, e.what()), 400);
      } catch (const std::exception& e) {
        send_json(res, error_body(ErrorCode::kInternal, e.what()), 500);
      }
    };
  }

  /// Runs fn now, or on a worker thread when the body asks for async.
  void maybe_async(const json& body, httplib::Response& res, std::function<json()> fn) {
    if (!body.value("async", false)) {
      send_json(res, fn());
      return;
    }
    const auto job_id = ids.next("job");
    {
      std::lock_guard lock(jobs_mutex);
      jobs[job_id] = Job{};
      workers.emplace_back([this, job_id, fn = std::move(fn)] {
        Job done;
        try {
          done.result = fn();
          done.status = "done";
        } catch (const Error& e) {
          done.status = "failed";
          done.error = error_body(e.code(), e.what())["error"];
        } catch (const std::exception& e) {
          done.status = "failed";
          done.error = error_body(ErrorCode::kInternal, e.what())["error"];
        }
        std::lock_guard lock(jobs_mutex);
        jobs[job_id] = std::move(done);
      });
    }
    send_json(res, {{"job_id", job_id}, {"status", "running"}}, 202);
  }

  void routes() {
    auto& s = server;
    auto& wb = workbench;

    s.Get("/api/health", wrap([](const httplib::Request&, httplib::Response& res) { send_json(res, {{"status", "ok"}}); }));
    s.Get("/api/errors", wrap([](const httplib::Request&, httplib::Response& res) { send_json(res, error_table()); }));
    s.Get("/api/providers", wrap([&wb](const httplib::Request&, httplib::Response& res) {
      json out = json::array();
      for (const auto& spec : wb.providers().specs()) {
        // endpoint_config may name credential variables but never holds secrets.
        out.push_back(to_json(spec));
      }
      send_json(res, out);
    }));

    // Sessions and generation mode.
    s.Get("/api/sessions", wrap([&wb](const httplib::Request&, httplib::Response& res) {
      json out = json::array();
      for (const auto& summary : wb.list_sessions()) out.push_back(summary_json(summary));
      send_json(res, out);
    }));
    s.Post("/api/sessions", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      send_json(res, to_json(wb.create_session(body.value("title", std::string{}))), 201);
    }));
    s.Get("/api/sessions/:id", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      send_json(res, to_json(wb.session(req.path_params.at("id"))));
    }));
    s.Get("/api/sessions/:id/turns/:index", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      const auto session = wb.session(req.path_params.at("id"));
      std::size_t index = 0;
      try {
        index = std::stoul(req.path_params.at("index"));
      } catch (const std::exception&) {
        throw Error(ErrorCode::kBadRequest, "turn index must be a number");
      }
      if (index >= session.turns.size()) {
        throw Error(ErrorCode::kNotFound, "turn " + std::to_string(index) + " not found");
      }
      send_json(res, to_json(session.turns[index]));
    }));
    s.Post("/api/sessions/:id/prompts", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      require_api_mode(wb, req.path_params.at("id"), {Mode::kGeneration}, "submitting a prompt");
      const auto turn = wb.submit_prompt(req.path_params.at("id"), body.value("prompt", std::string{}),
                                         require_strings(body, "providers"));
      send_json(res, to_json(turn), 201);
    }));
    s.Post("/api/sessions/:id/mode", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      const auto mode = parse_mode(require_string(body, "mode"));
      send_json(res, to_json(wb.switch_mode(req.path_params.at("id"), mode)));
    }));
    s.Get("/api/sessions/:id/library", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      send_json(res, to_json(wb.library(req.path_params.at("id"))));
    }));
    s.Post("/api/sessions/:id/library", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      const auto& sid = req.path_params.at("id");
      const auto action = require_string(body, "action");
      Library lib;
      if (action == "add_template") {
        lib = wb.add_template(sid, body.value("label", std::string{}), require_string(body, "body"));
      } else if (action == "remove_template") {
        lib = wb.remove_template(sid, require_string(body, "template_id"));
      } else if (action == "add_bookmark") {
        lib = wb.add_bookmark(sid, require_string(body, "response_id"),
                              body.value("label", std::string{}));
      } else if (action == "remove_bookmark") {
        lib = wb.remove_bookmark(sid, require_string(body, "bookmark_id"));
      } else if (action == "list") {
        lib = wb.library(sid);
      } else {
        throw Error(ErrorCode::kBadRequest, "unknown library action '" + action + "'");
      }
      send_json(res, to_json(lib));
    }));

    // Verification mode.
    s.Post("/api/sessions/:id/verifications/source", wrap([this, &wb](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      const auto sid = req.path_params.at("id");
      const auto rid = require_string(body, "response_id");
      require_api_mode(wb, sid, {Mode::kVerification}, "source verification");
      maybe_async(body, res, [&wb, sid, rid] {
        const auto v = wb.verify_source(sid, rid);
        return json{{"result", source::to_json(v)}, {"guidance", wb.source_guidance(v)}};
      });
    }));
    s.Post("/api/sessions/:id/verifications/double-check",
           wrap([this, &wb](const httplib::Request& req, httplib::Response& res) {
             const auto body = parse_body(req);
             const auto sid = req.path_params.at("id");
             const auto rid = require_string(body, "response_id");
             require_api_mode(wb, sid, {Mode::kVerification}, "double check");
             maybe_async(body, res, [&wb, sid, rid] {
               const auto r = wb.double_check(sid, rid);
               return json{{"result", double_check::to_json(r)},
                           {"guidance", double_check::guidance_message(r)}};
             });
           }));
    s.Post("/api/sessions/:id/verifications/compare", wrap([this, &wb](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      const auto sid = req.path_params.at("id");
      require_api_mode(wb, sid, {Mode::kGeneration, Mode::kVerification}, "compare");
      if (body.contains("turn")) {
        const auto turn = body.at("turn").get<std::size_t>();
        maybe_async(body, res, [&wb, sid, turn] {
          return json{{"result", compare::to_json(wb.compare_turn(sid, turn))}};
        });
        return;
      }
      const auto prompt = body.value("prompt", std::string{});
      const auto providers = require_strings(body, "providers");
      maybe_async(body, res, [&wb, sid, prompt, providers] {
        return json{{"result", compare::to_json(wb.run_compare(sid, prompt, providers))}};
      });
    }));
    s.Get("/api/sessions/:id/verifications", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      json out = json::array();
      for (const auto& v : wb.session(req.path_params.at("id")).verifications) {
        out.push_back(to_json(v));
      }
      send_json(res, out);
    }));

    // Decision mode.
    s.Get("/api/sessions/:id/decision-table", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      const auto table = wb.decision_table(req.path_params.at("id"));
      if (req.get_param_value("format") == "text") {
        res.set_content(decision::render_text(table), "text/plain");
        return;
      }
      send_json(res, decision::to_json(table));
    }));
    s.Post("/api/sessions/:id/decisions", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      const auto record = wb.record_decision(req.path_params.at("id"),
                                             require_string(body, "response_id"),
                                             body.value("rationale", std::string{}));
      send_json(res, decision::to_json(record), 201);
    }));

    // Archives.
    s.Get("/api/sessions/:id/export", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      res.set_content(store::encode_archive(wb.export_archive(req.path_params.at("id"))),
                      "application/gzip");
    }));
    s.Post("/api/archives", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      const auto sid = wb.import_archive(store::decode_archive(req.body));
      send_json(res, {{"session_id", sid}}, 201);
    }));

    // Corpus.
    s.Get("/api/corpus", wrap([&wb](const httplib::Request&, httplib::Response& res) {
      json out = json::array();
      for (const auto& d : wb.corpus().documents()) {
        out.push_back({{"doc_id", d.doc_id},
                       {"title", d.title},
                       {"ingested_at", format_timestamp(d.ingested_at)},
                       {"metadata", d.metadata}});
      }
      send_json(res, out);
    }));
    s.Post("/api/corpus", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      auto body = parse_body(req);
      require_string(body, "doc_id");
      if (!body.contains("body") || !body["body"].is_string()) {
        throw Error(ErrorCode::kBadRequest, "missing string field 'body'");
      }
      body.erase("ingested_at");
      const auto chunks = wb.ingest(source::corpus_document_from_json(body));
      send_json(res, {{"doc_id", body["doc_id"]}, {"chunks", chunks}}, 201);
    }));
    s.Get("/api/corpus/search", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      std::size_t k = 5;
      if (req.has_param("k")) {
        try {
          k = std::stoul(req.get_param_value("k"));
        } catch (const std::exception&) {
          throw Error(ErrorCode::kBadRequest, "k must be a number");
        }
      }
      json out = json::array();
      for (const auto& hit : wb.corpus().retrieve(req.get_param_value("q"), k)) {
        out.push_back(source::to_json(hit));
      }
      send_json(res, out);
    }));

    // Scorecard.
    s.Get("/api/scorecard/items", wrap([](const httplib::Request&, httplib::Response& res) {
      json out = json::array();
      for (const auto& item : scorecard::trust_items()) {
        out.push_back({{"item_id", item.key},
                       {"letter", item.letter},
                       {"statement", item.statement},
                       {"scored", item.scored}});
      }
      send_json(res, out);
    }));
    s.Get("/api/scorecard/entries", wrap([&wb](const httplib::Request&, httplib::Response& res) {
      json out = json::array();
      for (const auto& e : wb.scorecard_entries()) out.push_back(scorecard::to_json(e));
      send_json(res, out);
    }));
    s.Post("/api/scorecard/entries", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      auto body = parse_body(req);
      body.erase("recorded_at");
      send_json(res, scorecard::to_json(wb.record_scorecard(scorecard::scorecard_entry_from_json(body))),
                201);
    }));
    s.Get("/api/scorecard/tools/:tool", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      send_json(res, scorecard::to_json(wb.aggregate_scorecard(req.path_params.at("tool"))));
    }));
    s.Get("/api/scorecard/compare", wrap([&wb](const httplib::Request& req, httplib::Response& res) {
      if (!req.has_param("a") || !req.has_param("b")) {
        throw Error(ErrorCode::kBadRequest, "compare needs query parameters a and b");
      }
      send_json(res, scorecard::to_json(
                         wb.compare_tools(req.get_param_value("a"), req.get_param_value("b"))));
    }));

    // Help, metrics, jobs.
    s.Get("/api/help/:mode", wrap([](const httplib::Request& req, httplib::Response& res) {
      const auto mode = parse_mode(req.path_params.at("mode"));
      send_json(res, {{"mode", to_string(mode)}, {"text", help_text(mode)}});
    }));
    s.Get("/api/metrics", wrap([&wb](const httplib::Request&, httplib::Response& res) {
      send_json(res, wb.metrics().to_json());
    }));
    s.Get("/api/jobs/:id", wrap([this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(jobs_mutex);
      auto it = jobs.find(req.path_params.at("id"));
      if (it == jobs.end()) {
        throw Error(ErrorCode::kJobNotFound, "job '" + req.path_params.at("id") + "' not found");
      }
      json out{{"job_id", it->first}, {"status", it->second.status}};
      if (it->second.status == "done") out["result"] = it->second.result;
      if (it->second.status == "failed") out["error"] = it->second.error;
      send_json(res, out);
    }));

    s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        send_json(res, error_body(ErrorCode::kNotFound, "no such endpoint"), res.status);
      }
    });
  }
};

ApiServer::ApiServer(Workbench& workbench) : impl_(std::make_unique<Impl>(workbench)) {}

ApiServer::~ApiServer() = default;

void ApiServer::bind(const std::string& host, int port) {
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::kPortInUse, "cannot bind " + host + ":" + std::to_string(port));
  }
}

int ApiServer::bind_any(const std::string& host) {
  const int port = impl_->server.bind_to_any_port(host);
  if (port < 0) throw Error(ErrorCode::kPortInUse, "cannot bind any port on " + host);
  return port;
}

void ApiServer::listen() { impl_->server.listen_after_bind(); }

void ApiServer::stop() { impl_->server.stop(); }

void ApiServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace twai
