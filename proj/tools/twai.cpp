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

// twai: command-line front end for the trust workbench.

#include <pthread.h>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "twai/api.hpp"
#include "twai/config.hpp"

namespace {

using nlohmann::json;
using twai::Error;
using twai::ErrorCode;

constexpr int kExitOperational = 1;
constexpr int kExitUsage = 2;

struct GlobalOptions {
  std::string config_file;
  std::string workspace;
  std::string host;
  int port = 0;
  std::string providers;
  std::string search_fixture;
  std::string metrics;
  bool json_output = false;
};

twai::AppConfig resolve_config(const GlobalOptions& g) {
  twai::AppConfig config;
  if (!g.config_file.empty()) twai::apply_config_file(config, g.config_file);
  twai::apply_environment(config, [](const char* name) { return std::getenv(name); });
  if (!g.workspace.empty()) config.workspace = g.workspace;
  if (!g.host.empty()) config.host = g.host;
  if (g.port != 0) config.port = g.port;
  if (!g.providers.empty()) config.providers_file = g.providers;
  if (!g.search_fixture.empty()) config.search_fixture = g.search_fixture;
  if (!g.metrics.empty()) config.metrics_file = g.metrics;
  return config;
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream out;
    out << std::cin.rdbuf();
    return out.str();
  }
  return twai::read_file(path);
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << bytes;
}

/// Moves the session into the requested mode unless it is already there.
void enter_mode(twai::Workbench& wb, const std::string& sid, twai::Mode mode) {
  if (wb.session(sid).mode != mode) wb.switch_mode(sid, mode);
}

json summary_json(const twai::SessionSummary& s) {
  return json{{"id", s.id},
              {"title", s.title},
              {"mode", twai::to_string(s.mode)},
              {"created_at", twai::format_timestamp(s.created_at)},
              {"turns", s.turns},
              {"verifications", s.verifications},
              {"decisions", s.decisions}};
}

void print_turn(const twai::Turn& turn, bool as_json) {
  if (as_json) {
    print(twai::to_json(turn));
    return;
  }
  std::cout << "turn " << turn.index << " (" << turn.id << ")\n";
  for (const auto& r : turn.responses) {
    std::cout << "[" << r.provider_id << "] " << r.id << " (" << r.latency_ms << " ms)\n"
              << r.text << "\n";
  }
  for (const auto& f : turn.errors) {
    std::cout << "[" << f.provider_id << "] failed: " << twai::code_name(f.error.code) << ": "
              << f.error.message << "\n";
  }
}

std::vector<twai::scorecard::ScorecardEntry> parse_scorecard_file(const std::string& path) {
  return twai::scorecard::import_rows(read_input(path));
}

int serve(twai::Runtime& runtime) {
  // Block the stop signals here so every server thread inherits the mask and
  // a dedicated thread can wait for them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  twai::ApiServer server(runtime.workbench());
  const auto& config = runtime.config();
  int port = config.port;
  if (port == 0) {
    port = server.bind_any(config.host);
  } else {
    server.bind(config.host, port);
  }
  std::cerr << "twai listening on http://" << config.host << ":" << port << "/api\n";

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.listen();
  // listen() can also return without a signal; wake the waiter.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twai: generate, verify and decide on AI responses"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--config", g.config_file, "JSON config file");
  app.add_option("--workspace", g.workspace, "workspace directory (default .twai)");
  app.add_option("--host", g.host, "bind address for serve");
  app.add_option("--port", g.port, "port for serve; 0 picks a free port");
  app.add_option("--providers", g.providers, "provider list JSON");
  app.add_option("--search-fixture", g.search_fixture, "search fixture JSON for double check");
  app.add_option("--metrics", g.metrics, "metrics panel JSON");
  app.add_flag("--json", g.json_output, "print JSON instead of text");

  std::function<int()> action;
  bool read_only = false;

  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP API");
  serve_cmd->callback([&] {
    action = [&] {
      twai::Runtime runtime(resolve_config(g));
      return serve(runtime);
    };
  });

  // Everything below shares one Runtime built after parsing.
  std::function<int(twai::Runtime&)> run;

  auto* session_cmd = app.add_subcommand("session", "create, list and show sessions");
  session_cmd->require_subcommand(1);
  std::string title;
  auto* session_new = session_cmd->add_subcommand("new", "create a session");
  session_new->add_option("title,--title", title, "session title");
  session_new->callback([&] {
    run = [&](twai::Runtime& rt) {
      const auto s = rt.workbench().create_session(title);
      if (g.json_output) {
        print(twai::to_json(s));
      } else {
        std::cout << s.id << "\n";
      }
      return 0;
    };
  });
  auto* session_list = session_cmd->add_subcommand("list", "list sessions");
  session_list->callback([&] {
    read_only = true;
    run = [&](twai::Runtime& rt) {
      const auto sessions = rt.workbench().list_sessions();
      if (g.json_output) {
        json out = json::array();
        for (const auto& s : sessions) out.push_back(summary_json(s));
        print(out);
      } else {
        for (const auto& s : sessions) {
          std::cout << s.id << "  " << twai::to_string(s.mode) << "  turns=" << s.turns
                    << "  " << s.title << "\n";
        }
      }
      return 0;
    };
  });
  std::string session_id;
  auto* session_show = session_cmd->add_subcommand("show", "print a session as JSON");
  session_show->add_option("session", session_id)->required();
  session_show->callback([&] {
    read_only = true;
    run = [&](twai::Runtime& rt) {
      print(twai::to_json(rt.workbench().session(session_id)));
      return 0;
    };
  });

  std::string mode_name;
  auto* mode_cmd = app.add_subcommand("mode", "switch a session's mode");
  mode_cmd->add_option("session", session_id)->required();
  mode_cmd->add_option("mode", mode_name, "generation, verification or decision")->required();
  mode_cmd->callback([&] {
    run = [&](twai::Runtime& rt) {
      const auto s = rt.workbench().switch_mode(session_id, twai::parse_mode(mode_name));
      std::cout << twai::to_string(s.mode) << "\n";
      return 0;
    };
  });

  std::string prompt;
  std::vector<std::string> provider_ids;
  auto* generate_cmd = app.add_subcommand("generate", "send a prompt to providers");
  generate_cmd->add_option("session", session_id)->required();
  generate_cmd->add_option("prompt", prompt)->required();
  generate_cmd->add_option("-p,--provider", provider_ids, "provider id (repeatable)")->required();
  generate_cmd->callback([&] {
    run = [&](twai::Runtime& rt) {
      print_turn(rt.workbench().submit_prompt(session_id, prompt, provider_ids), g.json_output);
      return 0;
    };
  });

  std::string doc_file;
  std::string doc_id;
  std::string doc_title;
  auto* ingest_cmd = app.add_subcommand("ingest", "add a research document to the corpus");
  ingest_cmd->add_option("file", doc_file, "text file, or - for stdin")->required();
  ingest_cmd->add_option("--id", doc_id, "document id (default: file name)");
  ingest_cmd->add_option("--title", doc_title, "document title");
  ingest_cmd->callback([&] {
    run = [&](twai::Runtime& rt) {
      twai::source::CorpusDocument doc;
      doc.doc_id = doc_id.empty() ? std::filesystem::path(doc_file).filename().string() : doc_id;
      doc.title = doc_title.empty() ? doc.doc_id : doc_title;
      doc.body = read_input(doc_file);
      const auto chunks = rt.workbench().ingest(std::move(doc));
      std::cout << chunks << " chunks\n";
      return 0;
    };
  });

  std::string response_id;
  bool use_source = false;
  bool use_double_check = false;
  auto* verify_cmd = app.add_subcommand("verify", "verify a response (enters verification mode)");
  verify_cmd->add_option("session", session_id)->required();
  verify_cmd->add_option("response", response_id)->required();
  verify_cmd->add_flag("--source", use_source, "check against the research corpus");
  verify_cmd->add_flag("--double-check", use_double_check, "check claims with web search");
  verify_cmd->callback([&] {
    if (!use_source && !use_double_check) {
      throw CLI::ValidationError("verify", "pick --source and/or --double-check");
    }
    run = [&](twai::Runtime& rt) {
      auto& wb = rt.workbench();
      enter_mode(wb, session_id, twai::Mode::kVerification);
      json out = json::object();
      if (use_source) {
        const auto v = wb.verify_source(session_id, response_id);
        out["source"] = twai::source::to_json(v);
        if (!g.json_output) {
          std::cout << "source: " << v.matched_claims << "/" << v.checkable_claims
                    << " claims cited, coverage " << v.coverage
                    << (v.passed ? " (pass)" : " (fail)") << "\n"
                    << wb.source_guidance(v) << "\n";
        }
      }
      if (use_double_check) {
        const auto r = wb.double_check(session_id, response_id);
        out["double_check"] = twai::double_check::to_json(r);
        if (!g.json_output) {
          for (const auto& h : r.highlights) {
            std::cout << "[" << twai::double_check::to_string(h.color) << "] " << h.claim_id << " "
                      << twai::double_check::to_string(h.status) << "\n";
          }
          std::cout << "double check: coverage " << r.coverage
                    << (r.passed ? " (pass)" : " (fail)") << "\n"
                    << twai::double_check::guidance_message(r) << "\n";
        }
      }
      if (g.json_output) print(out);
      return 0;
    };
  });

  std::size_t turn_index = 0;
  auto* compare_cmd = app.add_subcommand("compare", "compare providers on one prompt");
  compare_cmd->add_option("session", session_id)->required();
  auto* compare_prompt = compare_cmd->add_option("prompt", prompt);
  compare_cmd->add_option("-p,--provider", provider_ids, "provider id (repeatable)");
  auto* compare_turn = compare_cmd->add_option("--turn", turn_index, "reuse an existing turn");
  compare_prompt->excludes(compare_turn);
  compare_cmd->callback([&] {
    run = [&](twai::Runtime& rt) {
      auto& wb = rt.workbench();
      const auto report = compare_turn->count() > 0
                              ? wb.compare_turn(session_id, turn_index)
                              : wb.run_compare(session_id, prompt, provider_ids);
      if (g.json_output) {
        print(twai::compare::to_json(report));
        return 0;
      }
      std::cout << report.common_cluster_ids.size() << " common claims\n";
      for (const auto& c : report.common_clusters()) {
        std::cout << "  (" << c.support << ") " << c.representative_text << "\n";
      }
      for (const auto& [rid, coverage] : report.per_response_coverage) {
        std::cout << rid << ": coverage " << coverage
                  << (report.per_response_passed.at(rid) ? " (pass)" : " (fail)") << "\n";
      }
      for (const auto& f : report.failures) {
        std::cout << f.provider_id << " failed: " << twai::code_name(f.error.code) << "\n";
      }
      return 0;
    };
  });

  std::string choose;
  std::string rationale;
  auto* decide_cmd = app.add_subcommand("decide", "show the decision table, optionally choose");
  decide_cmd->add_option("session", session_id)->required();
  decide_cmd->add_option("--choose", choose, "response id to record as the decision");
  decide_cmd->add_option("--rationale", rationale, "why it was chosen");
  decide_cmd->callback([&] {
    run = [&](twai::Runtime& rt) {
      auto& wb = rt.workbench();
      enter_mode(wb, session_id, twai::Mode::kDecision);
      const auto table = wb.decision_table(session_id);
      if (g.json_output && choose.empty()) print(twai::decision::to_json(table));
      if (!g.json_output) std::cout << twai::decision::render_text(table);
      if (!choose.empty()) {
        const auto record = wb.record_decision(session_id, choose, rationale);
        wb.switch_mode(session_id, twai::Mode::kGeneration);
        if (g.json_output) {
          print(twai::decision::to_json(record));
        } else {
          std::cout << "recorded " << record.id << "\n";
        }
      }
      return 0;
    };
  });

  auto* scorecard_cmd = app.add_subcommand("scorecard", "trust scorecard entries and reports");
  scorecard_cmd->require_subcommand(1);
  std::string tool_id;
  std::string rater_id;
  std::vector<std::string> ratings;
  auto* sc_record = scorecard_cmd->add_subcommand("record", "record one rater's answers");
  sc_record->add_option("--tool", tool_id)->required();
  sc_record->add_option("--rater", rater_id)->required();
  sc_record->add_option("--ratings", ratings,
                        "six ratings (good, okay, needs_improvement) in item order")
      ->required()
      ->delimiter(',');
  sc_record->callback([&] {
    run = [&](twai::Runtime& rt) {
      if (ratings.size() != twai::scorecard::trust_items().size()) {
        throw Error(ErrorCode::kIncompleteRatings, "expected six ratings");
      }
      twai::scorecard::ScorecardEntry entry{rater_id, tool_id, {}, {}};
      for (std::size_t i = 0; i < ratings.size(); ++i) {
        entry.ratings[twai::scorecard::trust_items()[i].id] =
            twai::scorecard::parse_rating(ratings[i]);
      }
      rt.workbench().record_scorecard(std::move(entry));
      return 0;
    };
  });
  auto* sc_aggregate = scorecard_cmd->add_subcommand("aggregate", "report for one tool");
  sc_aggregate->add_option("tool", tool_id)->required();
  sc_aggregate->callback([&] {
    read_only = true;
    run = [&](twai::Runtime& rt) {
      const auto report = rt.workbench().aggregate_scorecard(tool_id);
      if (g.json_output) {
        print(twai::scorecard::to_json(report));
        return 0;
      }
      std::cout << report.tool_id << ": " << report.n_raters << " raters\n";
      for (const auto& item : twai::scorecard::trust_items()) {
        if (!item.scored) continue;
        std::cout << "  " << item.letter << "  " << report.per_item_mean.at(item.id) << "\n";
      }
      std::cout << "  overall " << report.overall_mean_of_sums << "\n"
                << "  satisfaction " << report.satisfaction_mean << "\n";
      return 0;
    };
  });
  std::string tool_b;
  auto* sc_compare = scorecard_cmd->add_subcommand("compare", "difference between two tools");
  sc_compare->add_option("tool_a", tool_id)->required();
  sc_compare->add_option("tool_b", tool_b)->required();
  sc_compare->callback([&] {
    read_only = true;
    run = [&](twai::Runtime& rt) {
      const auto c = rt.workbench().compare_tools(tool_id, tool_b);
      if (g.json_output) {
        print(twai::scorecard::to_json(c));
      } else {
        std::cout << c.tool_b << " - " << c.tool_a << ": overall " << c.overall_delta << "\n";
      }
      return 0;
    };
  });
  std::string csv_file;
  auto* sc_import = scorecard_cmd->add_subcommand("import", "load entries from CSV");
  sc_import->add_option("file", csv_file, "CSV file, or - for stdin")->required();
  sc_import->callback([&] {
    run = [&](twai::Runtime& rt) {
      const auto entries = parse_scorecard_file(csv_file);
      for (const auto& e : entries) rt.workbench().record_scorecard(e);
      std::cout << entries.size() << " entries\n";
      return 0;
    };
  });
  std::string out_file;
  auto* sc_export = scorecard_cmd->add_subcommand("export", "write entries as CSV");
  sc_export->add_option("-o,--output", out_file, "output file (default stdout)");
  sc_export->callback([&] {
    read_only = true;
    run = [&](twai::Runtime& rt) {
      write_output(out_file, twai::scorecard::export_rows(rt.workbench().scorecard_entries()));
      return 0;
    };
  });

  auto* export_cmd = app.add_subcommand("export", "write a session archive");
  export_cmd->add_option("session", session_id)->required();
  export_cmd->add_option("-o,--output", out_file, "archive file")->required();
  export_cmd->callback([&] {
    read_only = true;
    run = [&](twai::Runtime& rt) {
      write_output(out_file,
                   twai::store::encode_archive(rt.workbench().export_archive(session_id)));
      return 0;
    };
  });
  std::string archive_file;
  auto* import_cmd = app.add_subcommand("import", "load a session archive");
  import_cmd->add_option("archive", archive_file)->required();
  import_cmd->callback([&] {
    run = [&](twai::Runtime& rt) {
      std::cout << rt.workbench().import_archive(
                       twai::store::decode_archive(read_input(archive_file)))
                << "\n";
      return 0;
    };
  });

  auto* help_cmd = app.add_subcommand("guide", "in-app help for a mode");
  help_cmd->add_option("mode", mode_name)->required();
  help_cmd->callback([&] {
    action = [&] {
      std::cout << twai::help_text(twai::parse_mode(mode_name)) << "\n";
      return 0;
    };
  });

  auto* errors_cmd = app.add_subcommand("errors", "list error codes and HTTP statuses");
  errors_cmd->callback([&] {
    action = [&] {
      for (auto code : twai::all_error_codes()) {
        std::cout << twai::code_name(code) << " " << twai::http_status(code) << "\n";
      }
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (action) return action();
    auto access = read_only ? twai::store::Store::Access::kReadOnly
                            : twai::store::Store::Access::kReadWrite;
    twai::Runtime runtime(resolve_config(g), access);
    return run(runtime);
  } catch (const Error& e) {
    std::cerr << "error: " << twai::code_name(e.code()) << ": " << e.what() << "\n";
    return kExitOperational;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return kExitOperational;
  }
}
