// Copyright 2026 The Modality Gateway Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mgw/service/server.hpp"

#include <iostream>
#include <random>

#include <httplib.h>

#include "mgw/eval/report.hpp"
#include "mgw/util/error.hpp"
#include "mgw/util/files.hpp"
#include "mgw/util/text.hpp"

namespace mgw {
namespace {

using ojson = nlohmann::ordered_json;

HttpReply json_reply(int status, const ojson& body) { return {status, dump_json(body), "application/json"}; }

HttpReply error_reply(int status, const std::string& message) {
  ojson j;
  j["error"] = message;
  return json_reply(status, j);
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kUnknownModality:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
      return 409;
    default:
      return 502;
  }
}

std::string random_id() {
  static std::mutex mu;
  static std::random_device rd;
  std::lock_guard lock(mu);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%08x%08x", rd(), rd());
  return buf;
}

bool is_safe_id(const std::string& id) {
  if (id.empty() || id.size() > 64) return false;
  for (char c : id) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') return false;
  }
  return true;
}

}  // namespace

BackendSet backends_for(const ServiceConfig& config, std::shared_ptr<CallLog> log) {
  BackendOptions opts;
  opts.log = std::move(log);
  opts.timeout = std::chrono::duration_cast<std::chrono::milliseconds>(config.respond_timeout);
  if (config.oracle_corpus) opts.oracle_replies = oracle_replies_for(read_corpus(*config.oracle_corpus));
  BackendSet b;
  b.llm = make_chat_backend(config.llm, opts);
  if (!config.image.empty()) b.image = make_image_backend(config.image, opts);
  if (!config.speech.empty()) b.speech = make_speech_backend(config.speech, opts);
  if (!config.scorer.empty()) b.scorer = make_scorer_backend(config.scorer, opts);
  return b;
}

Gateway::Gateway(ServiceConfig config, BackendSet backends)
    : config_(std::move(config)),
      backends_(std::move(backends)),
      artifacts_(config_.data_dir / "artifacts"),
      sessions_(config_.data_dir / "sessions", config_.max_turns) {}

Gateway::~Gateway() {
  stop();
  join_jobs();
}

HttpReply Gateway::respond(const std::string& body) {
  const auto req = ojson::parse(body, nullptr, false);
  if (req.is_discarded() || !req.is_object()) return error_reply(400, "body must be a JSON object");
  if (!req.contains("instruction") || !req["instruction"].is_string() ||
      trim_view(req["instruction"].get<std::string>()).empty()) {
    return error_reply(400, "instruction must be a non-empty string");
  }
  const std::string instruction = req["instruction"].get<std::string>();
  std::optional<std::string> session_id;
  if (req.contains("session_id") && !req["session_id"].is_null()) {
    if (!req["session_id"].is_string()) return error_reply(400, "session_id must be a string");
    session_id = req["session_id"].get<std::string>();
    if (!sessions_.exists(*session_id)) return error_reply(404, "unknown session '" + *session_id + "'");
  }

  RouteOptions options;
  options.policy = config_.policy;
  options.fallback_to_text = config_.fallback_to_text;
  options.max_reasks = config_.max_reasks;
  const ConversationHistory history =
      session_id ? sessions_.history(*session_id) : ConversationHistory(config_.max_turns);

  RoutedResult result;
  try {
    result = route(instruction, history, backends_, options);
  } catch (const RouteError& e) {
    ojson j;
    j["error"] = e.what();
    j["trace"] = e.trace().to_json();
    return json_reply(502, j);
  } catch (const Error& e) {
    return error_reply(status_for(e.code()), e.what());
  }

  ojson out;
  out["modality"] = std::string(to_string(result.modality));
  out["text"] = result.text ? ojson(*result.text) : ojson(nullptr);
  std::optional<ArtifactRef> ref;
  if (result.artifact) {
    ref = artifacts_.put(*result.artifact);
    out["artifact_url"] = "/v1/artifacts/" + ref->id;
    out["artifact"] = ref->to_json();
  } else {
    out["artifact_url"] = nullptr;
    out["artifact"] = nullptr;
  }
  out["trace"] = result.trace.to_json();
  out["session_id"] = session_id ? ojson(*session_id) : ojson(nullptr);

  if (session_id) {
    const std::string now = utc_timestamp();
    SessionTurn user{Role::kUser, instruction, std::nullopt, std::nullopt, now};
    SessionTurn assistant{Role::kAssistant,
                          result.text ? *result.text : result.trace.conversion_prompt.value_or(""),
                          result.modality, ref ? std::optional(ref->id) : std::nullopt, now};
    sessions_.append(*session_id, {user, assistant});
  }
  return json_reply(200, out);
}

HttpReply Gateway::get_artifact(const std::string& id) const {
  const auto stored = artifacts_.get(id);
  if (!stored) return error_reply(404, "unknown artifact '" + id + "'");
  return {200, std::string(stored->bytes.begin(), stored->bytes.end()), stored->mime};
}

HttpReply Gateway::create_session() {
  ojson j;
  j["id"] = sessions_.create();
  return json_reply(201, j);
}

HttpReply Gateway::get_session(const std::string& id) const {
  if (!sessions_.exists(id)) return error_reply(404, "unknown session '" + id + "'");
  return json_reply(200, sessions_.load(id).to_json());
}

HttpReply Gateway::submit_eval(const std::string& body) {
  const auto req = ojson::parse(body, nullptr, false);
  if (req.is_discarded() || !req.is_object()) return error_reply(400, "body must be a JSON object");
  EvalJob job;
  try {
    job = EvalJob::from_json(req);
  } catch (const std::exception& e) {
    return error_reply(400, e.what());
  }
  std::string job_id = req.contains("job_id") && req["job_id"].is_string()
                           ? req["job_id"].get<std::string>()
                           : random_id();
  if (!is_safe_id(job_id)) return error_reply(400, "job_id must match [A-Za-z0-9_-]{1,64}");
  const auto job_dir = config_.data_dir / "eval" / job_id;
  if (!job.cache_dir) job.cache_dir = job_dir / "cache";
  {
    std::lock_guard lock(jobs_mu_);
    if (jobs_.contains(job_id)) return error_reply(409, "eval job '" + job_id + "' already exists");
    jobs_[job_id] = EvalJobState{};
    job_threads_.emplace_back([this, job, job_id, job_dir] {
      EvalJobState state;
      try {
        const EvalOutcome outcome = run_eval(job);
        write_report(outcome, job_dir);
        state.status = "done";
        state.report = outcome.report.to_json();
      } catch (const std::exception& e) {
        state.status = "failed";
        state.error = e.what();
      }
      std::lock_guard inner(jobs_mu_);
      jobs_[job_id] = std::move(state);
    });
  }
  ojson j;
  j["job_id"] = job_id;
  return json_reply(202, j);
}

HttpReply Gateway::eval_status(const std::string& job_id) const {
  std::lock_guard lock(jobs_mu_);
  const auto it = jobs_.find(job_id);
  if (it == jobs_.end()) return error_reply(404, "unknown eval job '" + job_id + "'");
  ojson j;
  j["job_id"] = job_id;
  j["status"] = it->second.status;
  if (it->second.report) j["report"] = *it->second.report;
  if (it->second.error) j["error"] = *it->second.error;
  return json_reply(200, j);
}

bool Gateway::authorized(const std::string& header) const {
  if (!config_.bearer_token) return true;
  return header == "Bearer " + *config_.bearer_token;
}

void Gateway::log_request(const std::string& method, const std::string& path, int status) {
  ojson j;
  j["at"] = utc_timestamp();
  j["method"] = method;
  j["path"] = path;
  j["status"] = status;
  const std::string line = dump_json(j);
  std::lock_guard lock(log_mu_);
  if (config_.request_log) {
    append_line(*config_.request_log, line);
  } else {
    std::cerr << line << '\n';
  }
}

void Gateway::install_routes() {
  server_ = std::make_unique<httplib::Server>();
  auto& srv = *server_;
  const auto timeout = std::chrono::duration_cast<std::chrono::seconds>(config_.respond_timeout);
  srv.set_read_timeout(timeout.count(), 0);
  srv.set_write_timeout(timeout.count(), 0);

  srv.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
    if (authorized(req.get_header_value("Authorization"))) return httplib::Server::HandlerResponse::Unhandled;
    const auto r = error_reply(401, "missing or invalid bearer token");
    res.status = r.status;
    res.set_content(r.body, r.content_type);
    return httplib::Server::HandlerResponse::Handled;
  });
  srv.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
    log_request(req.method, req.path, res.status);
  });

  auto send = [](httplib::Response& res, const HttpReply& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  srv.Post("/v1/respond", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, respond(req.body));
  });
  srv.Get(R"(/v1/artifacts/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, get_artifact(req.matches[1]));
  });
  srv.Post("/v1/sessions", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, create_session());
  });
  srv.Get(R"(/v1/sessions/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, get_session(req.matches[1]));
  });
  srv.Post("/v1/eval", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, submit_eval(req.body));
  });
  srv.Get(R"(/v1/eval/([^/]+))", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, eval_status(req.matches[1]));
  });
  srv.set_exception_handler([send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      send(res, error_reply(status_for(e.code()), e.what()));
    } catch (const std::exception& e) {
      send(res, error_reply(500, e.what()));
    }
  });
}

int Gateway::start(int port) {
  install_routes();
  const int p = port < 0 ? config_.port : port;
  int bound = p;
  if (p == 0) {
    bound = server_->bind_to_any_port(config_.host);
  } else if (!server_->bind_to_port(config_.host, p)) {
    bound = -1;
  }
  if (bound < 0) fail(ErrorCode::kIo, "cannot bind " + config_.host + ":" + std::to_string(p));
  listener_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void Gateway::listen() {
  if (!server_) start();
  if (listener_.joinable()) listener_.join();
}

void Gateway::stop() {
  if (server_) server_->stop();
  if (listener_.joinable() && listener_.get_id() != std::this_thread::get_id()) listener_.join();
}

void Gateway::join_jobs() {
  std::vector<std::thread> threads;
  {
    std::lock_guard lock(jobs_mu_);
    threads.swap(job_threads_);
  }
  for (auto& t : threads) {
    if (t.joinable()) t.join();
  }
}

}  // namespace mgw
