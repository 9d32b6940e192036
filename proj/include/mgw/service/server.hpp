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

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mgw/backends/registry.hpp"
#include "mgw/eval/harness.hpp"
#include "mgw/router/router.hpp"
#include "mgw/service/stores.hpp"

namespace httplib {
class Server;
}

namespace mgw {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string llm = "mock:keyword";
  std::string image = "mock:hash";
  std::string speech = "mock:echo";
  std::string scorer;
  PromptPolicy policy = PromptPolicy::kTuned;
  bool fallback_to_text = true;
  int max_reasks = 0;
  std::size_t max_turns = kDefaultMaxTurns;
  std::filesystem::path data_dir = "mgw-data";  // artifacts/, sessions/, eval/
  std::optional<std::string> bearer_token;
  std::optional<std::filesystem::path> request_log;  // stderr if unset
  std::chrono::seconds respond_timeout{120};
  std::optional<std::filesystem::path> oracle_corpus;  // replies for mock:oracle
};

// Builds the backend set a gateway would use for this config.
BackendSet backends_for(const ServiceConfig& config, std::shared_ptr<CallLog> log = nullptr);

struct HttpReply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// The HTTP gateway. Handlers are plain methods so they can be exercised
// without a socket; start()/listen() bind them to an httplib server.
class Gateway {
 public:
  Gateway(ServiceConfig config, BackendSet backends);
  ~Gateway();

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  HttpReply respond(const std::string& body);
  HttpReply get_artifact(const std::string& id) const;
  HttpReply create_session();
  HttpReply get_session(const std::string& id) const;
  HttpReply submit_eval(const std::string& body);
  HttpReply eval_status(const std::string& job_id) const;

  // Binds in the background; port 0 picks a free port. Returns the port.
  int start(int port = -1);
  // Blocks until stop() is called from another thread.
  void listen();
  void stop();
  // Waits for every eval job started so far.
  void join_jobs();

  const ServiceConfig& config() const noexcept { return config_; }
  ArtifactStore& artifacts() noexcept { return artifacts_; }
  SessionStore& sessions() noexcept { return sessions_; }

 private:
  struct EvalJobState {
    std::string status = "running";  // running, done, failed
    std::optional<nlohmann::ordered_json> report;
    std::optional<std::string> error;
  };

  void install_routes();
  void log_request(const std::string& method, const std::string& path, int status);
  bool authorized(const std::string& header) const;

  ServiceConfig config_;
  BackendSet backends_;
  ArtifactStore artifacts_;
  SessionStore sessions_;
  std::unique_ptr<httplib::Server> server_;
  std::thread listener_;

  mutable std::mutex jobs_mu_;
  std::map<std::string, EvalJobState> jobs_;
  std::vector<std::thread> job_threads_;

  std::mutex log_mu_;
};

}  // namespace mgw
