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

#include "mgw/backends/http_clients.hpp"

#include <httplib.h>

#include <chrono>
#include <thread>

#include "mgw/util/error.hpp"
#include "mgw/util/text.hpp"

namespace mgw {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path without trailing slash
};

Endpoint split_url(const std::string& url) {
  const std::size_t scheme = url.find("://");
  require(scheme != std::string::npos, "backend URL needs a scheme: " + url);
  const std::size_t path = url.find('/', scheme + 3);
  Endpoint e{url.substr(0, path), path == std::string::npos ? "" : url.substr(path)};
  while (!e.prefix.empty() && e.prefix.back() == '/') e.prefix.pop_back();
  return e;
}

class HttpTransport {
 public:
  HttpTransport(BackendConfig cfg, std::shared_ptr<CallLog> log)
      : cfg_(std::move(cfg)), log_(std::move(log)), endpoint_(split_url(cfg_.base_url)) {
    cfg_.validate();
    if (!cfg_.auth_token) cfg_.auth_token = BackendConfig::token_from_env(cfg_.kind);
  }

  const BackendConfig& config() const { return cfg_; }

  json post(std::string_view op, const std::string& path, const json& body,
            std::string_view logged_input) {
    const std::string payload = body.dump(-1, ' ', false, json::error_handler_t::replace);
    return with_retries(op, logged_input, [&](httplib::Client& cli) {
      return cli.Post(endpoint_.prefix + path, headers(), payload, "application/json");
    });
  }

  json get(std::string_view op, const std::string& path) {
    return with_retries(op, path, [&](httplib::Client& cli) {
      return cli.Get(endpoint_.prefix + path, headers());
    });
  }

 private:
  httplib::Headers headers() const {
    httplib::Headers h;
    if (cfg_.auth_token) h.emplace("Authorization", "Bearer " + *cfg_.auth_token);
    return h;
  }

  void log_attempt(std::string_view op, int attempt, std::string_view outcome,
                   std::string_view input) {
    if (log_) {
      log_->append({std::string(to_string(cfg_.kind)), std::string(op), attempt,
                    std::string(outcome), std::string(input)});
    }
  }

  template <typename Send>
  json with_retries(std::string_view op, std::string_view input, Send&& send) {
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg_.timeout);
    const auto usecs =
        std::chrono::duration_cast<std::chrono::microseconds>(cfg_.timeout - secs);
    ErrorCode last_code = ErrorCode::kTransport;
    std::string last_message;
    for (int attempt = 1; attempt <= cfg_.max_retries + 1; ++attempt) {
      if (attempt > 1) std::this_thread::sleep_for(cfg_.retry_backoff * (attempt - 1));
      httplib::Client cli(endpoint_.origin);
      cli.set_connection_timeout(secs.count(), static_cast<time_t>(usecs.count()));
      cli.set_read_timeout(secs.count(), static_cast<time_t>(usecs.count()));
      cli.set_write_timeout(secs.count(), static_cast<time_t>(usecs.count()));
      const auto started = Clock::now();
      auto res = send(cli);
      if (!res) {
        const bool timed_out = res.error() == httplib::Error::ConnectionTimeout ||
                               Clock::now() - started >= cfg_.timeout;
        last_code = timed_out ? ErrorCode::kTimeout : ErrorCode::kTransport;
        last_message = httplib::to_string(res.error());
        log_attempt(op, attempt, to_string(last_code), input);
        continue;
      }
      if (res->status == 429 || res->status >= 500) {
        last_code = ErrorCode::kTransport;
        last_message = "HTTP " + std::to_string(res->status) + ": " + res->body;
        log_attempt(op, attempt, to_string(last_code), input);
        continue;
      }
      if (res->status >= 400) {
        log_attempt(op, attempt, to_string(ErrorCode::kRemoteRefusal), input);
        fail(ErrorCode::kRemoteRefusal, "HTTP " + std::to_string(res->status) + ": " + res->body);
      }
      auto parsed = json::parse(res->body, nullptr, false);
      if (parsed.is_discarded()) {
        log_attempt(op, attempt, to_string(ErrorCode::kBadPayload), input);
        fail(ErrorCode::kBadPayload, "response body is not JSON");
      }
      log_attempt(op, attempt, "ok", input);
      return parsed;
    }
    fail(last_code, std::string(to_string(cfg_.kind)) + " " + endpoint_.origin +
                        endpoint_.prefix + " after " + std::to_string(cfg_.max_retries + 1) +
                        " attempts: " + last_message);
  }

  BackendConfig cfg_;
  std::shared_ptr<CallLog> log_;
  Endpoint endpoint_;
};

MediaArtifact decode_media(const json& reply, const char* field, MediaKind kind,
                           std::string_view default_mime, std::string_view prompt) {
  if (!reply.is_object() || !reply.contains(field) || !reply[field].is_string()) {
    fail(ErrorCode::kBadPayload, std::string("reply lacks ") + field);
  }
  auto bytes = base64_decode(reply[field].get<std::string>());
  if (!bytes || bytes->empty()) fail(ErrorCode::kBadPayload, std::string(field) + " is not base64");
  const std::string mime = reply.value("mime", std::string(default_mime));
  return MediaArtifact::make(kind, std::move(*bytes), mime, std::string(prompt));
}

void require_kind(const BackendConfig& cfg, BackendKind kind) {
  require(cfg.kind == kind, "backend config kind is " + std::string(to_string(cfg.kind)) +
                                ", expected " + std::string(to_string(kind)));
}

class HttpChat final : public ChatBackend {
 public:
  HttpChat(BackendConfig cfg, std::shared_ptr<CallLog> log)
      : http_((require_kind(cfg, BackendKind::kLlm), std::move(cfg)), std::move(log)) {}

  std::string describe() const override { return http_.config().base_url; }

 protected:
  ChatReply do_complete(const ChatRequest& req) override {
    json body = {{"model", http_.config().model},
                 {"messages", json::array({{{"role", "user"}, {"content", req.prompt}}})},
                 {"temperature", req.temperature},
                 {"max_tokens", req.max_new_tokens}};
    const json reply = http_.post("complete", "/v1/chat/completions", body, req.prompt);
    try {
      const auto& choice = reply.at("choices").at(0);
      ChatReply out;
      const auto& content = choice.at("message").at("content");
      out.text = content.is_string() ? content.get<std::string>() : "";
      const std::string reason =
          choice.contains("finish_reason") && choice["finish_reason"].is_string()
              ? choice["finish_reason"].get<std::string>()
              : "stop";
      out.finish_reason = reason == "length" ? FinishReason::kLength
                          : reason == "stop" ? FinishReason::kStop
                                             : FinishReason::kError;
      if (!content.is_string()) out.finish_reason = FinishReason::kError;
      return out;
    } catch (const json::exception& e) {
      fail(ErrorCode::kBadPayload, std::string("chat reply shape: ") + e.what());
    }
  }

 private:
  HttpTransport http_;
};

class HttpImage final : public ImageBackend {
 public:
  HttpImage(BackendConfig cfg, std::shared_ptr<CallLog> log)
      : http_((require_kind(cfg, BackendKind::kImage), std::move(cfg)), std::move(log)) {}

  std::string describe() const override { return http_.config().base_url; }

 protected:
  MediaArtifact do_generate(std::string_view prompt, std::optional<std::uint64_t> seed) override {
    json body = {{"prompt", prompt},
                 {"seed", seed ? json(*seed) : json(nullptr)},
                 {"width", http_.config().image_width},
                 {"height", http_.config().image_height}};
    return decode_media(http_.post("generate", "/generate", body, prompt), "image_b64",
                        MediaKind::kImage, "image/png", prompt);
  }

 private:
  HttpTransport http_;
};

class HttpSpeech final : public SpeechBackend {
 public:
  HttpSpeech(BackendConfig cfg, std::shared_ptr<CallLog> log)
      : http_((require_kind(cfg, BackendKind::kSpeech), std::move(cfg)), std::move(log)) {}

  std::string describe() const override { return http_.config().base_url; }

 protected:
  MediaArtifact do_synthesize(std::string_view text) override {
    json body = {{"text", text}};
    return decode_media(http_.post("synthesize", "/synthesize", body, text), "audio_b64",
                        MediaKind::kAudio, "audio/wav", text);
  }

 private:
  HttpTransport http_;
};

class HttpScorer final : public ScorerBackend {
 public:
  HttpScorer(BackendConfig cfg, std::shared_ptr<CallLog> log)
      : http_((require_kind(cfg, BackendKind::kScorer), std::move(cfg)), std::move(log)) {}

  std::string describe() const override { return http_.config().base_url; }

 protected:
  double do_clip(const MediaArtifact& image, std::string_view text) override {
    json body = {{"image_b64", base64_encode(image.bytes)}, {"text", text}};
    const json reply = scorer_call([&] { return http_.post("clip", "/clip", body, text); });
    if (!reply.contains("score") || !reply["score"].is_number()) {
      fail(ErrorCode::kScorerError, "clip reply lacks numeric score");
    }
    return reply["score"].get<double>();
  }

  FidHandle do_submit_fid(std::span<const FidPair> pairs) override {
    json arr = json::array();
    for (const auto& p : pairs) {
      arr.push_back({{"gen_b64", base64_encode(p.generated.bytes)}, {"ref_id", p.reference_image_id}});
    }
    const json reply =
        scorer_call([&] { return http_.post("fid", "/fid", json{{"pairs", arr}}, "fid-batch"); });
    if (!reply.contains("job_id")) fail(ErrorCode::kScorerError, "fid reply lacks job_id");
    const auto& id = reply["job_id"];
    return {id.is_string() ? id.get<std::string>() : id.dump()};
  }

  FidStatus do_poll_fid(const FidHandle& handle) override {
    const json reply = scorer_call([&] { return http_.get("fid-poll", "/fid/" + handle.job_id); });
    FidStatus st{reply.value("status", std::string("failed")), std::nullopt};
    if (reply.contains("fid") && reply["fid"].is_number()) st.fid = reply["fid"].get<double>();
    return st;
  }

 private:
  // Remote refusals and malformed replies are scorer errors; transport
  // failures keep their own codes.
  template <typename F>
  json scorer_call(F&& f) {
    try {
      return f();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kRemoteRefusal || e.code() == ErrorCode::kBadPayload) {
        fail(ErrorCode::kScorerError, e.what());
      }
      throw;
    }
  }

  HttpTransport http_;
};

}  // namespace

std::unique_ptr<ChatBackend> make_http_chat(BackendConfig cfg, std::shared_ptr<CallLog> log) {
  return std::make_unique<HttpChat>(std::move(cfg), std::move(log));
}

std::unique_ptr<ImageBackend> make_http_image(BackendConfig cfg, std::shared_ptr<CallLog> log) {
  return std::make_unique<HttpImage>(std::move(cfg), std::move(log));
}

std::unique_ptr<SpeechBackend> make_http_speech(BackendConfig cfg, std::shared_ptr<CallLog> log) {
  return std::make_unique<HttpSpeech>(std::move(cfg), std::move(log));
}

std::unique_ptr<ScorerBackend> make_http_scorer(BackendConfig cfg, std::shared_ptr<CallLog> log) {
  return std::make_unique<HttpScorer>(std::move(cfg), std::move(log));
}

}  // namespace mgw
