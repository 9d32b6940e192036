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

#include "mgw/backends/registry.hpp"

#include "mgw/backends/http_clients.hpp"
#include "mgw/backends/mocks.hpp"
#include "mgw/util/error.hpp"

namespace mgw {
namespace {

BackendConfig http_config(BackendKind kind, std::string_view url, const BackendOptions& opts) {
  BackendConfig cfg;
  cfg.kind = kind;
  cfg.base_url = std::string(url);
  cfg.timeout = opts.timeout;
  cfg.max_retries = opts.max_retries;
  cfg.retry_backoff = opts.retry_backoff;
  cfg.model = opts.model;
  cfg.image_width = opts.image_width;
  cfg.image_height = opts.image_height;
  return cfg;
}

bool is_http(std::string_view spec) {
  return spec.starts_with("http://") || spec.starts_with("https://");
}

[[noreturn]] void unknown(std::string_view what, std::string_view spec) {
  fail(ErrorCode::kInvalidArgument,
       "unknown " + std::string(what) + " backend '" + std::string(spec) + "'");
}

}  // namespace

bool is_mock_spec(std::string_view spec) { return spec.starts_with("mock:"); }

std::shared_ptr<ChatBackend> make_chat_backend(std::string_view spec, const BackendOptions& opts) {
  if (is_http(spec)) return make_http_chat(http_config(BackendKind::kLlm, spec, opts), opts.log);
  if (spec == "mock:oracle") {
    if (opts.oracle_replies.empty()) return make_keyword_chat(opts.log);
    return make_oracle_chat(opts.oracle_replies, "I am not sure how to answer that.", opts.log);
  }
  if (spec == "mock:keyword") return make_keyword_chat(opts.log);
  if (spec == "mock:text") return make_always_text_chat(opts.log);
  if (spec == "mock:teacher") return make_teacher_chat(opts.log);
  if (spec == "mock:garbage") {
    return std::make_shared<ScriptedChat>(std::vector<std::string>{"I am not sure."}, opts.log);
  }
  if (spec == "mock:down") return make_failing_chat(ErrorCode::kTransport, opts.log);
  unknown("llm", spec);
}

std::shared_ptr<ImageBackend> make_image_backend(std::string_view spec,
                                                 const BackendOptions& opts) {
  if (is_http(spec)) return make_http_image(http_config(BackendKind::kImage, spec, opts), opts.log);
  if (spec == "mock:hash") return std::make_shared<HashImageBackend>(opts.log);
  if (spec == "mock:down") return make_failing_image(ErrorCode::kTransport, opts.log);
  unknown("image", spec);
}

std::shared_ptr<SpeechBackend> make_speech_backend(std::string_view spec,
                                                   const BackendOptions& opts) {
  if (is_http(spec)) {
    return make_http_speech(http_config(BackendKind::kSpeech, spec, opts), opts.log);
  }
  if (spec == "mock:echo") return std::make_shared<EchoSpeechBackend>(opts.log);
  if (spec == "mock:down") return make_failing_speech(ErrorCode::kTransport, opts.log);
  unknown("speech", spec);
}

std::shared_ptr<ScorerBackend> make_scorer_backend(std::string_view spec,
                                                   const BackendOptions& opts) {
  if (is_http(spec)) {
    return make_http_scorer(http_config(BackendKind::kScorer, spec, opts), opts.log);
  }
  if (spec == "mock:overlap") return std::make_shared<OverlapScorer>(opts.log);
  if (spec == "mock:down") return make_failing_scorer(opts.log);
  unknown("scorer", spec);
}

std::map<std::string, std::string> oracle_replies_for(
    const std::vector<InstructionRecord>& records) {
  std::map<std::string, std::string> replies;
  for (const auto& r : records) replies.emplace(r.instruction, r.output.serialize());
  return replies;
}

}  // namespace mgw
