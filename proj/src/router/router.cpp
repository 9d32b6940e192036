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

#include "mgw/router/router.hpp"

#include <chrono>

#include "mgw/util/digest.hpp"
#include "mgw/util/text.hpp"

namespace mgw {
namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

[[noreturn]] void raise(ErrorCode code, const std::string& message, RouteTrace& trace) {
  const std::string prefix = std::string(to_string(code)) + ": ";
  trace.error = message.starts_with(prefix) ? message : prefix + message;
  trace.finished_at = utc_timestamp();
  throw RouteError(code, trace.error.value(), trace);
}

}  // namespace

std::string_view to_string(PromptPolicy p) {
  return p == PromptPolicy::kTuned ? "tuned" : "fewshot";
}

PromptPolicy parse_policy(std::string_view s) {
  if (s == "tuned") return PromptPolicy::kTuned;
  if (s == "fewshot") return PromptPolicy::kFewshot;
  fail(ErrorCode::kInvalidArgument, "policy must be tuned or fewshot, got '" + std::string(s) + "'");
}

nlohmann::ordered_json RouteTrace::to_json(bool include_timing) const {
  nlohmann::ordered_json j;
  j["prompt"] = prompt;
  j["raw_llm_text"] = raw_llm_text;
  j["parse_outcome"] = parse_outcome.to_json();
  j["conversion_prompt"] =
      conversion_prompt ? nlohmann::ordered_json(*conversion_prompt) : nlohmann::ordered_json(nullptr);
  j["llm_calls"] = llm_calls;
  auto stages = nlohmann::ordered_json::array();
  for (const auto& s : backend_latencies) {
    nlohmann::ordered_json e;
    e["stage"] = s.stage;
    if (include_timing) e["millis"] = s.millis;
    stages.push_back(std::move(e));
  }
  j["backend_latencies"] = std::move(stages);
  if (include_timing) {
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
  }
  j["error"] = error ? nlohmann::ordered_json(*error) : nlohmann::ordered_json(nullptr);
  return j;
}

RouteTrace RouteTrace::from_json(const nlohmann::ordered_json& j) {
  RouteTrace t;
  t.prompt = j.value("prompt", "");
  t.raw_llm_text = j.value("raw_llm_text", "");
  t.parse_outcome = ParseOutcome::from_json(j.at("parse_outcome"));
  if (j.contains("conversion_prompt") && j["conversion_prompt"].is_string()) {
    t.conversion_prompt = j["conversion_prompt"].get<std::string>();
  }
  t.llm_calls = j.value("llm_calls", 0);
  for (const auto& s : j.value("backend_latencies", nlohmann::ordered_json::array())) {
    t.backend_latencies.push_back({s.at("stage").get<std::string>(), s.value("millis", 0.0)});
  }
  t.started_at = j.value("started_at", "");
  t.finished_at = j.value("finished_at", "");
  if (j.contains("error") && j["error"].is_string()) t.error = j["error"].get<std::string>();
  return t;
}

nlohmann::ordered_json RoutedResult::to_json(bool include_timing, bool include_bytes) const {
  nlohmann::ordered_json j;
  j["modality"] = std::string(to_string(modality));
  j["text"] = text ? nlohmann::ordered_json(*text) : nlohmann::ordered_json(nullptr);
  j["artifact"] = artifact ? artifact->to_json(include_bytes) : nlohmann::ordered_json(nullptr);
  j["trace"] = trace.to_json(include_timing);
  return j;
}

RoutedResult RoutedResult::from_json(const nlohmann::ordered_json& j) {
  RoutedResult r;
  r.modality = canonicalize_modality(j.at("modality").get<std::string>());
  if (j.contains("text") && j["text"].is_string()) r.text = j["text"].get<std::string>();
  if (j.contains("artifact") && j["artifact"].is_object()) {
    r.artifact = MediaArtifact::from_json(j["artifact"]);
  }
  r.trace = RouteTrace::from_json(j.at("trace"));
  return r;
}

std::uint64_t default_image_seed(std::string_view conversion_prompt) {
  const auto md = sha256(as_bytes(conversion_prompt));
  return (std::uint64_t{md[0]} << 24) | (std::uint64_t{md[1]} << 16) |
         (std::uint64_t{md[2]} << 8) | std::uint64_t{md[3]};
}

RoutedResult route(std::string_view instruction, const ConversationHistory& history,
                   const BackendSet& backends, const RouteOptions& options) {
  require(!trim_view(instruction).empty(), "instruction must be non-empty");
  require(options.max_reasks >= 0, "max_reasks must be >= 0");
  RouteTrace trace;
  trace.started_at = utc_timestamp();
  if (!backends.llm) raise(ErrorCode::kBackendUnavailable, "no LLM backend configured", trace);

  trace.prompt = options.policy == PromptPolicy::kFewshot
                     ? render_fewshot_prompt(instruction)
                     : render_tuned_prompt(history, instruction);

  ParseOutcome outcome;
  for (int attempt = 0; attempt <= options.max_reasks; ++attempt) {
    ChatRequest req{attempt == 0 ? trace.prompt : trace.prompt + std::string(kReaskSuffix),
                    options.temperature, options.max_new_tokens};
    const auto t0 = Clock::now();
    ChatReply reply;
    try {
      ++trace.llm_calls;
      reply = complete_chat(*backends.llm, req);
    } catch (const Error& e) {
      trace.backend_latencies.push_back(
          {attempt == 0 ? "llm" : "llm#" + std::to_string(attempt + 1), millis_since(t0)});
      raise(e.code(), e.what(), trace);
    }
    trace.backend_latencies.push_back(
        {attempt == 0 ? "llm" : "llm#" + std::to_string(attempt + 1), millis_since(t0)});
    trace.raw_llm_text = reply.text;
    outcome = parse_structured_response(reply.text, /*fallback_to_text=*/false);
    if (outcome.ok()) break;
    if (attempt == options.max_reasks) {
      outcome = parse_structured_response(reply.text, options.fallback_to_text);
    }
  }
  trace.parse_outcome = outcome;
  if (!outcome.ok()) {
    raise(ErrorCode::kIrreparable, "LLM reply has no structured response: " + outcome.failure,
          trace);
  }

  const StructuredResponse& parsed = *outcome.result;
  RoutedResult result;
  result.modality = parsed.modality();
  switch (parsed.modality()) {
    case Modality::kText:
      result.text = parsed.response();
      break;
    case Modality::kImage: {
      if (!backends.image) raise(ErrorCode::kBackendUnavailable, "no image backend", trace);
      trace.conversion_prompt = parsed.response();
      const auto seed = options.image_seed.value_or(default_image_seed(parsed.response()));
      const auto t0 = Clock::now();
      try {
        result.artifact = generate_image(*backends.image, parsed.response(), seed);
      } catch (const Error& e) {
        trace.backend_latencies.push_back({"image", millis_since(t0)});
        raise(e.code(), e.what(), trace);
      }
      trace.backend_latencies.push_back({"image", millis_since(t0)});
      break;
    }
    case Modality::kSpeech: {
      if (!backends.speech) raise(ErrorCode::kBackendUnavailable, "no speech backend", trace);
      trace.conversion_prompt = parsed.response();
      const auto t0 = Clock::now();
      try {
        result.artifact = synthesize_speech(*backends.speech, parsed.response());
      } catch (const Error& e) {
        trace.backend_latencies.push_back({"speech", millis_since(t0)});
        raise(e.code(), e.what(), trace);
      }
      trace.backend_latencies.push_back({"speech", millis_since(t0)});
      break;
    }
  }
  trace.finished_at = utc_timestamp();
  result.trace = std::move(trace);
  return result;
}

RoutedResult route_with_retry(std::string_view instruction, const ConversationHistory& history,
                              const BackendSet& backends, RouteOptions options, int max_reasks) {
  options.max_reasks = max_reasks;
  return route(instruction, history, backends, options);
}

}  // namespace mgw
