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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mgw/backends/registry.hpp"
#include "mgw/core/parser.hpp"
#include "mgw/prompting/prompts.hpp"
#include "mgw/util/error.hpp"

namespace mgw {

enum class PromptPolicy { kTuned, kFewshot };

std::string_view to_string(PromptPolicy p);
PromptPolicy parse_policy(std::string_view s);

struct RouteOptions {
  PromptPolicy policy = PromptPolicy::kTuned;
  bool fallback_to_text = true;
  int max_reasks = 0;
  std::optional<std::uint64_t> image_seed;  // default: derived from the conversion prompt
  double temperature = kDefaultTemperature;
  int max_new_tokens = kDefaultMaxNewTokens;
};

struct StageTiming {
  std::string stage;  // "llm", "llm#2", ..., "image", "speech"
  double millis = 0.0;
};

struct RouteTrace {
  std::string prompt;  // first-attempt prompt sent to the LLM
  std::string raw_llm_text;
  ParseOutcome parse_outcome;
  std::optional<std::string> conversion_prompt;
  std::vector<StageTiming> backend_latencies;
  int llm_calls = 0;
  std::string started_at;
  std::string finished_at;
  std::optional<std::string> error;

  // Without timing the output is a pure function of the inputs and backend
  // replies (stage names are kept, durations and timestamps dropped).
  nlohmann::ordered_json to_json(bool include_timing = true) const;
  static RouteTrace from_json(const nlohmann::ordered_json& j);
};

struct RoutedResult {
  Modality modality = Modality::kText;
  std::optional<std::string> text;
  std::optional<MediaArtifact> artifact;
  RouteTrace trace;

  nlohmann::ordered_json to_json(bool include_timing = true, bool include_bytes = false) const;
  // Requires artifact bytes to have been included.
  static RoutedResult from_json(const nlohmann::ordered_json& j);
};

// A routing failure with whatever trace was gathered before it.
class RouteError : public Error {
 public:
  RouteError(ErrorCode code, const std::string& message, RouteTrace trace)
      : Error(code, message), trace_(std::move(trace)) {}
  const RouteTrace& trace() const noexcept { return trace_; }

 private:
  RouteTrace trace_;
};

inline constexpr std::string_view kReaskSuffix =
    "\n\nYour previous reply could not be parsed. Reply with only a JSON object of the form "
    "{\"type\": \"text\" | \"image\" | \"speech\", \"response\": \"...\"}.";

// First 4 bytes of sha256(prompt), big-endian.
std::uint64_t default_image_seed(std::string_view conversion_prompt);

// Render prompt, call the LLM (plus up to max_reasks corrective re-asks while
// the reply does not parse), then hand the parsed response, never the
// instruction, to at most one conversion backend. Throws RouteError.
RoutedResult route(std::string_view instruction, const ConversationHistory& history,
                   const BackendSet& backends, const RouteOptions& options = {});

RoutedResult route_with_retry(std::string_view instruction, const ConversationHistory& history,
                              const BackendSet& backends, RouteOptions options, int max_reasks);

}  // namespace mgw
