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

#include "mgw/backends/config.hpp"

#include <cctype>
#include <cstdlib>

#include "mgw/util/error.hpp"
#include "mgw/util/text.hpp"

namespace mgw {

std::string_view to_string(BackendKind k) {
  switch (k) {
    case BackendKind::kLlm: return "llm";
    case BackendKind::kImage: return "image";
    case BackendKind::kSpeech: return "speech";
    case BackendKind::kScorer: return "scorer";
  }
  return "llm";
}

std::string_view to_string(FinishReason r) {
  switch (r) {
    case FinishReason::kStop: return "stop";
    case FinishReason::kLength: return "length";
    case FinishReason::kError: return "error";
  }
  return "error";
}

void BackendConfig::validate() const {
  require(!base_url.empty(), std::string(to_string(kind)) + " backend needs a base_url");
  require(timeout.count() > 0, "backend timeout must be positive");
  require(max_retries >= 0 && max_retries <= kMaxRetriesLimit, "max_retries must be in [0, 5]");
  require(retry_backoff.count() >= 0, "retry_backoff must be non-negative");
  require(image_width > 0 && image_height > 0, "image size must be positive");
}

std::optional<std::string> BackendConfig::token_from_env(BackendKind kind) {
  std::string name = "MGW_" + std::string(to_string(kind)) + "_TOKEN";
  for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (const char* v = std::getenv(name.c_str()); v != nullptr && *v != '\0') return std::string(v);
  return std::nullopt;
}

void ChatRequest::validate() const {
  require(!trim_view(prompt).empty(), "chat prompt must be non-empty");
  require(temperature >= 0.0 && temperature <= 2.0, "temperature must be in [0, 2]");
  require(max_new_tokens > 0, "max_new_tokens must be positive");
}

}  // namespace mgw
