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
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace mgw {

enum class BackendKind { kLlm, kImage, kSpeech, kScorer };

std::string_view to_string(BackendKind k);

inline constexpr int kMaxRetriesLimit = 5;
inline constexpr double kDefaultTemperature = 0.2;
inline constexpr int kDefaultMaxNewTokens = 256;
inline constexpr int kDefaultImageSize = 512;

struct BackendConfig {
  BackendKind kind = BackendKind::kLlm;
  std::string base_url;
  std::optional<std::string> auth_token;  // never logged or serialized
  std::chrono::milliseconds timeout{30000};
  int max_retries = 2;
  std::chrono::milliseconds retry_backoff{200};
  std::string model = "default";  // LLM "model" field
  int image_width = kDefaultImageSize;
  int image_height = kDefaultImageSize;

  // timeout > 0, 0 <= max_retries <= 5, base_url non-empty. Throws kInvalidArgument.
  void validate() const;

  // Token from MGW_<KIND>_TOKEN (e.g. MGW_LLM_TOKEN), if set.
  static std::optional<std::string> token_from_env(BackendKind kind);
};

enum class FinishReason { kStop, kLength, kError };

std::string_view to_string(FinishReason r);

struct ChatRequest {
  std::string prompt;
  double temperature = kDefaultTemperature;
  int max_new_tokens = kDefaultMaxNewTokens;

  // temperature in [0, 2], max_new_tokens > 0, prompt non-empty.
  void validate() const;
};

struct ChatReply {
  std::string text;
  FinishReason finish_reason = FinishReason::kStop;
};

}  // namespace mgw
