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

#include <string>
#include <string_view>

#include <json.hpp>

#include "mgw/core/modality.hpp"

namespace mgw {

// The (response, modality) pair the assistant LLM must emit. For image routes
// the response is the text-to-image prompt, for speech it is the exact text
// to be spoken, for text it is the final answer.
class StructuredResponse {
 public:
  // Throws Error(kInvalidArgument) if response is blank.
  StructuredResponse(Modality modality, std::string response);

  Modality modality() const noexcept { return modality_; }
  const std::string& response() const noexcept { return response_; }

  // {"type": ..., "response": ...} with exactly those two keys, in that order.
  nlohmann::ordered_json to_json(SpeechSpelling spelling = SpeechSpelling::kSpeech) const;
  std::string serialize(SpeechSpelling spelling = SpeechSpelling::kSpeech) const;

  friend bool operator==(const StructuredResponse&, const StructuredResponse&) = default;

 private:
  Modality modality_;
  std::string response_;
};

}  // namespace mgw
