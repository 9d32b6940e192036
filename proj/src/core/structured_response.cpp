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

#include "mgw/core/structured_response.hpp"

#include "mgw/util/error.hpp"
#include "mgw/util/text.hpp"

namespace mgw {

StructuredResponse::StructuredResponse(Modality modality, std::string response)
    : modality_(modality), response_(std::move(response)) {
  require(!trim_view(response_).empty(), "structured response must be non-empty");
}

nlohmann::ordered_json StructuredResponse::to_json(SpeechSpelling spelling) const {
  nlohmann::ordered_json j;
  j["type"] = std::string(to_string(modality_, spelling));
  j["response"] = response_;
  return j;
}

std::string StructuredResponse::serialize(SpeechSpelling spelling) const {
  return dump_json(to_json(spelling));
}

}  // namespace mgw
