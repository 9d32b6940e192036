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
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mgw/backends/backends.hpp"
#include "mgw/core/records.hpp"

namespace mgw {

// Backend selection by spec string: an http(s):// base URL, or one of the
// in-process mocks
//   llm:    mock:oracle mock:keyword mock:text mock:teacher mock:garbage mock:down
//   image:  mock:hash mock:down
//   speech: mock:echo mock:down
//   scorer: mock:overlap mock:down
struct BackendOptions {
  std::shared_ptr<CallLog> log;
  // mock:oracle replies keyed by instruction; empty -> keyword heuristic.
  std::map<std::string, std::string> oracle_replies;
  std::chrono::milliseconds timeout{30000};
  int max_retries = 2;
  std::chrono::milliseconds retry_backoff{200};
  std::string model = "default";
  int image_width = kDefaultImageSize;
  int image_height = kDefaultImageSize;
};

struct BackendSet {
  std::shared_ptr<ChatBackend> llm;
  std::shared_ptr<ImageBackend> image;
  std::shared_ptr<SpeechBackend> speech;
  std::shared_ptr<ScorerBackend> scorer;
};

bool is_mock_spec(std::string_view spec);

// Throw Error(kInvalidArgument) for an unknown mock name or malformed URL.
std::shared_ptr<ChatBackend> make_chat_backend(std::string_view spec, const BackendOptions& opts);
std::shared_ptr<ImageBackend> make_image_backend(std::string_view spec, const BackendOptions& opts);
std::shared_ptr<SpeechBackend> make_speech_backend(std::string_view spec, const BackendOptions& opts);
std::shared_ptr<ScorerBackend> make_scorer_backend(std::string_view spec, const BackendOptions& opts);

// The oracle table for a corpus: instruction -> serialized ground-truth output.
std::map<std::string, std::string> oracle_replies_for(const std::vector<InstructionRecord>& records);

}  // namespace mgw
