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

#include <memory>

#include "mgw/backends/backends.hpp"

namespace mgw {

// JSON-over-HTTP clients for the wire protocols:
//   llm     POST {base}/v1/chat/completions
//   image   POST {base}/generate    {prompt, seed, width, height} -> {image_b64, mime}
//   speech  POST {base}/synthesize  {text} -> {audio_b64, mime}
//   scorer  POST {base}/clip, POST {base}/fid, GET {base}/fid/{job_id}
// Transport failures, timeouts, 429 and 5xx are retried up to max_retries
// times with linear backoff; other 4xx fail at once as kRemoteRefusal with the
// body preserved.

std::unique_ptr<ChatBackend> make_http_chat(BackendConfig cfg, std::shared_ptr<CallLog> log);
std::unique_ptr<ImageBackend> make_http_image(BackendConfig cfg, std::shared_ptr<CallLog> log);
std::unique_ptr<SpeechBackend> make_http_speech(BackendConfig cfg, std::shared_ptr<CallLog> log);
std::unique_ptr<ScorerBackend> make_http_scorer(BackendConfig cfg, std::shared_ptr<CallLog> log);

}  // namespace mgw
