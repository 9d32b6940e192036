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

#include <thread>

#include "mgw/backends/backends.hpp"
#include "mgw/util/error.hpp"
#include "mgw/util/text.hpp"

namespace mgw {

ChatReply ChatBackend::complete(const ChatRequest& req) {
  req.validate();
  return do_complete(req);
}

MediaArtifact ImageBackend::generate(std::string_view prompt, std::optional<std::uint64_t> seed) {
  require(!trim_view(prompt).empty(), "image prompt must be non-empty");
  return do_generate(prompt, seed);
}

MediaArtifact SpeechBackend::synthesize(std::string_view text) {
  require(!trim_view(text).empty(), "speech text must be non-empty");
  return do_synthesize(text);
}

double ScorerBackend::clip(const MediaArtifact& image, std::string_view text) {
  require(image.media_kind == MediaKind::kImage, "CLIP scoring needs an image artifact");
  return do_clip(image, text);
}

FidHandle ScorerBackend::submit_fid(std::span<const FidPair> pairs) {
  require(!pairs.empty(), "FID batch must be non-empty");
  return do_submit_fid(pairs);
}

FidStatus ScorerBackend::poll_fid(const FidHandle& handle) { return do_poll_fid(handle); }

DirectoryReferenceStore::DirectoryReferenceStore(std::filesystem::path dir)
    : dir_(std::move(dir)) {}

bool DirectoryReferenceStore::contains(const std::string& image_id) const {
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir_, ec)) {
    if (entry.is_regular_file() && entry.path().stem() == image_id) return true;
  }
  return false;
}

ChatReply complete_chat(ChatBackend& llm, const ChatRequest& req) { return llm.complete(req); }

MediaArtifact generate_image(ImageBackend& backend, std::string_view prompt,
                             std::optional<std::uint64_t> seed) {
  return backend.generate(prompt, seed);
}

MediaArtifact synthesize_speech(SpeechBackend& backend, std::string_view text) {
  return backend.synthesize(text);
}

double score_clip(ScorerBackend& scorer, const MediaArtifact& image, std::string_view text) {
  return scorer.clip(image, text);
}

FidHandle collect_fid_pair(ScorerBackend& scorer, const ReferenceStore& refs,
                           std::span<const FidPair> batch) {
  require(!batch.empty(), "FID batch must be non-empty");
  std::string missing;
  for (const auto& pair : batch) {
    if (!refs.contains(pair.reference_image_id)) {
      if (!missing.empty()) missing += ", ";
      missing += pair.reference_image_id;
    }
  }
  if (!missing.empty()) fail(ErrorCode::kMissingReference, "unresolved image ids: " + missing);
  return scorer.submit_fid(batch);
}

FidStatus await_fid(ScorerBackend& scorer, const FidHandle& handle,
                    std::chrono::milliseconds deadline, std::chrono::milliseconds interval) {
  const auto until = std::chrono::steady_clock::now() + deadline;
  for (;;) {
    FidStatus st = scorer.poll_fid(handle);
    if (st.status != "running") return st;
    if (std::chrono::steady_clock::now() >= until) {
      fail(ErrorCode::kTimeout, "FID job " + handle.job_id + " still running");
    }
    std::this_thread::sleep_for(interval);
  }
}

}  // namespace mgw
