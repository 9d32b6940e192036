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
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgw/backends/call_log.hpp"
#include "mgw/backends/config.hpp"
#include "mgw/backends/media.hpp"

namespace mgw {

// Client contracts. Public entry points check preconditions before any
// transport work and then call the do_* hook.

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  ChatReply complete(const ChatRequest& req);
  virtual std::string describe() const = 0;

 protected:
  virtual ChatReply do_complete(const ChatRequest& req) = 0;
};

class ImageBackend {
 public:
  virtual ~ImageBackend() = default;
  MediaArtifact generate(std::string_view prompt, std::optional<std::uint64_t> seed);
  virtual std::string describe() const = 0;

 protected:
  virtual MediaArtifact do_generate(std::string_view prompt,
                                    std::optional<std::uint64_t> seed) = 0;
};

class SpeechBackend {
 public:
  virtual ~SpeechBackend() = default;
  MediaArtifact synthesize(std::string_view text);
  virtual std::string describe() const = 0;

 protected:
  virtual MediaArtifact do_synthesize(std::string_view text) = 0;
};

struct FidPair {
  MediaArtifact generated;
  std::string reference_image_id;
};

struct FidHandle {
  std::string job_id;
};

struct FidStatus {
  std::string status;  // "running", "done", "failed"
  std::optional<double> fid;
};

class ScorerBackend {
 public:
  virtual ~ScorerBackend() = default;
  double clip(const MediaArtifact& image, std::string_view text);
  FidHandle submit_fid(std::span<const FidPair> pairs);
  FidStatus poll_fid(const FidHandle& handle);
  virtual std::string describe() const = 0;

 protected:
  virtual double do_clip(const MediaArtifact& image, std::string_view text) = 0;
  virtual FidHandle do_submit_fid(std::span<const FidPair> pairs) = 0;
  virtual FidStatus do_poll_fid(const FidHandle& handle) = 0;
};

// Where FID reference images live, keyed by image_id.
class ReferenceStore {
 public:
  virtual ~ReferenceStore() = default;
  virtual bool contains(const std::string& image_id) const = 0;
};

// Files named <image_id>.<ext> in one directory.
class DirectoryReferenceStore final : public ReferenceStore {
 public:
  explicit DirectoryReferenceStore(std::filesystem::path dir);
  bool contains(const std::string& image_id) const override;

 private:
  std::filesystem::path dir_;
};

class InMemoryReferenceStore final : public ReferenceStore {
 public:
  void add(std::string image_id) { ids_.emplace(std::move(image_id), true); }
  bool contains(const std::string& image_id) const override { return ids_.contains(image_id); }

 private:
  std::map<std::string, bool> ids_;
};

// The operation surface used by the router and the harness.
ChatReply complete_chat(ChatBackend& llm, const ChatRequest& req);
MediaArtifact generate_image(ImageBackend& backend, std::string_view prompt,
                             std::optional<std::uint64_t> seed = std::nullopt);
MediaArtifact synthesize_speech(SpeechBackend& backend, std::string_view text);
double score_clip(ScorerBackend& scorer, const MediaArtifact& image, std::string_view text);
// Throws kInvalidArgument on an empty batch, kMissingReference listing every
// unresolved id (before any upload).
FidHandle collect_fid_pair(ScorerBackend& scorer, const ReferenceStore& refs,
                           std::span<const FidPair> batch);
// Polls until done/failed or the deadline passes (kTimeout).
FidStatus await_fid(ScorerBackend& scorer, const FidHandle& handle,
                    std::chrono::milliseconds deadline = std::chrono::seconds(120),
                    std::chrono::milliseconds interval = std::chrono::milliseconds(50));

}  // namespace mgw
