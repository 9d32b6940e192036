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

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "mgw/backends/backends.hpp"
#include "mgw/core/modality.hpp"
#include "mgw/util/digest.hpp"
#include "mgw/util/error.hpp"

namespace mgw {

// Deterministic in-process backends. Output bytes depend only on inputs, so
// runs are reproducible across processes and platforms. Chat mocks truncate
// replies longer than max_new_tokens whitespace words and report kLength.

// Replies in order; once exhausted the last reply repeats.
class ScriptedChat final : public ChatBackend {
 public:
  explicit ScriptedChat(std::vector<std::string> replies, std::shared_ptr<CallLog> log = nullptr);
  std::string describe() const override { return "mock:script"; }
  std::size_t calls() const;

 protected:
  ChatReply do_complete(const ChatRequest& req) override;

 private:
  std::vector<std::string> replies_;
  std::shared_ptr<CallLog> log_;
  mutable std::mutex mu_;
  std::size_t next_ = 0;
};

// Reply computed from the prompt.
class FunctionChat final : public ChatBackend {
 public:
  FunctionChat(std::string name, std::function<std::string(const std::string&)> fn,
               std::shared_ptr<CallLog> log = nullptr);
  std::string describe() const override { return name_; }

 protected:
  ChatReply do_complete(const ChatRequest& req) override;

 private:
  std::string name_;
  std::function<std::string(const std::string&)> fn_;
  std::shared_ptr<CallLog> log_;
};

// The instruction a rendered prompt asks about: the text after the last
// "Instruction: " (few-shot) or "User: " (tuned) marker, else the whole prompt.
std::string instruction_from_prompt(std::string_view prompt);

// Answers each known instruction with its scripted reply (e.g. the record's
// ground-truth structured response); unknown instructions get `fallback`.
std::unique_ptr<ChatBackend> make_oracle_chat(std::map<std::string, std::string> replies,
                                              std::string fallback,
                                              std::shared_ptr<CallLog> log = nullptr);
// Keyword heuristic used for backend-free demos.
std::unique_ptr<ChatBackend> make_keyword_chat(std::shared_ptr<CallLog> log = nullptr);
// Always {"type": "text", ...}.
std::unique_ptr<ChatBackend> make_always_text_chat(std::shared_ptr<CallLog> log = nullptr);
// Teacher stand-in: one "[caption]\nInstruction: ..." block per bracketed
// caption in the prompt's caption section.
std::unique_ptr<ChatBackend> make_teacher_chat(std::shared_ptr<CallLog> log = nullptr);
// Every call throws Error(code).
std::unique_ptr<ChatBackend> make_failing_chat(ErrorCode code, std::shared_ptr<CallLog> log = nullptr);

// 64x64 24-bit BMP whose pixels are a function of sha256(prompt, seed).
Bytes hash_image_bytes(std::string_view prompt, std::optional<std::uint64_t> seed);
// 8 kHz 16-bit mono WAV; one square-wave tone per byte of text.
Bytes echo_speech_bytes(std::string_view text);

class HashImageBackend final : public ImageBackend {
 public:
  explicit HashImageBackend(std::shared_ptr<CallLog> log = nullptr) : log_(std::move(log)) {}
  std::string describe() const override { return "mock:hash"; }

 protected:
  MediaArtifact do_generate(std::string_view prompt, std::optional<std::uint64_t> seed) override;

 private:
  std::shared_ptr<CallLog> log_;
};

class EchoSpeechBackend final : public SpeechBackend {
 public:
  explicit EchoSpeechBackend(std::shared_ptr<CallLog> log = nullptr) : log_(std::move(log)) {}
  std::string describe() const override { return "mock:echo"; }

 protected:
  MediaArtifact do_synthesize(std::string_view text) override;

 private:
  std::shared_ptr<CallLog> log_;
};

// 100 * |tokens(a) ∩ tokens(b)| / |tokens(a) ∪ tokens(b)| over BLEU token sets.
double overlap_score(std::string_view a, std::string_view b);

// CLIP = overlap_score(image.prompt_used, text). FID jobs complete
// immediately with a value derived from the pair hashes.
class OverlapScorer final : public ScorerBackend {
 public:
  explicit OverlapScorer(std::shared_ptr<CallLog> log = nullptr) : log_(std::move(log)) {}
  std::string describe() const override { return "mock:overlap"; }

 protected:
  double do_clip(const MediaArtifact& image, std::string_view text) override;
  FidHandle do_submit_fid(std::span<const FidPair> pairs) override;
  FidStatus do_poll_fid(const FidHandle& handle) override;

 private:
  std::shared_ptr<CallLog> log_;
  std::mutex mu_;
  std::map<std::string, double> jobs_;
};

std::unique_ptr<ImageBackend> make_failing_image(ErrorCode code, std::shared_ptr<CallLog> log = nullptr);
std::unique_ptr<SpeechBackend> make_failing_speech(ErrorCode code, std::shared_ptr<CallLog> log = nullptr);
std::unique_ptr<ScorerBackend> make_failing_scorer(std::shared_ptr<CallLog> log = nullptr);

}  // namespace mgw
