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

#include "mgw/backends/mocks.hpp"

#include <algorithm>

#include "mgw/core/structured_response.hpp"
#include "mgw/metrics/bleu.hpp"
#include "mgw/util/error.hpp"
#include "mgw/util/text.hpp"

namespace mgw {
namespace {

ChatReply truncated(std::string text, int max_new_tokens) {
  const auto words = split_words(text);
  if (static_cast<int>(words.size()) <= max_new_tokens) return {std::move(text), FinishReason::kStop};
  std::string out;
  for (int i = 0; i < max_new_tokens; ++i) {
    if (i > 0) out.push_back(' ');
    out += words[static_cast<std::size_t>(i)];
  }
  return {std::move(out), FinishReason::kLength};
}

void log_call(const std::shared_ptr<CallLog>& log, std::string_view backend,
              std::string_view op, std::string_view outcome, std::string_view input) {
  if (log) log->append({std::string(backend), std::string(op), 1, std::string(outcome), std::string(input)});
}

std::uint32_t fnv1a(std::string_view s) {
  std::uint32_t h = 2166136261u;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 16777619u;
  }
  return h;
}

void put_le(Bytes& out, std::uint32_t v, int width) {
  for (int i = 0; i < width; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

bool contains_any(std::string_view haystack, std::initializer_list<std::string_view> needles) {
  return std::any_of(needles.begin(), needles.end(),
                     [&](std::string_view n) { return haystack.find(n) != std::string_view::npos; });
}

}  // namespace

ScriptedChat::ScriptedChat(std::vector<std::string> replies, std::shared_ptr<CallLog> log)
    : replies_(std::move(replies)), log_(std::move(log)) {
  require(!replies_.empty(), "scripted chat needs at least one reply");
}

std::size_t ScriptedChat::calls() const {
  std::lock_guard lock(mu_);
  return next_;
}

ChatReply ScriptedChat::do_complete(const ChatRequest& req) {
  std::string reply;
  {
    std::lock_guard lock(mu_);
    reply = replies_[std::min(next_, replies_.size() - 1)];
    ++next_;
  }
  log_call(log_, "llm", "complete", "ok", req.prompt);
  return truncated(std::move(reply), req.max_new_tokens);
}

FunctionChat::FunctionChat(std::string name, std::function<std::string(const std::string&)> fn,
                           std::shared_ptr<CallLog> log)
    : name_(std::move(name)), fn_(std::move(fn)), log_(std::move(log)) {}

ChatReply FunctionChat::do_complete(const ChatRequest& req) {
  log_call(log_, "llm", "complete", "ok", req.prompt);
  return truncated(fn_(req.prompt), req.max_new_tokens);
}

std::string instruction_from_prompt(std::string_view prompt) {
  constexpr std::string_view kFewshot = "Instruction: ";
  constexpr std::string_view kResponse = "\nResponse:";
  if (prompt.ends_with(kResponse)) {
    const std::string_view body = prompt.substr(0, prompt.size() - kResponse.size());
    const std::size_t at = body.rfind(kFewshot);
    if (at != std::string_view::npos) return std::string(body.substr(at + kFewshot.size()));
  }
  constexpr std::string_view kUser = "User: ";
  const std::size_t at = prompt.rfind(std::string("\n").append(kUser));
  if (at != std::string_view::npos) return std::string(prompt.substr(at + 1 + kUser.size()));
  if (prompt.starts_with(kUser) && prompt.find('\n') == std::string_view::npos) {
    return std::string(prompt.substr(kUser.size()));
  }
  return std::string(prompt);
}

std::unique_ptr<ChatBackend> make_oracle_chat(std::map<std::string, std::string> replies,
                                              std::string fallback,
                                              std::shared_ptr<CallLog> log) {
  return std::make_unique<FunctionChat>(
      "mock:oracle",
      [replies = std::move(replies), fallback = std::move(fallback)](const std::string& prompt) {
        if (auto it = replies.find(instruction_from_prompt(prompt)); it != replies.end()) {
          return it->second;
        }
        // Re-ask prompts append a corrective line; fall back to the latest
        // known instruction mentioned anywhere in the prompt.
        std::size_t best_pos = 0;
        const std::string* best = nullptr;
        for (const auto& [instruction, reply] : replies) {
          const std::size_t pos = prompt.rfind(instruction);
          if (pos != std::string::npos && (best == nullptr || pos > best_pos)) {
            best_pos = pos;
            best = &reply;
          }
        }
        return best != nullptr ? *best : fallback;
      },
      std::move(log));
}

namespace {

// "Can you draw a red fox?" -> "A red fox"
std::string strip_request(const std::string& instruction) {
  static constexpr std::string_view kLead[] = {"can you ", "could you ", "please ", "i want ",
                                               "i'd like "};
  static constexpr std::string_view kAsk[] = {
      "generate an image of ", "generate a picture of ", "generate a photo of ",
      "create an image of ", "create a picture of ", "show me a picture of ",
      "show me an image of ", "show me a photo of ", "show me ", "draw me ", "draw ",
      "paint me ", "paint ", "illustrate ", "sketch ", "visualize "};
  std::string out = trim(instruction);
  for (bool changed = true; changed;) {
    changed = false;
    const std::string lower = to_lower_ascii(out);
    for (auto p : kLead) {
      if (lower.starts_with(p)) {
        out = out.substr(p.size());
        changed = true;
        break;
      }
    }
  }
  const std::string lower = to_lower_ascii(out);
  for (auto p : kAsk) {
    if (lower.starts_with(p) && out.size() > p.size()) {
      out = out.substr(p.size());
      break;
    }
  }
  while (!out.empty() && (out.back() == '?' || out.back() == '.' || out.back() == '!')) out.pop_back();
  out = trim(out);
  if (out.empty()) return trim(instruction);
  if (out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 'a' + 'A');
  return out;
}

}  // namespace

std::unique_ptr<ChatBackend> make_keyword_chat(std::shared_ptr<CallLog> log) {
  return std::make_unique<FunctionChat>(
      "mock:keyword",
      [](const std::string& prompt) {
        const std::string instruction = trim(instruction_from_prompt(prompt));
        const std::string lower = to_lower_ascii(instruction);
        if (contains_any(lower, {"picture", "image", "photo", "draw", "paint", "show me",
                                 "illustrat", "sketch", "visuali"})) {
          return StructuredResponse(Modality::kImage, strip_request(instruction)).serialize();
        }
        if (contains_any(lower, {"pronounce", "read ", "recite", "voice", "speak", "aloud",
                                 "audio", "say "})) {
          std::string spoken = instruction;
          const std::size_t open = instruction.find('\'');
          const std::size_t close = instruction.rfind('\'');
          if (open != std::string::npos && close > open + 1) {
            spoken = instruction.substr(open + 1, close - open - 1);
          }
          return StructuredResponse(Modality::kSpeech, spoken).serialize();
        }
        return StructuredResponse(Modality::kText, "Mock answer: " + instruction).serialize();
      },
      std::move(log));
}

std::unique_ptr<ChatBackend> make_always_text_chat(std::shared_ptr<CallLog> log) {
  return std::make_unique<FunctionChat>(
      "mock:text",
      [](const std::string&) {
        return StructuredResponse(Modality::kText, "I can only answer in text.").serialize();
      },
      std::move(log));
}

std::unique_ptr<ChatBackend> make_teacher_chat(std::shared_ptr<CallLog> log) {
  return std::make_unique<FunctionChat>(
      "mock:teacher",
      [](const std::string& prompt) {
        const bool speech = prompt.find("speech contents") != std::string::npos;
        static constexpr std::string_view kImageVerbs[] = {
            "Create an image of", "Draw", "Show me a picture of", "Illustrate", "Paint",
            "Design a poster showing", "Generate a photo of"};
        static constexpr std::string_view kSpeechVerbs[] = {
            "Read aloud:", "Recite this line:", "Say the following:", "Narrate:",
            "Please speak this sentence:", "Announce:"};
        const std::size_t section = prompt.find("for each of them:");
        std::string out;
        for (const auto& line : split_lines(section == std::string::npos ? "" : prompt.substr(section))) {
          const std::string_view t = trim_view(line);
          if (t.size() < 2 || t.front() != '[' || t.back() != ']') continue;
          const std::string caption(t.substr(1, t.size() - 2));
          const std::uint32_t h = fnv1a(caption);
          std::string instruction;
          if (speech) {
            instruction = std::string(kSpeechVerbs[h % std::size(kSpeechVerbs)]) + " " + caption;
          } else {
            std::string lowered = caption;
            if (!lowered.empty()) lowered[0] = to_lower_ascii(lowered.substr(0, 1))[0];
            instruction = std::string(kImageVerbs[h % std::size(kImageVerbs)]) + " " + lowered;
          }
          if (!out.empty()) out += "\n\n";
          out += "[" + caption + "]\nInstruction: " + instruction;
        }
        return out.empty() ? std::string("No captions found.") : out;
      },
      std::move(log));
}

namespace {

class FailingChat final : public ChatBackend {
 public:
  FailingChat(ErrorCode code, std::shared_ptr<CallLog> log) : code_(code), log_(std::move(log)) {}
  std::string describe() const override { return "mock:down"; }

 protected:
  ChatReply do_complete(const ChatRequest& req) override {
    log_call(log_, "llm", "complete", to_string(code_), req.prompt);
    fail(code_, "mock llm backend is down");
  }

 private:
  ErrorCode code_;
  std::shared_ptr<CallLog> log_;
};

class FailingImage final : public ImageBackend {
 public:
  FailingImage(ErrorCode code, std::shared_ptr<CallLog> log) : code_(code), log_(std::move(log)) {}
  std::string describe() const override { return "mock:down"; }

 protected:
  MediaArtifact do_generate(std::string_view prompt, std::optional<std::uint64_t>) override {
    log_call(log_, "image", "generate", to_string(code_), prompt);
    fail(code_, "mock image backend is down");
  }

 private:
  ErrorCode code_;
  std::shared_ptr<CallLog> log_;
};

class FailingSpeech final : public SpeechBackend {
 public:
  FailingSpeech(ErrorCode code, std::shared_ptr<CallLog> log) : code_(code), log_(std::move(log)) {}
  std::string describe() const override { return "mock:down"; }

 protected:
  MediaArtifact do_synthesize(std::string_view text) override {
    log_call(log_, "speech", "synthesize", to_string(code_), text);
    fail(code_, "mock speech backend is down");
  }

 private:
  ErrorCode code_;
  std::shared_ptr<CallLog> log_;
};

class FailingScorer final : public ScorerBackend {
 public:
  explicit FailingScorer(std::shared_ptr<CallLog> log) : log_(std::move(log)) {}
  std::string describe() const override { return "mock:down"; }

 protected:
  double do_clip(const MediaArtifact&, std::string_view text) override {
    log_call(log_, "scorer", "clip", "ScorerError", text);
    fail(ErrorCode::kScorerError, "mock scorer is down");
  }
  FidHandle do_submit_fid(std::span<const FidPair>) override {
    log_call(log_, "scorer", "fid", "ScorerError", "fid-batch");
    fail(ErrorCode::kScorerError, "mock scorer is down");
  }
  FidStatus do_poll_fid(const FidHandle&) override {
    fail(ErrorCode::kScorerError, "mock scorer is down");
  }

 private:
  std::shared_ptr<CallLog> log_;
};

}  // namespace

std::unique_ptr<ChatBackend> make_failing_chat(ErrorCode code, std::shared_ptr<CallLog> log) {
  return std::make_unique<FailingChat>(code, std::move(log));
}
std::unique_ptr<ImageBackend> make_failing_image(ErrorCode code, std::shared_ptr<CallLog> log) {
  return std::make_unique<FailingImage>(code, std::move(log));
}
std::unique_ptr<SpeechBackend> make_failing_speech(ErrorCode code, std::shared_ptr<CallLog> log) {
  return std::make_unique<FailingSpeech>(code, std::move(log));
}
std::unique_ptr<ScorerBackend> make_failing_scorer(std::shared_ptr<CallLog> log) {
  return std::make_unique<FailingScorer>(std::move(log));
}

Bytes hash_image_bytes(std::string_view prompt, std::optional<std::uint64_t> seed) {
  constexpr std::uint32_t kSide = 64;
  constexpr std::uint32_t kBlock = 8;
  constexpr std::uint32_t kPixelBytes = kSide * kSide * 3;
  std::string material(prompt);
  material.push_back('\x1f');
  material += seed ? std::to_string(*seed) : std::string("none");
  const auto root = sha256(as_bytes(material));

  // Colour stream: sha256(root || counter) blocks, 3 bytes per 8x8 tile.
  Bytes palette;
  for (std::uint32_t counter = 0; palette.size() < (kSide / kBlock) * (kSide / kBlock) * 3; ++counter) {
    Bytes chunk(root.begin(), root.end());
    put_le(chunk, counter, 4);
    const auto md = sha256(chunk);
    palette.insert(palette.end(), md.begin(), md.end());
  }

  Bytes bmp;
  bmp.reserve(54 + kPixelBytes);
  bmp.push_back('B');
  bmp.push_back('M');
  put_le(bmp, 54 + kPixelBytes, 4);
  put_le(bmp, 0, 4);
  put_le(bmp, 54, 4);
  put_le(bmp, 40, 4);
  put_le(bmp, kSide, 4);
  put_le(bmp, kSide, 4);
  put_le(bmp, 1, 2);
  put_le(bmp, 24, 2);
  put_le(bmp, 0, 4);
  put_le(bmp, kPixelBytes, 4);
  put_le(bmp, 2835, 4);
  put_le(bmp, 2835, 4);
  put_le(bmp, 0, 4);
  put_le(bmp, 0, 4);
  for (std::uint32_t y = 0; y < kSide; ++y) {
    for (std::uint32_t x = 0; x < kSide; ++x) {
      const std::uint32_t tile = (y / kBlock) * (kSide / kBlock) + x / kBlock;
      for (std::uint32_t c = 0; c < 3; ++c) {
        // Low bits vary per pixel so tiles are not flat.
        const auto base = palette[tile * 3 + c];
        bmp.push_back(static_cast<std::uint8_t>((base & 0xF0) | ((x + y + c) & 0x0F)));
      }
    }
  }
  return bmp;
}

Bytes echo_speech_bytes(std::string_view text) {
  constexpr std::uint32_t kRate = 8000;
  constexpr std::uint32_t kSamplesPerByte = 400;
  constexpr std::size_t kMaxBytes = 2000;
  const std::size_t n = std::min(text.size(), kMaxBytes);
  const std::uint32_t samples = static_cast<std::uint32_t>(n) * kSamplesPerByte;
  const std::uint32_t data_len = samples * 2;

  Bytes wav;
  wav.reserve(44 + data_len);
  for (char c : std::string_view("RIFF")) wav.push_back(static_cast<std::uint8_t>(c));
  put_le(wav, 36 + data_len, 4);
  for (char c : std::string_view("WAVEfmt ")) wav.push_back(static_cast<std::uint8_t>(c));
  put_le(wav, 16, 4);
  put_le(wav, 1, 2);  // PCM
  put_le(wav, 1, 2);  // mono
  put_le(wav, kRate, 4);
  put_le(wav, kRate * 2, 4);
  put_le(wav, 2, 2);
  put_le(wav, 16, 2);
  for (char c : std::string_view("data")) wav.push_back(static_cast<std::uint8_t>(c));
  put_le(wav, data_len, 4);
  for (std::size_t i = 0; i < n; ++i) {
    const auto b = static_cast<unsigned char>(text[i]);
    const std::uint32_t freq = 200 + (b % 64) * 10;
    const std::uint32_t half_period = std::max<std::uint32_t>(1, kRate / (2 * freq));
    for (std::uint32_t s = 0; s < kSamplesPerByte; ++s) {
      const auto v = static_cast<std::int16_t>(((s / half_period) % 2 == 0) ? 6000 : -6000);
      put_le(wav, static_cast<std::uint16_t>(v), 2);
    }
  }
  return wav;
}

MediaArtifact HashImageBackend::do_generate(std::string_view prompt,
                                            std::optional<std::uint64_t> seed) {
  log_call(log_, "image", "generate", "ok", prompt);
  return MediaArtifact::make(MediaKind::kImage, hash_image_bytes(prompt, seed), "image/bmp",
                             std::string(prompt));
}

MediaArtifact EchoSpeechBackend::do_synthesize(std::string_view text) {
  log_call(log_, "speech", "synthesize", "ok", text);
  return MediaArtifact::make(MediaKind::kAudio, echo_speech_bytes(text), "audio/wav",
                             std::string(text));
}

double overlap_score(std::string_view a, std::string_view b) {
  auto ta = bleu_tokenize(a);
  auto tb = bleu_tokenize(b);
  std::sort(ta.begin(), ta.end());
  ta.erase(std::unique(ta.begin(), ta.end()), ta.end());
  std::sort(tb.begin(), tb.end());
  tb.erase(std::unique(tb.begin(), tb.end()), tb.end());
  std::vector<std::string> inter;
  std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(inter));
  const std::size_t uni = ta.size() + tb.size() - inter.size();
  if (uni == 0) return 0.0;
  return 100.0 * static_cast<double>(inter.size()) / static_cast<double>(uni);
}

double OverlapScorer::do_clip(const MediaArtifact& image, std::string_view text) {
  log_call(log_, "scorer", "clip", "ok", text);
  return overlap_score(image.prompt_used, text);
}

FidHandle OverlapScorer::do_submit_fid(std::span<const FidPair> pairs) {
  log_call(log_, "scorer", "fid", "ok", "fid-batch");
  std::string material;
  double sum = 0.0;
  for (const auto& p : pairs) {
    material += p.generated.content_hash + ":" + p.reference_image_id + ";";
    const auto md = sha256(as_bytes(p.generated.content_hash + p.reference_image_id));
    sum += 100.0 * static_cast<double>(md[0]) / 255.0;
  }
  const std::string id = "fid-" + sha256_hex(material).substr(0, 12);
  std::lock_guard lock(mu_);
  jobs_[id] = sum / static_cast<double>(pairs.size());
  return {id};
}

FidStatus OverlapScorer::do_poll_fid(const FidHandle& handle) {
  std::lock_guard lock(mu_);
  const auto it = jobs_.find(handle.job_id);
  if (it == jobs_.end()) return {"failed", std::nullopt};
  return {"done", it->second};
}

}  // namespace mgw
