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

#include "mgw/prompting/prompts.hpp"

#include "mgw/util/error.hpp"
#include "mgw/util/text.hpp"

namespace mgw {

std::string_view to_string(Role r) { return r == Role::kUser ? "User" : "Assistant"; }

ConversationHistory::ConversationHistory(std::size_t max_turns) : max_turns_(max_turns) {
  require(max_turns_ > 0, "max_turns must be positive");
}

void ConversationHistory::append(Role role, std::string text) {
  turns_.push_back({role, std::move(text)});
  if (turns_.size() > max_turns_) {
    turns_.erase(turns_.begin(),
                 turns_.begin() + static_cast<std::ptrdiff_t>(turns_.size() - max_turns_));
  }
}

nlohmann::ordered_json ConversationHistory::to_json() const {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& t : turns_) {
    arr.push_back({{"role", to_lower_ascii(to_string(t.role))}, {"text", t.text}});
  }
  return arr;
}

std::string render_fewshot_prompt(std::string_view instruction) {
  static const PromptTemplate kTemplate = PromptTemplate::shipped("fewshot");
  return render_fewshot_prompt(instruction, kTemplate);
}

std::string render_fewshot_prompt(std::string_view instruction, const PromptTemplate& tmpl) {
  require(!trim_view(instruction).empty(), "instruction must be non-empty");
  return tmpl.render({{"instruction", std::string(instruction)}});
}

std::string speech_teacher_variant(std::string_view image_body) {
  return replace_all(replace_all(std::string(image_body), "image", "speech"), "descriptions",
                     "contents");
}

std::string render_teacher_prompt(std::span<const InstructionRecord> seeds,
                                  std::span<const std::string> captions, Modality target) {
  require(target != Modality::kText, "teacher prompts target image or speech");
  static const PromptTemplate kImage = PromptTemplate::shipped("teacher_image");
  static const PromptTemplate kSpeech = PromptTemplate::shipped("teacher_speech");
  return render_teacher_prompt(seeds, captions, target == Modality::kImage ? kImage : kSpeech);
}

std::string render_teacher_prompt(std::span<const InstructionRecord> seeds,
                                  std::span<const std::string> captions,
                                  const PromptTemplate& tmpl) {
  if (seeds.size() != kSeedsPerTeacherCall) {
    fail(ErrorCode::kBadArity, "teacher prompt needs exactly 3 seeds, got " +
                                   std::to_string(seeds.size()));
  }
  if (captions.empty() || captions.size() > kMaxCaptionsPerTeacherCall) {
    fail(ErrorCode::kBadArity, "teacher prompt takes 1 to 60 captions, got " +
                                   std::to_string(captions.size()));
  }
  std::string examples;
  for (const auto& seed : seeds) {
    if (!examples.empty()) examples += "\n\n";
    examples += "[" + seed.output.response() + "]\nInstruction: " + seed.instruction;
  }
  std::string caption_lines;
  for (const auto& c : captions) {
    if (!caption_lines.empty()) caption_lines += "\n";
    caption_lines += "[" + c + "]";
  }
  return tmpl.render({{"examples", examples}, {"captions", caption_lines}});
}

std::string render_tuned_prompt(const ConversationHistory& history, std::string_view instruction) {
  require(!trim_view(instruction).empty(), "instruction must be non-empty");
  if (history.empty()) return std::string(instruction);
  std::string out;
  for (const auto& t : history.turns()) {
    out += std::string(to_string(t.role)) + ": " + t.text + "\n";
  }
  out += "User: ";
  out += instruction;
  return out;
}

}  // namespace mgw
