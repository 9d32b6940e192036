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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mgw/core/modality.hpp"
#include "mgw/core/records.hpp"
#include "mgw/prompting/template.hpp"

namespace mgw {

inline constexpr std::size_t kDefaultMaxTurns = 6;
inline constexpr std::size_t kMaxCaptionsPerTeacherCall = 60;
inline constexpr std::size_t kSeedsPerTeacherCall = 3;

enum class Role { kUser, kAssistant };

std::string_view to_string(Role r);

struct Turn {
  Role role;
  std::string text;
  friend bool operator==(const Turn&, const Turn&) = default;
};

// Keeps only the most recent max_turns turns, in order.
class ConversationHistory {
 public:
  explicit ConversationHistory(std::size_t max_turns = kDefaultMaxTurns);

  void append(Role role, std::string text);
  const std::vector<Turn>& turns() const noexcept { return turns_; }
  std::size_t max_turns() const noexcept { return max_turns_; }
  bool empty() const noexcept { return turns_.empty(); }

  nlohmann::ordered_json to_json() const;

 private:
  std::size_t max_turns_;
  std::vector<Turn> turns_;
};

// The in-context baseline prompt with the instruction substituted.
std::string render_fewshot_prompt(std::string_view instruction);
std::string render_fewshot_prompt(std::string_view instruction, const PromptTemplate& tmpl);

// Teacher prompt for bulk instruction generation: three seed examples as
// "[response]\nInstruction: ..." blocks, then one "[caption]" line per caption.
// Throws Error(kBadArity) unless seeds.size() == 3 and 1 <= captions <= 60.
std::string render_teacher_prompt(std::span<const InstructionRecord> seeds,
                                  std::span<const std::string> captions, Modality target);
std::string render_teacher_prompt(std::span<const InstructionRecord> seeds,
                                  std::span<const std::string> captions,
                                  const PromptTemplate& tmpl);

// Keyword swap that derives the speech teacher template from the image one.
std::string speech_teacher_variant(std::string_view image_body);

// "User: ..."/"Assistant: ..." lines followed by "User: <instruction>"; with
// an empty history, the instruction alone.
std::string render_tuned_prompt(const ConversationHistory& history, std::string_view instruction);

}  // namespace mgw
