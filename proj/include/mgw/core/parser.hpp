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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mgw/core/structured_response.hpp"

namespace mgw {

enum class RepairTag {
  kOuterQuotes,
  kSingleQuotes,
  kTrailingComma,
  kDoubledQuotes,
  kDuplicateResponse,
  kExtraKeys,
  kCoercedResponse,
  kFallbackText,
  kRejected,
};

std::string_view to_string(RepairTag tag);

// First balanced {...} in the text. Double-quoted strings are respected;
// fences, prose and wrapping quotes around the object are skipped.
std::optional<std::string> extract_structured_block(std::string_view raw_llm_text);

struct RepairResult {
  std::string text;
  std::vector<RepairTag> tags;
};

// Applies the textual repairs in fixed order (outer quotes, single quotes,
// trailing commas, doubled/escaped quotes, duplicate "response" keys) until the
// text stops changing. Never throws; the output may still be invalid JSON.
RepairResult apply_repairs(std::string_view candidate);

// apply_repairs followed by a strict JSON parse; throws Error(kIrreparable).
RepairResult repair_structured_text(std::string_view candidate);

struct ParseOutcome {
  std::optional<StructuredResponse> result;
  std::string failure;  // empty when result came from a structured object
  std::vector<RepairTag> repairs_applied;
  bool fell_back_to_text = false;
  std::string raw;

  bool ok() const noexcept { return result.has_value(); }
  bool strict() const noexcept { return repairs_applied.empty(); }
  nlohmann::ordered_json to_json() const;
  static ParseOutcome from_json(const nlohmann::ordered_json& j);
};

// extract -> repair -> strict parse -> canonicalize -> validate. Never throws.
// With fallback_to_text, any failure yields a text response holding the
// trimmed raw text (unless the raw text is blank).
ParseOutcome parse_structured_response(std::string_view raw_llm_text, bool fallback_to_text);

}  // namespace mgw
