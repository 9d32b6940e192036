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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mgw/core/records.hpp"
#include "mgw/datagen/generation.hpp"

namespace mgw {

// One entry per non-blank line; '#' starts a comment line. Entries lowercased.
std::vector<std::string> parse_lexicon(std::string_view text);
std::vector<std::string> load_lexicon(const std::filesystem::path& path);
// "nonspeech", "languages", "verbs" or "nouns".
std::vector<std::string> shipped_lexicon(std::string_view name);

enum class FilterReason { kEmpty, kMalformed, kNonspeechAudio, kNonEnglishSpeech, kDuplicate };

std::string_view to_string(FilterReason r);

struct FilterReport {
  std::size_t input = 0;
  std::size_t retained = 0;
  std::size_t empty = 0;
  std::size_t malformed = 0;
  std::size_t nonspeech_audio = 0;
  std::size_t non_english_speech = 0;
  std::size_t duplicate = 0;

  std::size_t removed() const {
    return empty + malformed + nonspeech_audio + non_english_speech + duplicate;
  }
  void add(FilterReason r);
  FilterReport& operator+=(const FilterReport& other);

  nlohmann::ordered_json to_json() const;
  static FilterReport from_json(const nlohmann::ordered_json& j);
  friend bool operator==(const FilterReport&, const FilterReport&) = default;
};

struct FilterOptions {
  std::vector<std::string> nonspeech_terms = shipped_lexicon("nonspeech");
  std::vector<std::string> languages = shipped_lexicon("languages");
  double dedup_threshold = 0.8;  // character-trigram Jaccard
};

struct Removal {
  CaptionInstruction pair;
  FilterReason reason;
};

struct FilterResult {
  std::vector<InstructionRecord> retained;
  std::vector<Removal> removed;
  FilterReport report;
};

// Removal rules in order, first match wins: blank instruction; blank caption;
// (speech only) non-speech sound request; (speech only) request to read in a
// language other than English; near-duplicate of an already retained
// instruction.
FilterResult filter_instructions(std::span<const CaptionInstruction> pairs, Modality modality,
                                 const FilterOptions& options = {});

// Record whose response is the trimmed caption. Throws Error(kInvalidArgument)
// if either side is blank.
InstructionRecord build_record(std::string_view caption, std::string_view instruction,
                               Modality modality);

}  // namespace mgw
