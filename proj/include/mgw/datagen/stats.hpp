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
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mgw/core/records.hpp"

namespace mgw {

inline constexpr std::string_view kNoneBucket = "(none)";

struct StatsLexicons {
  std::set<std::string, std::less<>> verbs;
  std::set<std::string, std::less<>> nouns;

  static StatsLexicons shipped();
};

// Maps an inflected token to a lexicon entry by trying the token itself, then
// suffix-stripped candidates (-ies, -ing, -ed, -es, -s, doubled consonants);
// empty if none is in the lexicon.
std::string lemmatize(std::string_view token, const std::set<std::string, std::less<>>& lexicon);

// Root verb = first lexicon verb scanning left to right. Noun = last token of
// the first run of lexicon nouns after it ("voice clip" -> "clip"). Misses
// map to "(none)".
std::pair<std::string, std::string> extract_verb_noun(std::string_view instruction,
                                                      const StatsLexicons& lex);

struct VerbRow {
  std::string verb;
  std::size_t count = 0;
  std::vector<std::pair<std::string, std::size_t>> nouns;  // count desc, then name
};

struct VerbNounTable {
  std::size_t total = 0;
  std::vector<VerbRow> rows;  // count desc, then verb

  nlohmann::ordered_json to_json() const;
};

VerbNounTable verb_noun_stats(std::span<const InstructionRecord> records,
                              const StatsLexicons& lex = StatsLexicons::shipped());

}  // namespace mgw
