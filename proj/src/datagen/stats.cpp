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

#include "mgw/datagen/stats.hpp"

#include <algorithm>
#include <map>

#include "mgw/datagen/filter.hpp"
#include "mgw/util/text.hpp"

namespace mgw {
namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

StatsLexicons StatsLexicons::shipped() {
  StatsLexicons lex;
  for (auto& v : shipped_lexicon("verbs")) lex.verbs.insert(std::move(v));
  for (auto& n : shipped_lexicon("nouns")) lex.nouns.insert(std::move(n));
  return lex;
}

std::string lemmatize(std::string_view token, const std::set<std::string, std::less<>>& lexicon) {
  if (lexicon.contains(token)) return std::string(token);
  std::vector<std::string> candidates;
  auto strip = [&](std::string_view suffix, std::string_view repl) {
    if (!ends_with(token, suffix)) return;
    std::string stem(token.substr(0, token.size() - suffix.size()));
    candidates.push_back(stem + std::string(repl));
    // running -> runn -> run
    if (repl.empty() && stem.size() >= 2 && stem.back() == stem[stem.size() - 2]) {
      candidates.push_back(stem.substr(0, stem.size() - 1));
    }
  };
  strip("ies", "y");
  strip("ied", "y");
  strip("ing", "");
  strip("ing", "e");
  strip("ed", "");
  strip("ed", "e");
  strip("es", "");
  strip("s", "");
  for (const auto& c : candidates) {
    if (lexicon.contains(c)) return c;
  }
  return {};
}

std::pair<std::string, std::string> extract_verb_noun(std::string_view instruction,
                                                      const StatsLexicons& lex) {
  const auto tokens = split_words(normalize_words(instruction));
  std::size_t i = 0;
  std::string verb;
  for (; i < tokens.size(); ++i) {
    verb = lemmatize(tokens[i], lex.verbs);
    if (!verb.empty()) break;
  }
  if (verb.empty()) return {std::string(kNoneBucket), std::string(kNoneBucket)};
  std::string noun;
  for (++i; i < tokens.size(); ++i) {
    const std::string n = lemmatize(tokens[i], lex.nouns);
    if (!n.empty()) {
      noun = n;
    } else if (!noun.empty()) {
      break;
    }
  }
  return {verb, noun.empty() ? std::string(kNoneBucket) : noun};
}

nlohmann::ordered_json VerbNounTable::to_json() const {
  nlohmann::ordered_json j;
  j["total"] = total;
  auto rows_json = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    auto nouns_json = nlohmann::ordered_json::array();
    for (const auto& [noun, count] : r.nouns) nouns_json.push_back({{"noun", noun}, {"count", count}});
    rows_json.push_back({{"verb", r.verb}, {"count", r.count}, {"nouns", std::move(nouns_json)}});
  }
  j["verbs"] = std::move(rows_json);
  return j;
}

VerbNounTable verb_noun_stats(std::span<const InstructionRecord> records, const StatsLexicons& lex) {
  std::map<std::string, std::map<std::string, std::size_t>> cells;
  for (const auto& r : records) {
    auto [verb, noun] = extract_verb_noun(r.instruction, lex);
    ++cells[verb][noun];
  }
  VerbNounTable table;
  table.total = records.size();
  for (auto& [verb, nouns] : cells) {
    VerbRow row{verb, 0, {}};
    for (auto& [noun, count] : nouns) {
      row.count += count;
      row.nouns.emplace_back(noun, count);
    }
    std::stable_sort(row.nouns.begin(), row.nouns.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    table.rows.push_back(std::move(row));
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const VerbRow& a, const VerbRow& b) { return a.count > b.count; });
  return table;
}

}  // namespace mgw
