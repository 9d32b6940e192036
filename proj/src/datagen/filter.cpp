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

#include "mgw/datagen/filter.hpp"

#include "mgw/kernels/similarity.hpp"
#include "mgw/util/embedded.hpp"
#include "mgw/util/error.hpp"
#include "mgw/util/files.hpp"
#include "mgw/util/text.hpp"

namespace mgw {
namespace {

// Pads with spaces so whole-word phrases can be found with a plain find.
std::string padded(std::string_view s) { return " " + normalize_words(s) + " "; }

bool mentions_any(const std::string& haystack, const std::vector<std::string>& terms) {
  for (const auto& t : terms) {
    const std::string needle = padded(t);
    if (needle.size() > 2 && haystack.find(needle) != std::string::npos) return true;
  }
  return false;
}

bool requests_other_language(const std::string& haystack, const std::vector<std::string>& languages) {
  const auto translate = haystack.find(" translate ");
  for (const auto& lang : languages) {
    const std::string name = normalize_words(lang);
    if (name.empty()) continue;
    if (haystack.find(" in " + name + " ") != std::string::npos) return true;
    if (translate != std::string::npos &&
        haystack.find(" into " + name + " ", translate) != std::string::npos) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<std::string> parse_lexicon(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& line : split_lines(text)) {
    const auto t = trim_view(line);
    if (t.empty() || t.front() == '#') continue;
    out.push_back(to_lower_ascii(t));
  }
  return out;
}

std::vector<std::string> load_lexicon(const std::filesystem::path& path) {
  return parse_lexicon(read_file(path));
}

std::vector<std::string> shipped_lexicon(std::string_view name) {
  const auto text = embedded_file(name);
  require(!text.empty(), "no shipped lexicon named '" + std::string(name) + "'");
  return parse_lexicon(text);
}

std::string_view to_string(FilterReason r) {
  switch (r) {
    case FilterReason::kEmpty: return "empty";
    case FilterReason::kMalformed: return "malformed";
    case FilterReason::kNonspeechAudio: return "nonspeech_audio";
    case FilterReason::kNonEnglishSpeech: return "non_english_speech";
    case FilterReason::kDuplicate: return "duplicate";
  }
  return "unknown";
}

void FilterReport::add(FilterReason r) {
  switch (r) {
    case FilterReason::kEmpty: ++empty; break;
    case FilterReason::kMalformed: ++malformed; break;
    case FilterReason::kNonspeechAudio: ++nonspeech_audio; break;
    case FilterReason::kNonEnglishSpeech: ++non_english_speech; break;
    case FilterReason::kDuplicate: ++duplicate; break;
  }
}

FilterReport& FilterReport::operator+=(const FilterReport& o) {
  input += o.input;
  retained += o.retained;
  empty += o.empty;
  malformed += o.malformed;
  nonspeech_audio += o.nonspeech_audio;
  non_english_speech += o.non_english_speech;
  duplicate += o.duplicate;
  return *this;
}

nlohmann::ordered_json FilterReport::to_json() const {
  nlohmann::ordered_json j;
  j["input"] = input;
  j["retained"] = retained;
  j["removed"] = {{"malformed", malformed},
                  {"nonspeech_audio", nonspeech_audio},
                  {"non_english_speech", non_english_speech},
                  {"duplicate", duplicate},
                  {"empty", empty}};
  return j;
}

FilterReport FilterReport::from_json(const nlohmann::ordered_json& j) {
  FilterReport r;
  r.input = j.at("input").get<std::size_t>();
  r.retained = j.at("retained").get<std::size_t>();
  const auto& rm = j.at("removed");
  r.malformed = rm.at("malformed").get<std::size_t>();
  r.nonspeech_audio = rm.at("nonspeech_audio").get<std::size_t>();
  r.non_english_speech = rm.at("non_english_speech").get<std::size_t>();
  r.duplicate = rm.at("duplicate").get<std::size_t>();
  r.empty = rm.at("empty").get<std::size_t>();
  return r;
}

FilterResult filter_instructions(std::span<const CaptionInstruction> pairs, Modality modality,
                                 const FilterOptions& options) {
  require(options.dedup_threshold > 0.0 && options.dedup_threshold <= 1.0,
          "dedup threshold must be in (0, 1]");
  FilterResult out;
  out.report.input = pairs.size();
  std::vector<kernels::TrigramSet> kept;
  for (const auto& pair : pairs) {
    std::optional<FilterReason> reason;
    const std::string text = padded(pair.instruction);
    kernels::TrigramSet grams;
    if (trim_view(pair.instruction).empty()) {
      reason = FilterReason::kEmpty;
    } else if (trim_view(pair.caption).empty()) {
      reason = FilterReason::kMalformed;
    } else if (modality == Modality::kSpeech && mentions_any(text, options.nonspeech_terms)) {
      reason = FilterReason::kNonspeechAudio;
    } else if (modality == Modality::kSpeech && requests_other_language(text, options.languages)) {
      reason = FilterReason::kNonEnglishSpeech;
    } else {
      grams = kernels::char_trigrams(normalize_words(pair.instruction));
      if (kernels::parallel::first_at_least(grams, kept, options.dedup_threshold)) {
        reason = FilterReason::kDuplicate;
      }
    }
    if (reason) {
      out.report.add(*reason);
      out.removed.push_back({pair, *reason});
      continue;
    }
    kept.push_back(std::move(grams));
    out.retained.push_back(build_record(pair.caption, pair.instruction, modality));
  }
  out.report.retained = out.retained.size();
  return out;
}

InstructionRecord build_record(std::string_view caption, std::string_view instruction,
                               Modality modality) {
  require(!trim_view(caption).empty(), "caption must be non-empty");
  require(!trim_view(instruction).empty(), "instruction must be non-empty");
  return InstructionRecord{.instruction = trim(instruction),
                           .output = StructuredResponse(modality, trim(caption)),
                           .image_id = std::nullopt,
                           .source = RecordSource::kTeacher,
                           .id = std::nullopt,
                           .qa = std::nullopt,
                           .tags = {}};
}

}  // namespace mgw
