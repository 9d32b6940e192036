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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgw/core/structured_response.hpp"

namespace mgw {

enum class RecordSource { kSeed, kTeacher, kHuman, kSampledBenchmark };

std::string_view to_string(RecordSource s);

// Multiple-choice payload carried by text rows of a validation corpus.
struct QAItem {
  std::string question;
  std::vector<std::string> choices;
  std::vector<std::size_t> correct_indices;

  // Throws Error(kInvalidArgument) on empty choices/indices or out-of-range index.
  void validate() const;
  friend bool operator==(const QAItem&, const QAItem&) = default;
};

struct InstructionRecord {
  std::string instruction;
  StructuredResponse output;
  std::optional<std::string> image_id;
  RecordSource source = RecordSource::kTeacher;
  // Validation-corpus extensions.
  std::optional<std::string> id;
  std::optional<QAItem> qa;
  std::vector<std::string> tags;

  friend bool operator==(const InstructionRecord&, const InstructionRecord&) = default;
};

// One corpus line. Field order and names follow the published record layout:
// {"instruction", "output": {"type", "response", "image_id"?}}; optional "id",
// "choices", "correct_indices", "tags" are appended only when present.
nlohmann::ordered_json record_to_json(const InstructionRecord& r,
                                      SpeechSpelling spelling = SpeechSpelling::kSpeech);
// Throws Error(kInvalidArgument) describing the first problem.
InstructionRecord record_from_json(const nlohmann::ordered_json& j,
                                   RecordSource source = RecordSource::kTeacher);

// Explicit id if set, else the first 16 hex chars of the SHA-256 of the
// canonical serialization, which makes it independent of corpus order.
std::string record_id(const InstructionRecord& r);

// JSON-lines. Blank lines are skipped; a bad line throws naming path:line.
std::vector<InstructionRecord> read_corpus(const std::filesystem::path& path,
                                           RecordSource source = RecordSource::kTeacher);
std::vector<InstructionRecord> parse_corpus(std::string_view text, std::string_view origin,
                                            RecordSource source = RecordSource::kTeacher);
std::string serialize_corpus(const std::vector<InstructionRecord>& records,
                             SpeechSpelling spelling = SpeechSpelling::kSpeech);
void write_corpus(const std::filesystem::path& path,
                  const std::vector<InstructionRecord>& records,
                  SpeechSpelling spelling = SpeechSpelling::kSpeech);

}  // namespace mgw
