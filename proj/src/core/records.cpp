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

#include "mgw/core/records.hpp"

#include "mgw/util/digest.hpp"
#include "mgw/util/error.hpp"
#include "mgw/util/files.hpp"
#include "mgw/util/text.hpp"

namespace mgw {

std::string_view to_string(RecordSource s) {
  switch (s) {
    case RecordSource::kSeed: return "seed";
    case RecordSource::kTeacher: return "teacher";
    case RecordSource::kHuman: return "human";
    case RecordSource::kSampledBenchmark: return "sampled-benchmark";
  }
  return "teacher";
}

void QAItem::validate() const {
  require(!choices.empty(), "QA item has no choices");
  require(!correct_indices.empty(), "QA item has no correct index");
  for (std::size_t idx : correct_indices) {
    require(idx < choices.size(), "QA correct index " + std::to_string(idx) + " out of range");
  }
}

nlohmann::ordered_json record_to_json(const InstructionRecord& r, SpeechSpelling spelling) {
  nlohmann::ordered_json j;
  if (r.id) j["id"] = *r.id;
  j["instruction"] = r.instruction;
  auto out = r.output.to_json(spelling);
  if (r.image_id) out["image_id"] = *r.image_id;
  j["output"] = std::move(out);
  if (r.qa) {
    j["choices"] = r.qa->choices;
    j["correct_indices"] = r.qa->correct_indices;
  }
  if (!r.tags.empty()) j["tags"] = r.tags;
  return j;
}

InstructionRecord record_from_json(const nlohmann::ordered_json& j, RecordSource source) {
  require(j.is_object(), "record is not an object");
  const auto instr = j.find("instruction");
  require(instr != j.end() && instr->is_string(), "record lacks string \"instruction\"");
  require(!trim_view(instr->get_ref<const std::string&>()).empty(), "empty instruction");
  const auto out = j.find("output");
  require(out != j.end() && out->is_object(), "record lacks object \"output\"");
  const auto type = out->find("type");
  const auto resp = out->find("response");
  require(type != out->end() && type->is_string(), "output lacks string \"type\"");
  require(resp != out->end() && resp->is_string(), "output lacks string \"response\"");

  InstructionRecord r{instr->get<std::string>(),
                      StructuredResponse(canonicalize_modality(type->get<std::string>()),
                                         resp->get<std::string>()),
                      std::nullopt, source, std::nullopt, std::nullopt, {}};
  if (auto it = out->find("image_id"); it != out->end() && !it->is_null()) {
    r.image_id = it->is_string() ? it->get<std::string>() : it->dump();
  } else if (auto top = j.find("image_id"); top != j.end() && !top->is_null()) {
    r.image_id = top->is_string() ? top->get<std::string>() : top->dump();
  }
  if (auto it = j.find("id"); it != j.end() && !it->is_null()) {
    r.id = it->is_string() ? it->get<std::string>() : it->dump();
  }
  if (auto it = j.find("choices"); it != j.end()) {
    QAItem qa;
    qa.question = r.instruction;
    qa.choices = it->get<std::vector<std::string>>();
    qa.correct_indices = j.value("correct_indices", std::vector<std::size_t>{});
    qa.validate();
    r.qa = std::move(qa);
  }
  if (auto it = j.find("tags"); it != j.end()) r.tags = it->get<std::vector<std::string>>();
  return r;
}

std::string record_id(const InstructionRecord& r) {
  if (r.id) return *r.id;
  return sha256_hex(dump_json(record_to_json(r))).substr(0, 16);
}

std::vector<InstructionRecord> parse_corpus(std::string_view text, std::string_view origin,
                                            RecordSource source) {
  std::vector<InstructionRecord> records;
  std::size_t line_no = 0;
  for (const std::string& line : split_lines(text)) {
    ++line_no;
    if (trim_view(line).empty()) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(line_no);
    const auto j = nlohmann::ordered_json::parse(line, nullptr, false);
    if (j.is_discarded()) fail(ErrorCode::kInvalidArgument, where + ": invalid JSON");
    try {
      records.push_back(record_from_json(j, source));
    } catch (const Error& e) {
      fail(ErrorCode::kInvalidArgument, where + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::kInvalidArgument, where + ": " + e.what());
    }
  }
  return records;
}

std::vector<InstructionRecord> read_corpus(const std::filesystem::path& path,
                                           RecordSource source) {
  return parse_corpus(read_file(path), path.string(), source);
}

std::string serialize_corpus(const std::vector<InstructionRecord>& records,
                             SpeechSpelling spelling) {
  std::string out;
  for (const auto& r : records) {
    out += dump_json(record_to_json(r, spelling));
    out.push_back('\n');
  }
  return out;
}

void write_corpus(const std::filesystem::path& path,
                  const std::vector<InstructionRecord>& records, SpeechSpelling spelling) {
  write_file_atomic(path, serialize_corpus(records, spelling));
}

}  // namespace mgw
