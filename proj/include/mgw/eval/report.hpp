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
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgw/eval/harness.hpp"

namespace mgw {

inline constexpr std::string_view kMissingCell = "\xE2\x80\x94";  // em dash

// Columns: System | Modality Acc.(%) | CLIP | FID | QA | BLEU, then one line per
// absent metric with its reason.
std::string render_markdown(const EvalReport& report);

// One JSON line per item in record-id order, without bytes or timing.
std::string render_ledger(std::span<const ItemResult> items);

// Writes report.json, report.md and ledger.jsonl under dir.
void write_report(const EvalOutcome& outcome, const std::filesystem::path& dir);

// Reads report.json and ledger.jsonl back and recomputes the report from the
// ledger; equals the written report when nothing was tampered with.
EvalReport recompute_report_from_dir(const std::filesystem::path& dir, const SystemConfig& system);

struct ComparisonRow {
  std::string system;
  std::array<std::optional<double>, 5> values;  // acc, clip, fid, qa, bleu
  std::array<std::optional<std::size_t>, 5> ranks;  // 1 = best; FID lower is better
};

struct Comparison {
  std::vector<ComparisonRow> rows;  // input order
  std::vector<std::string> notes;   // missing cells

  nlohmann::ordered_json to_json() const;
  std::string to_markdown() const;
};

// Needs at least two reports. Throws Error(kSchemaMismatch) if any document is
// not a report.
Comparison compare_systems(std::span<const nlohmann::ordered_json> reports);

}  // namespace mgw
