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

#include "mgw/eval/report.hpp"

#include <algorithm>
#include <cstdio>

#include "mgw/util/error.hpp"
#include "mgw/util/files.hpp"
#include "mgw/util/text.hpp"

namespace mgw {
namespace {

using ojson = nlohmann::ordered_json;

constexpr std::array<const char*, 5> kColumns = {"Modality Acc.(%)", "CLIP", "FID", "QA", "BLEU"};

std::string cell(const std::optional<double>& v, double scale, const char* fmt) {
  if (!v) return std::string(kMissingCell);
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, *v * scale);
  return buf;
}

std::array<std::optional<double>, 5> report_values(const EvalReport& r) {
  return {r.modality_accuracy.value, r.clip_mean.value, r.fid.value, r.qa_accuracy.value,
          r.speech_bleu.value};
}

std::array<std::string, 5> render_cells(const std::array<std::optional<double>, 5>& v) {
  return {cell(v[0], 100.0, "%.1f"), cell(v[1], 1.0, "%.2f"), cell(v[2], 1.0, "%.2f"),
          cell(v[3], 100.0, "%.1f"), cell(v[4], 1.0, "%.3f")};
}

std::string table_header() {
  std::string s = "| System |";
  std::string rule = "|---|";
  for (const char* c : kColumns) {
    s += std::string(" ") + c + " |";
    rule += "---:|";
  }
  return s + "\n" + rule + "\n";
}

}  // namespace

std::string render_markdown(const EvalReport& report) {
  std::string out = "# Evaluation report\n\n";
  out += table_header();
  out += "| " + report.system + " |";
  for (const auto& c : render_cells(report_values(report))) out += " " + c + " |";
  out += "\n\n";
  const std::pair<const char*, const MetricSlot*> slots[] = {
      {"Modality Acc.", &report.modality_accuracy}, {"CLIP", &report.clip_mean},
      {"FID", &report.fid}, {"QA", &report.qa_accuracy}, {"BLEU", &report.speech_bleu}};
  for (const auto& [name, slot] : slots) {
    if (!slot->value) out += std::string("- ") + name + " missing: " + slot->absent_reason + "\n";
  }
  out += "- items: " + std::to_string(report.completed) + "/" + std::to_string(report.items) +
         ", parse fallbacks: " + std::to_string(report.parse_fallbacks) +
         ", backend errors: " + std::to_string(report.backend_errors) +
         ", LLM calls: " + std::to_string(report.llm_calls) + "\n";
  out += "- policy: " + report.policy + ", config digest: " + report.config_digest + "\n";
  return out;
}

std::string render_ledger(std::span<const ItemResult> items) {
  std::vector<const ItemResult*> sorted;
  for (const auto& it : items) sorted.push_back(&it);
  std::sort(sorted.begin(), sorted.end(),
            [](const ItemResult* a, const ItemResult* b) { return a->record_id < b->record_id; });
  std::string out;
  for (const auto* it : sorted) out += dump_json(it->to_json(false, false)) + "\n";
  return out;
}

void write_report(const EvalOutcome& outcome, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "report.json", dump_json(outcome.report.to_json(), 2) + "\n");
  write_file_atomic(dir / "report.md", render_markdown(outcome.report));
  write_file_atomic(dir / "ledger.jsonl", render_ledger(outcome.items));
}

EvalReport recompute_report_from_dir(const std::filesystem::path& dir, const SystemConfig& system) {
  const auto written = EvalReport::from_json(ojson::parse(read_file(dir / "report.json")));
  std::vector<ItemResult> items;
  for (const auto& line : split_lines(read_file(dir / "ledger.jsonl"))) {
    if (trim_view(line).empty()) continue;
    auto j = ojson::parse(line);
    // Ledger artifacts are metadata only; aggregation never reads bytes.
    if (j.contains("artifact") && j["artifact"].is_object() && !j["artifact"].contains("bytes_b64")) {
      j["artifact"] = nullptr;
    }
    items.push_back(ItemResult::from_json(j));
  }
  return compute_report(std::move(items), written.items, system, written.penalize_mismatch,
                        written.include_text_ground, written.fid);
}

ojson Comparison::to_json() const {
  ojson j;
  j["columns"] = kColumns;
  auto rows_json = ojson::array();
  for (const auto& r : rows) {
    ojson row;
    row["system"] = r.system;
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      row[kColumns[c]] = {{"value", r.values[c] ? ojson(*r.values[c]) : ojson(nullptr)},
                          {"rank", r.ranks[c] ? ojson(*r.ranks[c]) : ojson(nullptr)}};
    }
    rows_json.push_back(std::move(row));
  }
  j["rows"] = std::move(rows_json);
  j["notes"] = notes;
  return j;
}

std::string Comparison::to_markdown() const {
  std::string out = table_header();
  for (const auto& r : rows) {
    out += "| " + r.system + " |";
    const auto cells = render_cells(r.values);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out += " " + cells[c];
      if (r.ranks[c]) out += " (#" + std::to_string(*r.ranks[c]) + ")";
      out += " |";
    }
    out += "\n";
  }
  if (!notes.empty()) out += "\n";
  for (const auto& n : notes) out += "- " + n + "\n";
  return out;
}

Comparison compare_systems(std::span<const ojson> reports) {
  require(reports.size() >= 2, "comparison needs at least two reports");
  std::vector<EvalReport> parsed;
  for (const auto& j : reports) parsed.push_back(EvalReport::from_json(j));

  Comparison cmp;
  for (const auto& r : parsed) cmp.rows.push_back({r.system, report_values(r), {}});
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    const bool lower_is_better = c == 2;
    for (auto& row : cmp.rows) {
      if (!row.values[c]) {
        cmp.notes.push_back(row.system + ": " + kColumns[c] + " missing");
        continue;
      }
      // Competition ranking: 1 + number of strictly better systems.
      std::size_t better = 0;
      for (const auto& other : cmp.rows) {
        if (!other.values[c]) continue;
        if (lower_is_better ? *other.values[c] < *row.values[c] : *other.values[c] > *row.values[c]) {
          ++better;
        }
      }
      row.ranks[c] = better + 1;
    }
  }
  return cmp;
}

}  // namespace mgw
