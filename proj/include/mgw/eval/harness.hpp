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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgw/backends/registry.hpp"
#include "mgw/core/records.hpp"
#include "mgw/metrics/metrics.hpp"
#include "mgw/router/router.hpp"

namespace mgw {

inline constexpr std::string_view kReportSchema = "mgw.eval_report/1";
inline constexpr std::size_t kDefaultEvalParallelism = 4;

// The system under test: prompt policy, routing options and backend specs
// ("mock:..." or base URLs).
struct SystemConfig {
  std::string name = "system";
  PromptPolicy policy = PromptPolicy::kTuned;
  std::string llm = "mock:oracle";
  std::string image = "mock:hash";
  std::string speech = "mock:echo";
  std::string scorer;  // empty: no CLIP/FID
  bool fallback_to_text = true;
  int max_reasks = 0;
  double temperature = kDefaultTemperature;
  int max_new_tokens = kDefaultMaxNewTokens;

  // First 16 hex chars of the SHA-256 of every field except the name.
  std::string digest() const;
  RouteOptions route_options() const;
  nlohmann::ordered_json to_json() const;
  static SystemConfig from_json(const nlohmann::ordered_json& j);
};

struct EvalJob {
  std::filesystem::path corpus;
  SystemConfig system;
  std::size_t parallelism = kDefaultEvalParallelism;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::filesystem::path> reference_dir;  // image ids for FID
  std::uint64_t rng_seed = 0;
  bool resume = false;
  bool penalize_mismatch = false;
  bool include_text_ground = false;
  // Stops claiming new items after this many were routed (cached ones do not
  // count). Used to interrupt a run deterministically.
  std::optional<std::size_t> max_items;
  const std::atomic<bool>* cancel = nullptr;

  nlohmann::ordered_json to_json() const;
  static EvalJob from_json(const nlohmann::ordered_json& j);
};

struct ItemResult {
  std::string record_id;
  Modality ground = Modality::kText;
  std::optional<Modality> predicted;  // parsed modality, even if conversion failed
  std::optional<std::string> text;
  std::optional<MediaArtifact> artifact;
  RouteTrace trace;
  std::optional<std::string> error;
  bool gated = false;
  bool has_qa = false;
  std::optional<double> clip;
  std::optional<double> bleu;
  std::optional<bool> qa_correct;
  std::optional<std::size_t> qa_chosen;
  std::vector<std::string> notes;  // reasons for absent metrics
  double wall_millis = 0.0;

  bool fell_back_to_text() const { return trace.parse_outcome.fell_back_to_text; }

  // The cache form carries artifact bytes so results survive a restart.
  nlohmann::ordered_json to_json(bool include_timing, bool include_bytes) const;
  static ItemResult from_json(const nlohmann::ordered_json& j);
};

struct MetricSlot {
  std::optional<double> value;
  std::string absent_reason;  // set iff value is absent

  nlohmann::ordered_json to_json() const;
  static MetricSlot from_json(const nlohmann::ordered_json& j);
  friend bool operator==(const MetricSlot&, const MetricSlot&) = default;
};

struct EvalReport {
  std::string system;
  std::string config_digest;
  std::string policy;
  std::size_t items = 0;
  std::size_t completed = 0;  // items with a result
  MetricSlot modality_accuracy;
  ModalityConfusion confusion;
  MetricSlot clip_mean;
  std::size_t clip_missing = 0;
  MetricSlot fid;
  MetricSlot qa_accuracy;
  MetricSlot speech_bleu;
  std::size_t parse_fallbacks = 0;
  std::size_t backend_errors = 0;
  std::size_t llm_calls = 0;
  bool penalize_mismatch = false;
  bool include_text_ground = false;

  bool complete() const { return completed == items; }
  nlohmann::ordered_json to_json() const;
  // Throws Error(kSchemaMismatch) if the document is not a report.
  static EvalReport from_json(const nlohmann::ordered_json& j);
  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct EvalOutcome {
  EvalReport report;
  std::vector<ItemResult> items;  // record-id order
};

// Aggregates item results (sorted by record id internally). FID is computed
// from artifacts elsewhere and passed through.
EvalReport compute_report(std::vector<ItemResult> items, std::size_t corpus_size,
                          const SystemConfig& system, bool penalize_mismatch,
                          bool include_text_ground, const MetricSlot& fid);

// Backends are built from job.system, with the oracle table drawn from the corpus.
EvalOutcome run_eval(const EvalJob& job, std::shared_ptr<CallLog> log = nullptr);
EvalOutcome run_eval(const EvalJob& job, const BackendSet& backends);

}  // namespace mgw
