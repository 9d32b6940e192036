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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mgw/core/modality.hpp"
#include "mgw/core/records.hpp"

namespace mgw {

// counts[ground][predicted] over every item; n_correct / n_total over the
// accuracy-eligible subset only.
struct ModalityConfusion {
  std::array<std::array<std::size_t, 3>, 3> counts{};
  std::size_t n_correct = 0;
  std::size_t n_total = 0;

  nlohmann::ordered_json to_json() const;
  static ModalityConfusion from_json(const nlohmann::ordered_json& j);
  friend bool operator==(const ModalityConfusion&, const ModalityConfusion&) = default;
};

struct ModalityPrediction {
  Modality ground;
  Modality predicted;
};

struct AccuracyResult {
  double accuracy;
  ModalityConfusion confusion;
};

// A = n_correct / n_total. By default items whose ground truth is text are not
// eligible (a text prediction is the model's default, not a decision).
// Throws Error(kEmptyInput) on an empty list, Error(kEmptyEligibleSet) when
// nothing is eligible.
AccuracyResult modality_accuracy(std::span<const ModalityPrediction> pairs,
                                 bool include_text_ground = false);

// Only modality-matching predictions are scored for quality.
inline bool eligibility_gate(Modality ground, Modality predicted) { return ground == predicted; }

struct GatedScore {
  Modality ground;
  Modality predicted;
  std::optional<double> value;  // absent when the metric could not be computed
};

// Mean over gated, present values; nullopt if none. With penalize_mismatch,
// gated-out items contribute 0 instead of being excluded.
std::optional<double> gated_mean(std::span<const GatedScore> items, bool penalize_mismatch = false);

struct QAVerdict {
  std::size_t chosen;
  bool correct;
  std::vector<double> similarities;
};

// BLEU of the response against each choice; argmax with lowest-index ties.
QAVerdict qa_score(const QAItem& item, std::string_view model_response);

struct ClipAggregate {
  double mean;
  std::size_t present;
  std::size_t missing;
};

// Throws Error(kAllMissing) if no value is present.
ClipAggregate aggregate_clip(std::span<const std::optional<double>> scores);

}  // namespace mgw
