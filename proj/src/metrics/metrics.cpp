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

#include "mgw/metrics/metrics.hpp"

#include "mgw/metrics/bleu.hpp"
#include "mgw/util/error.hpp"

namespace mgw {

nlohmann::ordered_json ModalityConfusion::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json rows;
  for (Modality g : kAllModalities) {
    nlohmann::ordered_json row;
    for (Modality p : kAllModalities) row[std::string(to_string(p))] = counts[index_of(g)][index_of(p)];
    rows[std::string(to_string(g))] = std::move(row);
  }
  j["ground_by_predicted"] = std::move(rows);
  j["n_correct"] = n_correct;
  j["n_total"] = n_total;
  return j;
}

ModalityConfusion ModalityConfusion::from_json(const nlohmann::ordered_json& j) {
  ModalityConfusion c;
  const auto& rows = j.at("ground_by_predicted");
  for (Modality g : kAllModalities) {
    for (Modality p : kAllModalities) {
      c.counts[index_of(g)][index_of(p)] =
          rows.at(std::string(to_string(g))).at(std::string(to_string(p))).get<std::size_t>();
    }
  }
  c.n_correct = j.at("n_correct").get<std::size_t>();
  c.n_total = j.at("n_total").get<std::size_t>();
  return c;
}

AccuracyResult modality_accuracy(std::span<const ModalityPrediction> pairs,
                                 bool include_text_ground) {
  if (pairs.empty()) fail(ErrorCode::kEmptyInput, "no predictions");
  ModalityConfusion conf;
  for (const auto& p : pairs) {
    ++conf.counts[index_of(p.ground)][index_of(p.predicted)];
    if (!include_text_ground && p.ground == Modality::kText) continue;
    ++conf.n_total;
    if (p.ground == p.predicted) ++conf.n_correct;
  }
  if (conf.n_total == 0) fail(ErrorCode::kEmptyEligibleSet, "no accuracy-eligible items");
  return {static_cast<double>(conf.n_correct) / static_cast<double>(conf.n_total), conf};
}

std::optional<double> gated_mean(std::span<const GatedScore> items, bool penalize_mismatch) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& item : items) {
    if (eligibility_gate(item.ground, item.predicted)) {
      if (!item.value) continue;
      sum += *item.value;
    } else if (!penalize_mismatch) {
      continue;
    }
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

QAVerdict qa_score(const QAItem& item, std::string_view model_response) {
  item.validate();
  QAVerdict v{0, false, {}};
  v.similarities.reserve(item.choices.size());
  for (const auto& choice : item.choices) v.similarities.push_back(bleu(model_response, choice));
  for (std::size_t i = 1; i < v.similarities.size(); ++i) {
    if (v.similarities[i] > v.similarities[v.chosen]) v.chosen = i;
  }
  for (std::size_t idx : item.correct_indices) v.correct = v.correct || idx == v.chosen;
  return v;
}

ClipAggregate aggregate_clip(std::span<const std::optional<double>> scores) {
  ClipAggregate agg{0.0, 0, 0};
  double sum = 0.0;
  for (const auto& s : scores) {
    if (s) {
      sum += *s;
      ++agg.present;
    } else {
      ++agg.missing;
    }
  }
  if (agg.present == 0) fail(ErrorCode::kAllMissing, "no CLIP scores present");
  agg.mean = sum / static_cast<double>(agg.present);
  return agg;
}

}  // namespace mgw
