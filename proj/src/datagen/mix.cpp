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

#include "mgw/datagen/mix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mgw/util/error.hpp"
#include "mgw/util/rng.hpp"

namespace mgw {

void MixRatios::validate() const {
  double sum = 0.0;
  for (double s : share) {
    require(std::isfinite(s) && s >= 0.0, "mix ratios must be non-negative");
    sum += s;
  }
  require(std::abs(sum - 1.0) <= 1e-9, "mix ratios must sum to 1, got " + std::to_string(sum));
}

std::array<std::size_t, 3> apportion(std::size_t total, const MixRatios& ratios) {
  ratios.validate();
  const double sum = ratios.share[0] + ratios.share[1] + ratios.share[2];
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double quota = static_cast<double>(total) * ratios.share[i] / sum;
    counts[i] = static_cast<std::size_t>(std::floor(quota));
    remainder[i] = quota - std::floor(quota);
    assigned += counts[i];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++counts[order[k % 3]];
  return counts;
}

nlohmann::ordered_json DatasetManifest::to_json() const {
  nlohmann::ordered_json j;
  j["dataset_size"] = dataset_size();
  j["target_total"] = target_total;
  nlohmann::ordered_json totals, shares;
  for (auto m : kAllModalities) {
    totals[std::string(to_string(m))] = route_totals[index_of(m)];
    shares[std::string(to_string(m))] = ratios.share[index_of(m)];
  }
  j["route_totals"] = std::move(totals);
  j["mix_ratios"] = std::move(shares);
  j["caption_sources"] = caption_sources;
  j["teacher_model"] = teacher_model;
  nlohmann::ordered_json reports = nlohmann::ordered_json::object();
  for (const auto& [route, r] : filter_reports) reports[route] = r.to_json();
  j["filter_reports"] = std::move(reports);
  j["splits"] = {{"train", train_size}, {"val", val_size}};
  j["rng_seed"] = rng_seed;
  j["training"] = {{"optimizer", training.optimizer},
                   {"learning_rate", training.learning_rate},
                   {"epochs", training.epochs},
                   {"per_device_batch_size", training.per_device_batch_size},
                   {"gradient_accumulation_steps", training.gradient_accumulation_steps},
                   {"adapter", training.adapter}};
  return j;
}

DatasetManifest DatasetManifest::from_json(const nlohmann::ordered_json& j) {
  DatasetManifest m;
  m.target_total = j.at("target_total").get<std::size_t>();
  for (auto mod : kAllModalities) {
    const std::string key(to_string(mod));
    m.route_totals[index_of(mod)] = j.at("route_totals").at(key).get<std::size_t>();
    m.ratios.share[index_of(mod)] = j.at("mix_ratios").at(key).get<double>();
  }
  m.caption_sources = j.value("caption_sources", std::map<std::string, std::string>{});
  m.teacher_model = j.value("teacher_model", "");
  const auto reports = j.value("filter_reports", nlohmann::ordered_json::object());
  for (const auto& [route, r] : reports.items()) {
    m.filter_reports[route] = FilterReport::from_json(r);
  }
  m.train_size = j.at("splits").at("train").get<std::size_t>();
  m.val_size = j.at("splits").at("val").get<std::size_t>();
  m.rng_seed = j.value("rng_seed", std::uint64_t{0});
  const auto& t = j.at("training");
  m.training = {t.at("optimizer"), t.at("learning_rate"), t.at("epochs"),
                t.at("per_device_batch_size"), t.at("gradient_accumulation_steps"),
                t.at("adapter")};
  return m;
}

MixResult mix_dataset(std::span<const InstructionRecord> text_corpus,
                      std::span<const InstructionRecord> image_records,
                      std::span<const InstructionRecord> speech_records, std::size_t target_total,
                      const MixRatios& ratios, std::uint64_t rng_seed) {
  require(target_total >= 1, "target total must be >= 1");
  const auto counts = apportion(target_total, ratios);
  const std::array<std::span<const InstructionRecord>, 3> sources{text_corpus, image_records,
                                                                 speech_records};
  for (auto m : kAllModalities) {
    const auto i = index_of(m);
    if (sources[i].size() < counts[i]) {
      fail(ErrorCode::kInsufficientSource,
           std::string(to_string(m)) + " route needs " + std::to_string(counts[i]) +
               " records, source has " + std::to_string(sources[i].size()));
    }
  }

  MixResult out;
  out.records.reserve(target_total);
  for (auto m : kAllModalities) {
    const auto i = index_of(m);
    if (counts[i] == 0) continue;
    Rng rng(derive_seed(rng_seed, "mix/" + std::string(to_string(m))));
    auto picks = rng.sample_indices(sources[i].size(), counts[i]);
    std::sort(picks.begin(), picks.end());
    for (auto p : picks) {
      const auto& r = sources[i][p];
      require(r.output.modality() == m, "record '" + r.instruction + "' does not belong to the " +
                                            std::string(to_string(m)) + " route");
      out.records.push_back(r);
    }
  }
  Rng shuffler(derive_seed(rng_seed, "mix/shuffle"));
  shuffler.shuffle(out.records);

  out.manifest.route_totals = counts;
  out.manifest.target_total = target_total;
  out.manifest.ratios = ratios;
  out.manifest.rng_seed = rng_seed;
  return out;
}

DatasetSplit split_dataset(std::span<const InstructionRecord> records, double val_fraction,
                           std::uint64_t rng_seed) {
  require(val_fraction >= 0.0 && val_fraction < 1.0, "val fraction must be in [0, 1)");
  std::vector<bool> to_val(records.size(), false);
  for (auto m : kAllModalities) {
    std::vector<std::size_t> group;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (records[i].output.modality() == m) group.push_back(i);
    }
    const auto k = static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(group.size())));
    Rng rng(derive_seed(rng_seed, "split/" + std::string(to_string(m))));
    for (auto p : rng.sample_indices(group.size(), k)) to_val[group[p]] = true;
  }
  DatasetSplit out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    (to_val[i] ? out.val : out.train).push_back(records[i]);
  }
  return out;
}

}  // namespace mgw
