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
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgw/core/records.hpp"
#include "mgw/datagen/filter.hpp"

namespace mgw {

// Route shares in text, image, speech order.
struct MixRatios {
  std::array<double, 3> share{1.0 / 3, 1.0 / 3, 1.0 / 3};

  // Throws Error(kInvalidArgument) unless all shares are >= 0 and sum to 1 within 1e-9.
  void validate() const;
};

// Largest-remainder apportionment of `total` over the shares; remainder ties go
// to the earlier route. Sums to total exactly.
std::array<std::size_t, 3> apportion(std::size_t total, const MixRatios& ratios);

// Opaque training settings carried alongside the corpus for the trainer.
struct TrainingEcho {
  std::string optimizer = "AdamW";
  std::string learning_rate = "3e-4";
  std::string epochs = "3";
  std::string per_device_batch_size = "4";
  std::string gradient_accumulation_steps = "8";
  std::string adapter = "LoRA";
};

struct DatasetManifest {
  std::array<std::size_t, 3> route_totals{};
  std::size_t target_total = 0;
  MixRatios ratios;
  std::map<std::string, std::string> caption_sources;  // route -> pool name
  std::string teacher_model;
  std::map<std::string, FilterReport> filter_reports;  // route -> report
  std::size_t train_size = 0;
  std::size_t val_size = 0;
  std::uint64_t rng_seed = 0;
  TrainingEcho training;

  std::size_t dataset_size() const { return route_totals[0] + route_totals[1] + route_totals[2]; }
  nlohmann::ordered_json to_json() const;
  static DatasetManifest from_json(const nlohmann::ordered_json& j);
};

struct MixResult {
  std::vector<InstructionRecord> records;
  DatasetManifest manifest;
};

// Draws apportioned counts from each route's records and shuffles the union.
// Throws Error(kInsufficientSource) naming the first route that is short.
MixResult mix_dataset(std::span<const InstructionRecord> text_corpus,
                      std::span<const InstructionRecord> image_records,
                      std::span<const InstructionRecord> speech_records, std::size_t target_total,
                      const MixRatios& ratios, std::uint64_t rng_seed);

struct DatasetSplit {
  std::vector<InstructionRecord> train;
  std::vector<InstructionRecord> val;
};

// Per modality, round(val_fraction * count) records go to val. Both halves
// keep input order.
DatasetSplit split_dataset(std::span<const InstructionRecord> records, double val_fraction,
                           std::uint64_t rng_seed);

}  // namespace mgw
