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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mgw/core/records.hpp"
#include "mgw/metrics/metrics.hpp"

// Data-parallel scoring kernels. Each kernel has a serial reference and an
// OpenMP version with identical results; tests compare the two and
// bench/kernels_bench.cpp times them.
namespace mgw::kernels {

// Sorted, unique character trigrams packed as (b0 << 16 | b1 << 8 | b2).
// Strings shorter than three bytes map to a single packed element.
using TrigramSet = std::vector<std::uint32_t>;

TrigramSet char_trigrams(std::string_view text);
// |a ∩ b| / |a ∪ b|; 1.0 for two empty sets.
double jaccard(const TrigramSet& a, const TrigramSet& b);

struct BleuTask {
  std::string candidate;
  std::vector<std::string> references;
};

struct QATask {
  QAItem item;
  std::string response;
};

namespace serial {

double max_jaccard(const TrigramSet& query, std::span<const TrigramSet> pool);
// Lowest pool index whose Jaccard with query is >= threshold.
std::optional<std::size_t> first_at_least(const TrigramSet& query,
                                          std::span<const TrigramSet> pool, double threshold);
// nullopt where BLEU rejects the input (empty tokens).
std::vector<std::optional<double>> batch_bleu(std::span<const BleuTask> tasks);
std::vector<std::optional<QAVerdict>> batch_qa(std::span<const QATask> tasks);

}  // namespace serial

namespace parallel {

double max_jaccard(const TrigramSet& query, std::span<const TrigramSet> pool);
std::optional<std::size_t> first_at_least(const TrigramSet& query,
                                          std::span<const TrigramSet> pool, double threshold);
std::vector<std::optional<double>> batch_bleu(std::span<const BleuTask> tasks);
std::vector<std::optional<QAVerdict>> batch_qa(std::span<const QATask> tasks);

}  // namespace parallel

}  // namespace mgw::kernels
