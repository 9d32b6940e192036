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

#include "mgw/kernels/similarity.hpp"

#include <omp.h>

#include <algorithm>
#include <limits>

#include "mgw/metrics/bleu.hpp"

namespace mgw::kernels {
namespace {

std::optional<double> bleu_or_none(const BleuTask& t) {
  try {
    return bleu(t.candidate, t.references);
  } catch (...) {
    return std::nullopt;
  }
}

std::optional<QAVerdict> qa_or_none(const QATask& t) {
  try {
    return qa_score(t.item, t.response);
  } catch (...) {
    return std::nullopt;
  }
}

}  // namespace

TrigramSet char_trigrams(std::string_view text) {
  TrigramSet set;
  const auto byte = [&](std::size_t i) { return static_cast<std::uint32_t>(static_cast<unsigned char>(text[i])); };
  if (text.empty()) return set;
  if (text.size() < 3) {
    std::uint32_t packed = byte(0) << 16;
    if (text.size() == 2) packed |= byte(1) << 8;
    set.push_back(packed);
    return set;
  }
  set.reserve(text.size() - 2);
  for (std::size_t i = 0; i + 2 < text.size(); ++i) {
    set.push_back(byte(i) << 16 | byte(i + 1) << 8 | byte(i + 2));
  }
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

double jaccard(const TrigramSet& a, const TrigramSet& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t inter = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++inter;
      ++ia;
      ++ib;
    }
  }
  const std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace serial {

double max_jaccard(const TrigramSet& query, std::span<const TrigramSet> pool) {
  double best = 0.0;
  for (const auto& other : pool) best = std::max(best, jaccard(query, other));
  return best;
}

std::optional<std::size_t> first_at_least(const TrigramSet& query,
                                          std::span<const TrigramSet> pool, double threshold) {
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (jaccard(query, pool[i]) >= threshold) return i;
  }
  return std::nullopt;
}

std::vector<std::optional<double>> batch_bleu(std::span<const BleuTask> tasks) {
  std::vector<std::optional<double>> out;
  out.reserve(tasks.size());
  for (const auto& t : tasks) out.push_back(bleu_or_none(t));
  return out;
}

std::vector<std::optional<QAVerdict>> batch_qa(std::span<const QATask> tasks) {
  std::vector<std::optional<QAVerdict>> out;
  out.reserve(tasks.size());
  for (const auto& t : tasks) out.push_back(qa_or_none(t));
  return out;
}

}  // namespace serial

namespace parallel {

double max_jaccard(const TrigramSet& query, std::span<const TrigramSet> pool) {
  double best = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(pool.size());
#pragma omp parallel for reduction(max : best) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    best = std::max(best, jaccard(query, pool[static_cast<std::size_t>(i)]));
  }
  return best;
}

std::optional<std::size_t> first_at_least(const TrigramSet& query,
                                          std::span<const TrigramSet> pool, double threshold) {
  std::size_t first = std::numeric_limits<std::size_t>::max();
  const auto n = static_cast<std::ptrdiff_t>(pool.size());
#pragma omp parallel for reduction(min : first) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (idx < first && jaccard(query, pool[idx]) >= threshold) first = idx;
  }
  if (first == std::numeric_limits<std::size_t>::max()) return std::nullopt;
  return first;
}

std::vector<std::optional<double>> batch_bleu(std::span<const BleuTask> tasks) {
  std::vector<std::optional<double>> out(tasks.size());
  const auto n = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = bleu_or_none(tasks[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<std::optional<QAVerdict>> batch_qa(std::span<const QATask> tasks) {
  std::vector<std::optional<QAVerdict>> out(tasks.size());
  const auto n = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = qa_or_none(tasks[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace parallel

}  // namespace mgw::kernels
