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

#include "mgw/metrics/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdlib>
#include <unordered_map>

#include "mgw/util/error.hpp"

namespace mgw {
namespace {

using NgramCounts = std::unordered_map<std::string, int>;

NgramCounts count_ngrams(std::span<const std::string> tokens, int n) {
  NgramCounts counts;
  const auto len = static_cast<int>(tokens.size());
  for (int i = 0; i + n <= len; ++i) {
    std::string key = tokens[static_cast<std::size_t>(i)];
    for (int k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += tokens[static_cast<std::size_t>(i + k)];
    }
    ++counts[key];
  }
  return counts;
}

bool is_ascii_punct(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u);
}

}  // namespace

std::vector<std::string> bleu_tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  const auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      flush();
    } else if (is_ascii_punct(c)) {
      flush();
      tokens.emplace_back(1, c);
    } else {
      current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    }
  }
  flush();
  return tokens;
}

double bleu_tokens(std::span<const std::string> candidate,
                   std::span<const std::vector<std::string>> references) {
  if (candidate.empty()) fail(ErrorCode::kEmptyInput, "candidate has no tokens");
  if (references.empty()) fail(ErrorCode::kEmptyInput, "no references");
  for (const auto& ref : references) {
    if (ref.empty()) fail(ErrorCode::kEmptyInput, "reference has no tokens");
  }

  const int c = static_cast<int>(candidate.size());
  const int orders = std::min(kBleuMaxOrder, c);
  double log_sum = 0.0;
  for (int n = 1; n <= orders; ++n) {
    const NgramCounts cand = count_ngrams(candidate, n);
    NgramCounts max_ref;
    for (const auto& ref : references) {
      for (const auto& [gram, count] : count_ngrams(ref, n)) {
        int& slot = max_ref[gram];
        slot = std::max(slot, count);
      }
    }
    int matches = 0;
    for (const auto& [gram, count] : cand) {
      const auto it = max_ref.find(gram);
      if (it != max_ref.end()) matches += std::min(count, it->second);
    }
    const int total = c - n + 1;
    double p;
    if (matches == 0) {
      if (n == 1) return 0.0;
      p = 1.0 / static_cast<double>(total + 1);
    } else {
      p = static_cast<double>(matches) / static_cast<double>(total);
    }
    log_sum += std::log(p);
  }

  int closest = static_cast<int>(references.front().size());
  for (const auto& ref : references) {
    const int r = static_cast<int>(ref.size());
    const int d = std::abs(r - c);
    const int best = std::abs(closest - c);
    if (d < best || (d == best && r < closest)) closest = r;
  }
  const double bp =
      c < closest ? std::exp(1.0 - static_cast<double>(closest) / static_cast<double>(c)) : 1.0;
  return bp * std::exp(log_sum / static_cast<double>(orders));
}

double bleu(std::string_view candidate, std::span<const std::string> references) {
  const auto cand = bleu_tokenize(candidate);
  std::vector<std::vector<std::string>> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(bleu_tokenize(r));
  return bleu_tokens(cand, refs);
}

double bleu(std::string_view candidate, std::string_view reference) {
  const std::string ref(reference);
  return bleu(candidate, std::span<const std::string>(&ref, 1));
}

}  // namespace mgw
