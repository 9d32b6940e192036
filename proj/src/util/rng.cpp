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

#include "mgw/util/rng.hpp"

#include <numeric>
#include <string>

#include "mgw/util/digest.hpp"

namespace mgw {

std::uint64_t Rng::below(std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

std::vector<std::size_t> Rng::sample_indices(std::size_t n, std::size_t k) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k && i < n; ++i) {
    const auto j = i + static_cast<std::size_t>(below(n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(std::min(n, k));
  return idx;
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view label) {
  std::string material = std::to_string(base);
  material.push_back('/');
  material.append(label);
  const auto md = sha256(as_bytes(material));
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out = (out << 8) | md[static_cast<std::size_t>(i)];
  return out;
}

}  // namespace mgw
