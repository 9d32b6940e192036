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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mgw/core/modality.hpp"

namespace mgw {

// Captions of a reference modality dataset, sampled without replacement.
class CaptionPool {
 public:
  CaptionPool(Modality modality, std::vector<std::string> captions, std::string source_name);

  // Plain text (one caption per line) or JSON lines with a "caption" field,
  // chosen by whether the first non-blank line starts with '{'.
  static CaptionPool load(const std::filesystem::path& path, Modality modality);

  Modality modality() const noexcept { return modality_; }
  const std::string& source_name() const noexcept { return source_name_; }
  const std::vector<std::string>& captions() const noexcept { return captions_; }
  std::size_t size() const noexcept { return captions_.size(); }
  std::size_t remaining() const noexcept { return remaining_.size(); }

  // Whether `caption` equals some pool caption after trimming both.
  bool contains(std::string_view caption) const;

 private:
  friend std::vector<std::string> sample_captions(CaptionPool&, std::size_t, std::uint64_t);

  Modality modality_;
  std::vector<std::string> captions_;
  std::string source_name_;
  std::vector<std::size_t> remaining_;
  std::unordered_set<std::string> trimmed_;
};

// Draws n unused captions; deterministic given the pool state and seed.
// Throws Error(kPoolExhausted) when fewer than n remain.
std::vector<std::string> sample_captions(CaptionPool& pool, std::size_t n, std::uint64_t rng_seed);

}  // namespace mgw
