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

#include "mgw/datagen/captions.hpp"

#include <numeric>

#include <json.hpp>

#include "mgw/util/error.hpp"
#include "mgw/util/files.hpp"
#include "mgw/util/rng.hpp"
#include "mgw/util/text.hpp"

namespace mgw {

CaptionPool::CaptionPool(Modality modality, std::vector<std::string> captions,
                         std::string source_name)
    : modality_(modality), captions_(std::move(captions)), source_name_(std::move(source_name)) {
  require(modality_ != Modality::kText, "caption pools serve the image or speech route");
  require(!captions_.empty(), "caption pool '" + source_name_ + "' is empty");
  remaining_.resize(captions_.size());
  std::iota(remaining_.begin(), remaining_.end(), std::size_t{0});
  for (const auto& c : captions_) trimmed_.insert(trim(c));
}

CaptionPool CaptionPool::load(const std::filesystem::path& path, Modality modality) {
  const std::string text = read_file(path);
  const auto lines = split_lines(text);
  bool jsonl = false;
  for (const auto& line : lines) {
    const auto t = trim_view(line);
    if (t.empty()) continue;
    jsonl = t.front() == '{';
    break;
  }
  std::vector<std::string> captions;
  std::size_t lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    const auto t = trim_view(line);
    if (t.empty()) continue;
    if (!jsonl) {
      captions.emplace_back(t);
      continue;
    }
    const auto j = nlohmann::json::parse(t, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("caption") || !j["caption"].is_string()) {
      fail(ErrorCode::kInvalidArgument,
           path.string() + ":" + std::to_string(lineno) + ": expected an object with a string \"caption\"");
    }
    const std::string caption = trim(j["caption"].get<std::string>());
    if (!caption.empty()) captions.push_back(caption);
  }
  return CaptionPool(modality, std::move(captions), path.filename().string());
}

bool CaptionPool::contains(std::string_view caption) const {
  return trimmed_.contains(trim(caption));
}

std::vector<std::string> sample_captions(CaptionPool& pool, std::size_t n, std::uint64_t rng_seed) {
  require(n >= 1, "sample size must be >= 1");
  auto& rem = pool.remaining_;
  if (n > rem.size()) {
    fail(ErrorCode::kPoolExhausted, "caption pool '" + pool.source_name_ + "' has " +
                                        std::to_string(rem.size()) + " captions left, " +
                                        std::to_string(n) + " requested");
  }
  // Partial Fisher-Yates over the remaining indices; the drawn prefix is removed.
  Rng rng(rng_seed);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(rem.size() - i));
    std::swap(rem[i], rem[j]);
  }
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(pool.captions_[rem[i]]);
  rem.erase(rem.begin(), rem.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

}  // namespace mgw
