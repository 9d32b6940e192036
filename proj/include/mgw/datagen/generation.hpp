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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mgw/backends/backends.hpp"
#include "mgw/core/records.hpp"
#include "mgw/datagen/captions.hpp"
#include "mgw/prompting/prompts.hpp"

namespace mgw {

struct CaptionInstruction {
  std::string caption;
  std::string instruction;

  friend bool operator==(const CaptionInstruction&, const CaptionInstruction&) = default;
};

struct TeacherParse {
  std::vector<CaptionInstruction> pairs;  // in header order
  std::vector<std::string> dropped;       // one note per unmatched header or caption
};

// Pairs each "[caption]" header (optionally numbered, e.g. "3. [..]") with the
// next "Instruction:" / "Instructions:" line before the following header.
// Headers not in `captions`, headers without an instruction, and repeated
// headers are dropped. Never throws.
TeacherParse parse_teacher_output(std::string_view teacher_raw,
                                  std::span<const std::string> captions);

struct GenBatch {
  std::size_t index = 0;
  std::vector<std::string> seeds_used;  // record ids
  std::vector<std::string> captions;
  std::string teacher_raw;
  std::vector<CaptionInstruction> parsed;
  std::vector<std::string> dropped;
  std::optional<std::string> error;  // backend failure; batch skipped

  std::size_t shortfall() const { return captions.size() - parsed.size(); }
  nlohmann::ordered_json to_json() const;
};

struct GenerationOptions {
  std::size_t batch_size = kMaxCaptionsPerTeacherCall;
  std::size_t target_captions = 0;  // 0 drains the pool
  std::size_t parallelism = 2;      // concurrent teacher calls
  double max_calls_per_second = 0;  // 0 disables rate limiting
  double temperature = 0.7;
  int max_new_tokens = 4096;
};

// Plans every batch up front (captions, three seeds, prompt) from seeds
// derived from rng_seed, then issues the teacher calls. Results are in batch
// order regardless of completion order.
std::vector<GenBatch> run_generation(CaptionPool& pool, std::span<const InstructionRecord> seed_store,
                                     ChatBackend& teacher, Modality target, std::uint64_t rng_seed,
                                     const GenerationOptions& options = {});

std::vector<CaptionInstruction> collect_pairs(std::span<const GenBatch> batches);

}  // namespace mgw
