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

#include "mgw/datagen/generation.hpp"

#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <regex>
#include <thread>

#include "mgw/util/error.hpp"
#include "mgw/util/rng.hpp"
#include "mgw/util/text.hpp"

namespace mgw {
namespace {

const std::regex& header_re() {
  static const std::regex re(R"(^\s*(?:\(?\d+[.):]\s*)?\[(.*)\]\s*(.*)$)");
  return re;
}

const std::regex& instruction_re() {
  static const std::regex re(R"(^\s*(?:\(?\d+[.):]\s*)?[*_]*Instructions?[*_]*\s*:\s*(.*)$)",
                             std::regex::icase);
  return re;
}

class RateLimiter {
 public:
  explicit RateLimiter(double per_second) : per_second_(per_second) {}

  void acquire() {
    if (per_second_ <= 0) return;
    std::chrono::steady_clock::time_point slot;
    {
      std::lock_guard lock(mu_);
      const auto now = std::chrono::steady_clock::now();
      if (next_ < now) next_ = now;
      slot = next_;
      next_ += std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(1.0 / per_second_));
    }
    std::this_thread::sleep_until(slot);
  }

 private:
  double per_second_;
  std::mutex mu_;
  std::chrono::steady_clock::time_point next_{};
};

}  // namespace

TeacherParse parse_teacher_output(std::string_view teacher_raw,
                                  std::span<const std::string> captions) {
  std::map<std::string, std::string, std::less<>> known;  // trimmed -> original
  for (const auto& c : captions) known.emplace(trim(c), c);

  TeacherParse out;
  std::map<std::string, bool, std::less<>> used;
  std::map<std::string, bool, std::less<>> seen;
  std::optional<std::string> open;  // caption whose instruction is pending
  auto close_open = [&] {
    if (open) out.dropped.push_back("no instruction for caption: " + *open);
    open.reset();
  };

  std::smatch m;
  for (const auto& line : split_lines(teacher_raw)) {
    if (std::regex_match(line, m, header_re())) {
      close_open();
      const std::string header = trim(m[1].str());
      const auto it = known.find(header);
      if (it == known.end()) {
        out.dropped.push_back("unknown caption header: " + header);
        continue;
      }
      if (used.contains(it->second)) {
        out.dropped.push_back("repeated caption header: " + header);
        continue;
      }
      open = it->second;
      seen[*open] = true;
      std::smatch im;
      const std::string rest = m[2].str();
      if (std::regex_match(rest, im, instruction_re())) {
        const std::string instruction = trim(im[1].str());
        if (!instruction.empty()) {
          out.pairs.push_back({*open, instruction});
          used[*open] = true;
          open.reset();
        }
      }
      continue;
    }
    if (!open) continue;
    if (std::regex_match(line, m, instruction_re())) {
      const std::string instruction = trim(m[1].str());
      if (instruction.empty()) continue;
      out.pairs.push_back({*open, instruction});
      used[*open] = true;
      open.reset();
    }
  }
  close_open();
  for (const auto& c : captions) {
    if (!seen.contains(c)) out.dropped.push_back("caption missing from reply: " + c);
  }
  return out;
}

nlohmann::ordered_json GenBatch::to_json() const {
  nlohmann::ordered_json j;
  j["index"] = index;
  j["seeds_used"] = seeds_used;
  j["captions"] = captions.size();
  j["parsed"] = parsed.size();
  j["shortfall"] = shortfall();
  j["error"] = error ? nlohmann::ordered_json(*error) : nlohmann::ordered_json(nullptr);
  return j;
}

std::vector<GenBatch> run_generation(CaptionPool& pool, std::span<const InstructionRecord> seed_store,
                                     ChatBackend& teacher, Modality target, std::uint64_t rng_seed,
                                     const GenerationOptions& options) {
  require(target != Modality::kText, "generation targets the image or speech route");
  require(pool.modality() == target, "caption pool modality does not match the target route");
  require(options.batch_size >= 1 && options.batch_size <= kMaxCaptionsPerTeacherCall,
          "batch size must be in [1, " + std::to_string(kMaxCaptionsPerTeacherCall) + "]");
  require(options.parallelism >= 1, "parallelism must be >= 1");

  std::vector<const InstructionRecord*> seeds;
  for (const auto& s : seed_store) {
    if (s.output.modality() == target) seeds.push_back(&s);
  }
  require(seeds.size() >= kSeedsPerTeacherCall,
          "need at least " + std::to_string(kSeedsPerTeacherCall) + " " +
              std::string(to_string(target)) + " seeds, have " + std::to_string(seeds.size()));

  std::size_t budget = options.target_captions == 0 ? pool.remaining()
                                                    : std::min(options.target_captions, pool.remaining());
  std::vector<GenBatch> batches;
  std::vector<std::string> prompts;
  for (std::size_t b = 0; budget > 0; ++b) {
    const std::size_t n = std::min(budget, options.batch_size);
    budget -= n;
    GenBatch batch;
    batch.index = b;
    batch.captions = sample_captions(pool, n, derive_seed(rng_seed, "captions/" + std::to_string(b)));
    Rng seed_rng(derive_seed(rng_seed, "seeds/" + std::to_string(b)));
    std::vector<InstructionRecord> chosen;
    for (auto i : seed_rng.sample_indices(seeds.size(), kSeedsPerTeacherCall)) {
      chosen.push_back(*seeds[i]);
      batch.seeds_used.push_back(record_id(*seeds[i]));
    }
    prompts.push_back(render_teacher_prompt(chosen, batch.captions, target));
    batches.push_back(std::move(batch));
  }

  RateLimiter limiter(options.max_calls_per_second);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < batches.size(); i = next++) {
      GenBatch& batch = batches[i];
      limiter.acquire();
      try {
        const ChatReply reply =
            complete_chat(teacher, {prompts[i], options.temperature, options.max_new_tokens});
        batch.teacher_raw = reply.text;
        auto parsed = parse_teacher_output(reply.text, batch.captions);
        batch.parsed = std::move(parsed.pairs);
        batch.dropped = std::move(parsed.dropped);
      } catch (const std::exception& e) {
        batch.error = e.what();
      }
    }
  };
  const std::size_t k = std::min(options.parallelism, batches.size());
  if (k <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool_threads;
    for (std::size_t t = 0; t < k; ++t) pool_threads.emplace_back(worker);
  }
  return batches;
}

std::vector<CaptionInstruction> collect_pairs(std::span<const GenBatch> batches) {
  std::vector<CaptionInstruction> out;
  for (const auto& b : batches) out.insert(out.end(), b.parsed.begin(), b.parsed.end());
  return out;
}

}  // namespace mgw
