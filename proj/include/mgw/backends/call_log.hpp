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

#include <mutex>
#include <string>
#include <vector>

namespace mgw {

// Append-only record of every backend attempt, shared across concurrent callers.
class CallLog {
 public:
  struct Entry {
    std::string backend;    // "llm", "image", "speech", "scorer"
    std::string operation;  // "complete", "generate", "synthesize", "clip", "fid"
    int attempt = 1;
    std::string outcome;  // "ok" or an error code name
    std::string input;    // prompt/text sent (never credentials)
  };

  void append(Entry e);
  std::vector<Entry> entries() const;
  std::size_t count(std::string_view backend, std::string_view operation = {}) const;
  void clear();

 private:
  mutable std::mutex mu_;
  std::vector<Entry> entries_;
};

}  // namespace mgw
