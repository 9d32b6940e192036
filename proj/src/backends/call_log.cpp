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

#include "mgw/backends/call_log.hpp"

namespace mgw {

void CallLog::append(Entry e) {
  std::lock_guard lock(mu_);
  entries_.push_back(std::move(e));
}

std::vector<CallLog::Entry> CallLog::entries() const {
  std::lock_guard lock(mu_);
  return entries_;
}

std::size_t CallLog::count(std::string_view backend, std::string_view operation) const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const auto& e : entries_) {
    if (e.backend == backend && (operation.empty() || e.operation == operation)) ++n;
  }
  return n;
}

void CallLog::clear() {
  std::lock_guard lock(mu_);
  entries_.clear();
}

}  // namespace mgw
