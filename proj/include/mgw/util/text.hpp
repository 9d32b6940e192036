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

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mgw {

std::string_view trim_view(std::string_view s);
std::string trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);

// Lowercase, every non-alphanumeric ASCII byte becomes a space, runs of spaces
// collapse, no leading/trailing space. Non-ASCII bytes are kept verbatim.
std::string normalize_words(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);
std::vector<std::string> split_words(std::string_view s);

// Replaces every occurrence of `from` in `s`.
std::string replace_all(std::string s, std::string_view from, std::string_view to);

// JSON serialization that never throws on invalid UTF-8 (bad bytes become U+FFFD).
std::string dump_json(const nlohmann::ordered_json& j, int indent = -1);

}  // namespace mgw

namespace mgw {

// Current UTC time as 2026-01-02T03:04:05.678Z.
std::string utc_timestamp();

}  // namespace mgw
