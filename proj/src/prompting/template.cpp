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

#include "mgw/prompting/template.hpp"

#include <cctype>

#include "mgw/util/embedded.hpp"
#include "mgw/util/error.hpp"
#include "mgw/util/files.hpp"

namespace mgw {
namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Length of the placeholder starting at s[i] == '{', or 0.
std::size_t placeholder_len(std::string_view s, std::size_t i) {
  if (i + 2 >= s.size() || !ident_start(s[i + 1])) return 0;
  std::size_t j = i + 2;
  while (j < s.size() && ident_char(s[j])) ++j;
  return j < s.size() && s[j] == '}' ? j - i + 1 : 0;
}

}  // namespace

std::set<std::string> find_placeholders(std::string_view text) {
  std::set<std::string> names;
  for (std::size_t i = text.find('{'); i != std::string_view::npos; i = text.find('{', i + 1)) {
    if (const std::size_t n = placeholder_len(text, i)) {
      names.emplace(text.substr(i + 1, n - 2));
    }
  }
  return names;
}

PromptTemplate::PromptTemplate(std::string id, std::string body)
    : id_(std::move(id)), body_(std::move(body)), required_(find_placeholders(body_)) {}

PromptTemplate PromptTemplate::load(std::string id, const std::filesystem::path& path) {
  return PromptTemplate(std::move(id), read_file(path));
}

PromptTemplate PromptTemplate::shipped(std::string_view id) {
  const std::string_view body = embedded_file(id);
  require(!body.empty(), "no shipped template '" + std::string(id) + "'");
  return PromptTemplate(std::string(id), std::string(body));
}

std::string PromptTemplate::render(const std::map<std::string, std::string>& bindings) const {
  std::string out;
  out.reserve(body_.size());
  const std::string_view s = body_;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t brace = s.find('{', i);
    if (brace == std::string_view::npos) {
      out.append(s.substr(i));
      break;
    }
    out.append(s.substr(i, brace - i));
    const std::size_t n = placeholder_len(s, brace);
    if (n == 0) {
      out.push_back('{');
      i = brace + 1;
      continue;
    }
    const std::string name(s.substr(brace + 1, n - 2));
    const auto it = bindings.find(name);
    require(it != bindings.end(),
            "template '" + id_ + "' placeholder {" + name + "} is unbound");
    out.append(it->second);
    i = brace + n;
  }
  return out;
}

}  // namespace mgw
