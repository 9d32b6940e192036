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

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>

namespace mgw {

// Text with `{name}` placeholders (name = [A-Za-z_][A-Za-z0-9_]*). Literal
// JSON braces such as {"type": ...} are not placeholders.
class PromptTemplate {
 public:
  PromptTemplate(std::string id, std::string body);

  static PromptTemplate load(std::string id, const std::filesystem::path& path);
  // One of "fewshot", "teacher_image", "teacher_speech".
  static PromptTemplate shipped(std::string_view id);

  const std::string& id() const noexcept { return id_; }
  const std::string& body() const noexcept { return body_; }
  const std::set<std::string>& required_placeholders() const noexcept { return required_; }

  // Single pass: bound values are not rescanned. Throws Error(kInvalidArgument)
  // naming the first unbound placeholder.
  std::string render(const std::map<std::string, std::string>& bindings) const;

 private:
  std::string id_;
  std::string body_;
  std::set<std::string> required_;
};

std::set<std::string> find_placeholders(std::string_view text);

}  // namespace mgw
