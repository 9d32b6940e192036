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

#include "mgw/util/files.hpp"

#include <fstream>
#include <sstream>
#include <system_error>
#include <thread>

#include "mgw/util/error.hpp"

namespace mgw {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrorCode::kIo, "short write to " + path.string());
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::ostringstream suffix;
  suffix << ".tmp." << std::this_thread::get_id();
  const auto tmp = std::filesystem::path(path.string() + suffix.str());
  write_file(tmp, content);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::kIo, "cannot rename into " + path.string() + ": " + ec.message());
}

void append_line(const std::filesystem::path& path, std::string_view line) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) fail(ErrorCode::kIo, "cannot append to " + path.string());
  out << line << '\n';
  out.flush();
}

}  // namespace mgw
