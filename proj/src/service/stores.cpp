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

#include "mgw/service/stores.hpp"

#include <random>

#include "mgw/core/structured_response.hpp"
#include "mgw/util/digest.hpp"
#include "mgw/util/error.hpp"
#include "mgw/util/files.hpp"
#include "mgw/util/text.hpp"

namespace mgw {
namespace {

using ojson = nlohmann::ordered_json;

bool is_hex_id(const std::string& id, std::size_t min_len, std::size_t max_len) {
  if (id.size() < min_len || id.size() > max_len) return false;
  for (char c : id) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

}  // namespace

ojson ArtifactRef::to_json() const {
  ojson j;
  j["id"] = id;
  j["mime"] = mime;
  j["size"] = size;
  return j;
}

ArtifactStore::ArtifactStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

ArtifactRef ArtifactStore::put(const MediaArtifact& artifact) {
  const std::string id = sha256_hex(artifact.bytes);
  const auto path = dir_ / (id + extension_for_mime(artifact.mime));
  {
    std::lock_guard lock(mu_);
    if (!std::filesystem::exists(path)) {
      write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(artifact.bytes.data()),
                                               artifact.bytes.size()));
    }
  }
  return {id, artifact.mime, artifact.bytes.size(), path};
}

std::optional<StoredArtifact> ArtifactStore::get(const std::string& id) const {
  if (!is_hex_id(id, 64, 64)) return std::nullopt;
  std::lock_guard lock(mu_);
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir_, ec)) {
    if (!entry.is_regular_file() || entry.path().stem().string() != id) continue;
    const std::string raw = read_file(entry.path());
    Bytes bytes(raw.begin(), raw.end());
    if (sha256_hex(bytes) != id) return std::nullopt;
    return StoredArtifact{std::move(bytes), mime_for_extension(entry.path().extension().string())};
  }
  return std::nullopt;
}

ojson SessionTurn::to_json() const {
  ojson j;
  j["role"] = role == Role::kUser ? "user" : "assistant";
  j["text"] = text;
  j["modality"] = modality ? ojson(std::string(to_string(*modality))) : ojson(nullptr);
  j["artifact_id"] = artifact_id ? ojson(*artifact_id) : ojson(nullptr);
  j["at"] = at;
  return j;
}

SessionTurn SessionTurn::from_json(const ojson& j) {
  SessionTurn t;
  const std::string role = j.at("role").get<std::string>();
  t.role = (role == "Assistant" || role == "assistant") ? Role::kAssistant : Role::kUser;
  t.text = j.at("text").get<std::string>();
  if (j.contains("modality") && j["modality"].is_string()) {
    t.modality = canonicalize_modality(j["modality"].get<std::string>());
  }
  if (j.contains("artifact_id") && j["artifact_id"].is_string()) {
    t.artifact_id = j["artifact_id"].get<std::string>();
  }
  t.at = j.value("at", "");
  return t;
}

ojson SessionInfo::to_json() const {
  ojson j;
  j["id"] = id;
  j["created_at"] = created_at;
  j["updated_at"] = updated_at;
  auto arr = ojson::array();
  for (const auto& t : turns) arr.push_back(t.to_json());
  j["turns"] = std::move(arr);
  return j;
}

SessionStore::SessionStore(std::filesystem::path dir, std::size_t max_turns)
    : dir_(std::move(dir)), max_turns_(max_turns) {
  require(max_turns_ >= 1, "max_turns must be >= 1");
  std::filesystem::create_directories(dir_);
}

std::filesystem::path SessionStore::path_for(const std::string& id) const {
  return dir_ / (id + ".jsonl");
}

std::mutex& SessionStore::lock_for(const std::string& id) {
  std::lock_guard lock(locks_mu_);
  auto& slot = locks_[id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

std::string SessionStore::create() {
  static std::mutex rd_mu;
  static std::random_device rd;
  std::string id;
  do {
    std::uint64_t hi, lo;
    {
      std::lock_guard lock(rd_mu);
      hi = (std::uint64_t{rd()} << 32) | rd();
      lo = (std::uint64_t{rd()} << 32) | rd();
    }
    char buf[33];
    std::snprintf(buf, sizeof(buf), "%016llx%016llx", static_cast<unsigned long long>(hi),
                  static_cast<unsigned long long>(lo));
    id = buf;
  } while (std::filesystem::exists(path_for(id)));
  ojson header;
  header["session"] = id;
  header["created_at"] = utc_timestamp();
  std::lock_guard lock(lock_for(id));
  append_line(path_for(id), dump_json(header));
  return id;
}

bool SessionStore::exists(const std::string& id) const {
  return is_hex_id(id, 1, 64) && std::filesystem::exists(path_for(id));
}

SessionInfo SessionStore::load(const std::string& id) const {
  if (!exists(id)) fail(ErrorCode::kNotFound, "unknown session '" + id + "'");
  SessionInfo info;
  info.id = id;
  for (const auto& line : split_lines(read_file(path_for(id)))) {
    if (trim_view(line).empty()) continue;
    const auto j = ojson::parse(line, nullptr, false);
    if (j.is_discarded()) continue;  // torn final line after a crash
    if (j.contains("session")) {
      info.created_at = j.value("created_at", "");
      info.updated_at = info.created_at;
      continue;
    }
    info.turns.push_back(SessionTurn::from_json(j));
    info.updated_at = info.turns.back().at;
  }
  return info;
}

ConversationHistory SessionStore::history(const std::string& id) const {
  ConversationHistory h(max_turns_);
  for (const auto& t : load(id).turns) {
    if (t.role == Role::kAssistant && t.modality && !trim_view(t.text).empty()) {
      h.append(t.role, StructuredResponse(*t.modality, t.text).serialize());
    } else {
      h.append(t.role, t.text);
    }
  }
  return h;
}

void SessionStore::append(const std::string& id, const std::vector<SessionTurn>& turns) {
  if (!exists(id)) fail(ErrorCode::kNotFound, "unknown session '" + id + "'");
  if (turns.empty()) return;
  std::string lines;
  for (const auto& t : turns) lines += dump_json(t.to_json()) + "\n";
  std::lock_guard lock(lock_for(id));
  lines.pop_back();
  append_line(path_for(id), lines);
}

}  // namespace mgw
