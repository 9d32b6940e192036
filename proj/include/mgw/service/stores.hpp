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
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgw/backends/media.hpp"
#include "mgw/core/modality.hpp"
#include "mgw/prompting/prompts.hpp"

namespace mgw {

struct ArtifactRef {
  std::string id;  // sha256 hex of the bytes
  std::string mime;
  std::size_t size = 0;
  std::filesystem::path path;

  nlohmann::ordered_json to_json() const;
};

struct StoredArtifact {
  Bytes bytes;
  std::string mime;
};

// Flat content-addressed directory: <sha256><ext>. Writes are idempotent.
class ArtifactStore {
 public:
  explicit ArtifactStore(std::filesystem::path dir);

  ArtifactRef put(const MediaArtifact& artifact);
  // nullopt for unknown or malformed ids, or a file whose digest no longer matches.
  std::optional<StoredArtifact> get(const std::string& id) const;
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  mutable std::mutex mu_;
};

struct SessionTurn {
  Role role = Role::kUser;
  std::string text;
  std::optional<Modality> modality;        // assistant turns
  std::optional<std::string> artifact_id;  // assistant turns with media
  std::string at;                          // UTC timestamp

  nlohmann::ordered_json to_json() const;
  static SessionTurn from_json(const nlohmann::ordered_json& j);
};

struct SessionInfo {
  std::string id;
  std::string created_at;
  std::string updated_at;
  std::vector<SessionTurn> turns;

  nlohmann::ordered_json to_json() const;
};

// One append-only JSON-lines file per session: a header line, then one line
// per turn. Appends to the same session are serialized.
class SessionStore {
 public:
  SessionStore(std::filesystem::path dir, std::size_t max_turns = kDefaultMaxTurns);

  std::string create();
  bool exists(const std::string& id) const;
  // Throws Error(kNotFound).
  SessionInfo load(const std::string& id) const;
  // The last max_turns turns; assistant turns appear as their structured reply.
  ConversationHistory history(const std::string& id) const;
  void append(const std::string& id, const std::vector<SessionTurn>& turns);

  std::size_t max_turns() const noexcept { return max_turns_; }

 private:
  std::filesystem::path path_for(const std::string& id) const;
  std::mutex& lock_for(const std::string& id);

  std::filesystem::path dir_;
  std::size_t max_turns_;
  std::mutex locks_mu_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

}  // namespace mgw
