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

#include <json.hpp>

#include "mgw/util/digest.hpp"

namespace mgw {

enum class MediaKind { kImage, kAudio };

std::string_view to_string(MediaKind k);

struct MediaArtifact {
  MediaKind media_kind = MediaKind::kImage;
  Bytes bytes;
  std::string mime;
  std::string prompt_used;
  std::string content_hash;  // sha256_hex(bytes)

  // Computes the hash; throws Error(kBadPayload) if bytes are empty or the mime
  // type does not belong to media_kind.
  static MediaArtifact make(MediaKind kind, Bytes bytes, std::string mime,
                            std::string prompt_used);

  // Metadata only unless include_bytes (then "bytes_b64" is added).
  nlohmann::ordered_json to_json(bool include_bytes = false) const;
  // Requires "bytes_b64"; re-verifies the hash.
  static MediaArtifact from_json(const nlohmann::ordered_json& j);

  friend bool operator==(const MediaArtifact&, const MediaArtifact&) = default;
};

// ".png", ".bmp", ".wav", ... ; ".bin" if unknown.
std::string extension_for_mime(std::string_view mime);
std::string mime_for_extension(std::string_view ext);

}  // namespace mgw
