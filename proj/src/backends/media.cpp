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

#include "mgw/backends/media.hpp"

#include <array>
#include <utility>

#include "mgw/util/error.hpp"

namespace mgw {
namespace {

constexpr std::array<std::pair<std::string_view, std::string_view>, 9> kMimeExt = {{
    {"image/png", ".png"},
    {"image/jpeg", ".jpg"},
    {"image/bmp", ".bmp"},
    {"image/webp", ".webp"},
    {"image/gif", ".gif"},
    {"audio/wav", ".wav"},
    {"audio/mpeg", ".mp3"},
    {"audio/ogg", ".ogg"},
    {"audio/flac", ".flac"},
}};

}  // namespace

std::string_view to_string(MediaKind k) { return k == MediaKind::kImage ? "image" : "audio"; }

MediaArtifact MediaArtifact::make(MediaKind kind, Bytes bytes, std::string mime,
                                  std::string prompt_used) {
  if (bytes.empty()) fail(ErrorCode::kBadPayload, "empty media payload");
  const std::string_view prefix = kind == MediaKind::kImage ? "image/" : "audio/";
  if (!std::string_view(mime).starts_with(prefix)) {
    fail(ErrorCode::kBadPayload, "mime '" + mime + "' does not match " +
                                     std::string(to_string(kind)));
  }
  MediaArtifact a;
  a.media_kind = kind;
  a.content_hash = sha256_hex(std::span<const std::uint8_t>(bytes));
  a.bytes = std::move(bytes);
  a.mime = std::move(mime);
  a.prompt_used = std::move(prompt_used);
  return a;
}

nlohmann::ordered_json MediaArtifact::to_json(bool include_bytes) const {
  nlohmann::ordered_json j;
  j["media_kind"] = std::string(to_string(media_kind));
  j["mime"] = mime;
  j["prompt_used"] = prompt_used;
  j["content_hash"] = content_hash;
  j["byte_length"] = bytes.size();
  if (include_bytes) j["bytes_b64"] = base64_encode(bytes);
  return j;
}

MediaArtifact MediaArtifact::from_json(const nlohmann::ordered_json& j) {
  const auto kind = j.at("media_kind").get<std::string>() == "audio" ? MediaKind::kAudio
                                                                     : MediaKind::kImage;
  auto bytes = base64_decode(j.at("bytes_b64").get<std::string>());
  if (!bytes) fail(ErrorCode::kBadPayload, "artifact bytes are not valid base64");
  auto a = make(kind, std::move(*bytes), j.at("mime").get<std::string>(),
                j.at("prompt_used").get<std::string>());
  if (j.contains("content_hash") && j["content_hash"].get<std::string>() != a.content_hash) {
    fail(ErrorCode::kBadPayload, "artifact content hash mismatch");
  }
  return a;
}

std::string extension_for_mime(std::string_view mime) {
  for (const auto& [m, ext] : kMimeExt) {
    if (m == mime) return std::string(ext);
  }
  return ".bin";
}

std::string mime_for_extension(std::string_view ext) {
  for (const auto& [m, e] : kMimeExt) {
    if (e == ext) return std::string(m);
  }
  return "application/octet-stream";
}

}  // namespace mgw
