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

#include "mgw/core/modality.hpp"

#include <string>

#include "mgw/util/error.hpp"
#include "mgw/util/text.hpp"

namespace mgw {

std::string_view to_string(Modality m, SpeechSpelling spelling) {
  switch (m) {
    case Modality::kText: return "text";
    case Modality::kImage: return "image";
    case Modality::kSpeech: return spelling == SpeechSpelling::kAudio ? "audio" : "speech";
  }
  return "text";
}

std::optional<Modality> try_canonicalize_modality(std::string_view raw) {
  const std::string key = to_lower_ascii(trim_view(raw));
  if (key == "text") return Modality::kText;
  if (key == "image") return Modality::kImage;
  if (key == "speech" || key == "audio") return Modality::kSpeech;
  return std::nullopt;
}

Modality canonicalize_modality(std::string_view raw) {
  if (auto m = try_canonicalize_modality(raw)) return *m;
  fail(ErrorCode::kUnknownModality, "'" + std::string(raw) + "'");
}

}  // namespace mgw
