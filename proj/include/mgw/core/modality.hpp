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

#include <array>
#include <optional>
#include <string_view>

namespace mgw {

enum class Modality { kText, kImage, kSpeech };

inline constexpr std::array<Modality, 3> kAllModalities = {Modality::kText, Modality::kImage,
                                                           Modality::kSpeech};

// How speech is spelled on the wire: "speech" (main text) or "audio" (the
// seed listings and the few-shot template).
enum class SpeechSpelling { kSpeech, kAudio };

std::string_view to_string(Modality m, SpeechSpelling spelling = SpeechSpelling::kSpeech);

inline constexpr std::size_t index_of(Modality m) { return static_cast<std::size_t>(m); }

// Case-insensitive, whitespace-tolerant; "audio" is an alias for speech.
std::optional<Modality> try_canonicalize_modality(std::string_view raw);
// Throws Error(kUnknownModality).
Modality canonicalize_modality(std::string_view raw);

}  // namespace mgw
