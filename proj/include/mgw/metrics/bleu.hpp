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

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mgw {

inline constexpr int kBleuMaxOrder = 4;

// Lowercase; ASCII punctuation split into single-character tokens; then
// whitespace split.
std::vector<std::string> bleu_tokenize(std::string_view text);

// Sentence BLEU-4: clipped n-gram precisions, add-one smoothing for orders
// n >= 2 with no matches, orders longer than the candidate dropped from the
// geometric mean, brevity penalty against the closest reference length (ties
// pick the shorter). Zero unigram matches give 0. Throws Error(kEmptyInput)
// if the candidate or any reference has no tokens.
double bleu(std::string_view candidate, std::span<const std::string> references);
double bleu(std::string_view candidate, std::string_view reference);

double bleu_tokens(std::span<const std::string> candidate,
                   std::span<const std::vector<std::string>> references);

}  // namespace mgw
