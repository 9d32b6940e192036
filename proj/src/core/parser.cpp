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

#include "mgw/core/parser.hpp"

#include <algorithm>

#include "mgw/util/error.hpp"
#include "mgw/util/text.hpp"

namespace mgw {
namespace {

constexpr std::size_t kMaxExtractStarts = 64;
constexpr int kMaxRepairRounds = 16;

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::size_t skip_ws(std::string_view s, std::size_t i) {
  while (i < s.size() && is_ws(s[i])) ++i;
  return i;
}

// Index just past the closing quote of the double-quoted string opening at i,
// or npos if unterminated.
std::size_t skip_dq_string(std::string_view s, std::size_t i) {
  for (++i; i < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
    } else if (s[i] == '"') {
      return i + 1;
    }
  }
  return std::string_view::npos;
}

std::optional<std::size_t> balanced_end(std::string_view s, std::size_t start) {
  int depth = 0;
  for (std::size_t i = start; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '\\') {
      ++i;
    } else if (c == '"') {
      const std::size_t end = skip_dq_string(s, i);
      if (end == std::string_view::npos) return std::nullopt;
      i = end - 1;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::nullopt;
}

bool strip_outer_quotes(std::string& text) {
  bool changed = false;
  for (;;) {
    const std::string_view t = trim_view(text);
    if (t.size() < 2) break;
    const auto quote = [](char c) { return c == '\'' || c == '`'; };
    if (!quote(t.front()) || !quote(t.back())) break;
    text = trim(t.substr(1, t.size() - 2));
    changed = true;
  }
  return changed;
}

// Previous non-whitespace character before i is a position where a JSON
// string may begin.
bool at_value_start(std::string_view s, std::size_t i) {
  while (i > 0) {
    const char c = s[--i];
    if (is_ws(c)) continue;
    return c == '{' || c == ',' || c == ':' || c == '[';
  }
  return false;
}

bool convert_single_quotes(std::string& text) {
  const std::string_view s = text;
  std::string out;
  out.reserve(s.size());
  bool changed = false;
  for (std::size_t i = 0; i < s.size();) {
    const char c = s[i];
    if (c == '"') {
      std::size_t end = skip_dq_string(s, i);
      if (end == std::string_view::npos) end = s.size();
      out.append(s.substr(i, end - i));
      i = end;
      continue;
    }
    if (c == '\'' && at_value_start(s, i)) {
      // The closing quote is the first unescaped ' followed by a structural
      // character; apostrophes inside the string are left alone.
      std::size_t close = std::string_view::npos;
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        if (s[j] == '\\') {
          ++j;
          continue;
        }
        if (s[j] != '\'') continue;
        const std::size_t k = skip_ws(s, j + 1);
        if (k == s.size() || s[k] == ':' || s[k] == ',' || s[k] == '}' || s[k] == ']') {
          close = j;
          break;
        }
      }
      if (close != std::string_view::npos) {
        out.push_back('"');
        for (std::size_t j = i + 1; j < close; ++j) {
          if (s[j] == '\\' && j + 1 < close && s[j + 1] == '\'') {
            out.push_back('\'');
            ++j;
          } else if (s[j] == '\\' && j + 1 < close) {
            out.push_back(s[j]);
            out.push_back(s[++j]);
          } else if (s[j] == '"') {
            out.append("\\\"");
          } else {
            out.push_back(s[j]);
          }
        }
        out.push_back('"');
        i = close + 1;
        changed = true;
        continue;
      }
    }
    out.push_back(c);
    ++i;
  }
  if (changed) text = std::move(out);
  return changed;
}

bool remove_trailing_commas(std::string& text) {
  const std::string_view s = text;
  std::string out;
  out.reserve(s.size());
  bool changed = false;
  for (std::size_t i = 0; i < s.size();) {
    const char c = s[i];
    if (c == '"') {
      std::size_t end = skip_dq_string(s, i);
      if (end == std::string_view::npos) end = s.size();
      out.append(s.substr(i, end - i));
      i = end;
      continue;
    }
    if (c == ',') {
      std::size_t k = i + 1;
      // A run of commas before a closer is dropped entirely.
      while (k < s.size() && (is_ws(s[k]) || s[k] == ',')) ++k;
      if (k < s.size() && (s[k] == '}' || s[k] == ']')) {
        changed = true;
        i = k;
        continue;
      }
    }
    out.push_back(c);
    ++i;
  }
  if (changed) text = std::move(out);
  return changed;
}

bool unescape_doubled_quotes(std::string& text) {
  const std::string_view t = trim_view(text);
  if (t.empty() || t.front() != '{') return false;
  const std::size_t k = skip_ws(t, 1);
  if (t.substr(k).starts_with("\\\"")) {
    std::string out = replace_all(std::string(t), "\\\\", std::string(1, '\x01'));
    out = replace_all(std::move(out), "\\\"", "\"");
    text = replace_all(std::move(out), std::string(1, '\x01'), "\\");
    return true;
  }
  if (t.substr(k).starts_with("\"\"") && k + 2 < t.size() && t[k + 2] != ':' &&
      !is_ws(t[k + 2])) {
    text = replace_all(std::string(t), "\"\"", "\"");
    return true;
  }
  return false;
}

struct Member {
  std::size_t begin;  // start of key
  std::size_t end;    // one past value
  std::string key;
};

// Top-level members of an object, or nullopt if the text is not shaped like one.
std::optional<std::vector<Member>> scan_members(std::string_view s) {
  std::vector<Member> members;
  std::size_t i = skip_ws(s, 0);
  if (i >= s.size() || s[i] != '{') return std::nullopt;
  i = skip_ws(s, i + 1);
  if (i < s.size() && s[i] == '}') return members;
  for (;;) {
    if (i >= s.size() || s[i] != '"') return std::nullopt;
    const std::size_t key_end = skip_dq_string(s, i);
    if (key_end == std::string_view::npos) return std::nullopt;
    Member m{i, 0, std::string(s.substr(i + 1, key_end - i - 2))};
    i = skip_ws(s, key_end);
    if (i >= s.size() || s[i] != ':') return std::nullopt;
    i = skip_ws(s, i + 1);
    int depth = 0;
    for (; i < s.size(); ++i) {
      const char c = s[i];
      if (c == '"') {
        const std::size_t end = skip_dq_string(s, i);
        if (end == std::string_view::npos) return std::nullopt;
        i = end - 1;
      } else if (c == '{' || c == '[') {
        ++depth;
      } else if (c == '}' || c == ']') {
        if (depth == 0) break;
        --depth;
      } else if (c == ',' && depth == 0) {
        break;
      }
    }
    if (i >= s.size()) return std::nullopt;
    std::size_t value_end = i;
    while (value_end > m.begin && is_ws(s[value_end - 1])) --value_end;
    m.end = value_end;
    members.push_back(std::move(m));
    if (s[i] == '}') return members;
    i = skip_ws(s, i + 1);
  }
}

bool collapse_duplicate_response(std::string& text) {
  const auto members = scan_members(text);
  if (!members) return false;
  std::vector<const Member*> drop;
  bool seen = false;
  for (const auto& m : *members) {
    if (m.key != "response") continue;
    if (seen) drop.push_back(&m);
    seen = true;
  }
  if (drop.empty()) return false;
  // Erase back to front; each dropped member takes its preceding comma.
  for (auto it = drop.rbegin(); it != drop.rend(); ++it) {
    std::size_t from = (*it)->begin;
    while (from > 0 && is_ws(text[from - 1])) --from;
    if (from > 0 && text[from - 1] == ',') --from;
    text.erase(from, (*it)->end - from);
  }
  return true;
}

void add_tag(std::vector<RepairTag>& tags, RepairTag tag) {
  if (std::find(tags.begin(), tags.end(), tag) == tags.end()) tags.push_back(tag);
}

nlohmann::json strict_parse(std::string_view text) {
  return nlohmann::json::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/false);
}

}  // namespace

std::string_view to_string(RepairTag tag) {
  switch (tag) {
    case RepairTag::kOuterQuotes: return "outer-quotes";
    case RepairTag::kSingleQuotes: return "single-quotes";
    case RepairTag::kTrailingComma: return "trailing-comma";
    case RepairTag::kDoubledQuotes: return "doubled-quotes";
    case RepairTag::kDuplicateResponse: return "duplicate-response";
    case RepairTag::kExtraKeys: return "extra-keys";
    case RepairTag::kCoercedResponse: return "coerced-response";
    case RepairTag::kFallbackText: return "fallback-text";
    case RepairTag::kRejected: return "rejected";
  }
  return "unknown";
}

std::optional<std::string> extract_structured_block(std::string_view raw) {
  std::size_t starts = 0;
  for (std::size_t i = raw.find('{'); i != std::string_view::npos && starts < kMaxExtractStarts;
       i = raw.find('{', i + 1), ++starts) {
    if (auto end = balanced_end(raw, i)) return std::string(raw.substr(i, *end - i));
  }
  return std::nullopt;
}

RepairResult apply_repairs(std::string_view candidate) {
  RepairResult r{trim(candidate), {}};
  for (int round = 0; round < kMaxRepairRounds; ++round) {
    const std::string before = r.text;
    if (strip_outer_quotes(r.text)) add_tag(r.tags, RepairTag::kOuterQuotes);
    if (convert_single_quotes(r.text)) add_tag(r.tags, RepairTag::kSingleQuotes);
    if (remove_trailing_commas(r.text)) add_tag(r.tags, RepairTag::kTrailingComma);
    if (unescape_doubled_quotes(r.text)) add_tag(r.tags, RepairTag::kDoubledQuotes);
    if (collapse_duplicate_response(r.text)) add_tag(r.tags, RepairTag::kDuplicateResponse);
    if (r.text == before) break;
  }
  return r;
}

RepairResult repair_structured_text(std::string_view candidate) {
  RepairResult r = apply_repairs(candidate);
  const auto j = strict_parse(r.text);
  if (j.is_discarded() || !j.is_object()) {
    fail(ErrorCode::kIrreparable, "not a JSON object after repair: " + r.text);
  }
  return r;
}

nlohmann::ordered_json ParseOutcome::to_json() const {
  nlohmann::ordered_json j;
  j["ok"] = ok();
  j["result"] = result ? result->to_json() : nlohmann::ordered_json(nullptr);
  j["failure"] = failure;
  auto tags = nlohmann::ordered_json::array();
  for (RepairTag t : repairs_applied) tags.push_back(std::string(to_string(t)));
  j["repairs_applied"] = std::move(tags);
  j["fell_back_to_text"] = fell_back_to_text;
  j["raw"] = raw;
  return j;
}

ParseOutcome ParseOutcome::from_json(const nlohmann::ordered_json& j) {
  ParseOutcome o;
  if (j.contains("result") && j["result"].is_object()) {
    o.result = StructuredResponse(canonicalize_modality(j["result"]["type"].get<std::string>()),
                                  j["result"]["response"].get<std::string>());
  }
  o.failure = j.value("failure", "");
  for (const auto& t : j.value("repairs_applied", nlohmann::ordered_json::array())) {
    for (RepairTag tag : {RepairTag::kOuterQuotes, RepairTag::kSingleQuotes,
                          RepairTag::kTrailingComma, RepairTag::kDoubledQuotes,
                          RepairTag::kDuplicateResponse, RepairTag::kExtraKeys,
                          RepairTag::kCoercedResponse, RepairTag::kFallbackText,
                          RepairTag::kRejected}) {
      if (t.get<std::string>() == to_string(tag)) o.repairs_applied.push_back(tag);
    }
  }
  o.fell_back_to_text = j.value("fell_back_to_text", false);
  o.raw = j.value("raw", "");
  return o;
}

namespace {

std::optional<StructuredResponse> interpret(const nlohmann::json& j,
                                            std::vector<RepairTag>& tags,
                                            std::string& failure) {
  if (!j.is_object()) {
    failure = "structured block is not an object";
    return std::nullopt;
  }
  const auto type = j.find("type");
  if (type == j.end() || !type->is_string()) {
    failure = "missing string field \"type\"";
    return std::nullopt;
  }
  const auto modality = try_canonicalize_modality(type->get<std::string>());
  if (!modality) {
    failure = "unknown modality '" + type->get<std::string>() + "'";
    return std::nullopt;
  }
  const auto response = j.find("response");
  if (response == j.end() || response->is_null() || response->is_object() ||
      response->is_array()) {
    failure = "missing scalar field \"response\"";
    return std::nullopt;
  }
  std::string text;
  if (response->is_string()) {
    text = response->get<std::string>();
  } else {
    text = response->dump();
    add_tag(tags, RepairTag::kCoercedResponse);
  }
  if (trim_view(text).empty()) {
    failure = "empty response";
    return std::nullopt;
  }
  if (j.size() > 2) add_tag(tags, RepairTag::kExtraKeys);
  return StructuredResponse(*modality, std::move(text));
}

}  // namespace

ParseOutcome parse_structured_response(std::string_view raw, bool fallback_to_text) {
  ParseOutcome out;
  out.raw = std::string(raw);
  try {
    if (auto block = extract_structured_block(raw)) {
      RepairResult repaired = apply_repairs(*block);
      out.repairs_applied = std::move(repaired.tags);
      const auto j = strict_parse(repaired.text);
      if (j.is_discarded()) {
        out.failure = "irreparable structured block";
      } else {
        out.result = interpret(j, out.repairs_applied, out.failure);
      }
    } else {
      out.failure = "no structured block";
    }
  } catch (const std::exception& e) {
    out.result.reset();
    out.failure = e.what();
  }
  if (out.result) return out;

  const std::string trimmed = trim(raw);
  if (fallback_to_text && !trimmed.empty()) {
    out.result = StructuredResponse(Modality::kText, trimmed);
    out.fell_back_to_text = true;
    add_tag(out.repairs_applied, RepairTag::kFallbackText);
  } else {
    add_tag(out.repairs_applied, RepairTag::kRejected);
  }
  return out;
}

}  // namespace mgw
