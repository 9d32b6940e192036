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

#include <gtest/gtest.h>

#include <algorithm>

#include "mgw/core/modality.hpp"
#include "mgw/core/parser.hpp"
#include "mgw/core/records.hpp"
#include "mgw/core/structured_response.hpp"
#include "mgw/util/error.hpp"
#include "mgw/util/files.hpp"
#include "test_support.hpp"

namespace mgw {
namespace {

bool has_tag(const ParseOutcome& o, RepairTag t) {
  return std::find(o.repairs_applied.begin(), o.repairs_applied.end(), t) != o.repairs_applied.end();
}

TEST(Modality, CanonicalizesAliasesAndCase) {
  EXPECT_EQ(canonicalize_modality("text"), Modality::kText);
  EXPECT_EQ(canonicalize_modality(" IMAGE "), Modality::kImage);
  EXPECT_EQ(canonicalize_modality("audio"), Modality::kSpeech);
  EXPECT_EQ(canonicalize_modality("Speech"), Modality::kSpeech);
  EXPECT_FALSE(try_canonicalize_modality("video").has_value());
  try {
    canonicalize_modality("video");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownModality);
  }
  EXPECT_EQ(to_string(Modality::kSpeech, SpeechSpelling::kAudio), "audio");
}

TEST(StructuredResponse, SerializesTypeThenResponse) {
  const StructuredResponse r(Modality::kImage, "A cat");
  EXPECT_EQ(r.serialize(), R"({"type":"image","response":"A cat"})");
  EXPECT_EQ(StructuredResponse(Modality::kSpeech, "Hi").serialize(SpeechSpelling::kAudio),
            R"({"type":"audio","response":"Hi"})");
}

TEST(StructuredResponse, RejectsBlankResponse) {
  EXPECT_THROW(StructuredResponse(Modality::kText, "   "), Error);
  EXPECT_THROW(StructuredResponse(Modality::kText, ""), Error);
}

TEST(ExtractBlock, FindsFirstBalancedObject) {
  EXPECT_EQ(extract_structured_block("Sure! {\"a\": \"}\"} trailing"), "{\"a\": \"}\"}");
  EXPECT_EQ(extract_structured_block("```json\n{\"x\": {\"y\": 1}}\n```"), "{\"x\": {\"y\": 1}}");
  EXPECT_FALSE(extract_structured_block("no braces here").has_value());
  EXPECT_FALSE(extract_structured_block("{ unbalanced").has_value());
}

TEST(Parser, StrictInputHasNoRepairs) {
  const auto o = parse_structured_response(R"({"type": "image", "response": "A red fox."})", false);
  ASSERT_TRUE(o.ok());
  EXPECT_TRUE(o.strict());
  EXPECT_EQ(*o.result, StructuredResponse(Modality::kImage, "A red fox."));
}

TEST(Parser, OuterSingleQuotesAreStripped) {
  const auto o = parse_structured_response(R"('{"type": "text", "response": "4"}')", false);
  ASSERT_TRUE(o.ok());
  EXPECT_EQ(o.result->response(), "4");
}

TEST(Parser, SingleQuotedStringsAreConverted) {
  const auto o = parse_structured_response("{'type': 'speech', 'response': 'Hello there'}", false);
  ASSERT_TRUE(o.ok());
  EXPECT_EQ(o.result->modality(), Modality::kSpeech);
  EXPECT_TRUE(has_tag(o, RepairTag::kSingleQuotes));
}

TEST(Parser, ApostrophesInsideSingleQuotedValues) {
  const auto o = parse_structured_response("{'type': 'speech', 'response': 'I'm here'}", false);
  ASSERT_TRUE(o.ok());
  EXPECT_EQ(o.result->response(), "I'm here");
}

TEST(Parser, TrailingCommaIsRemoved) {
  const auto o = parse_structured_response(R"({"type": "image", "response": "x",})", false);
  ASSERT_TRUE(o.ok());
  EXPECT_TRUE(has_tag(o, RepairTag::kTrailingComma));
}

TEST(Parser, DoubledQuotesAreCollapsed) {
  const auto o = parse_structured_response(R"({""type"": ""text"", ""response"": ""ok""})", false);
  ASSERT_TRUE(o.ok());
  EXPECT_EQ(o.result->response(), "ok");
  EXPECT_TRUE(has_tag(o, RepairTag::kDoubledQuotes));
}

TEST(Parser, EscapedQuotesAreUnescaped) {
  const auto o = parse_structured_response(R"({\"type\": \"image\", \"response\": \"A dog\"})", false);
  ASSERT_TRUE(o.ok());
  EXPECT_EQ(o.result->response(), "A dog");
}

TEST(Parser, DuplicateResponseKeepsFirst) {
  const auto o =
      parse_structured_response(R"({"type": "text", "response": "first", "response": "second"})", false);
  ASSERT_TRUE(o.ok());
  EXPECT_EQ(o.result->response(), "first");
  EXPECT_TRUE(has_tag(o, RepairTag::kDuplicateResponse));
}

TEST(Parser, AudioAliasAndCase) {
  const auto o = parse_structured_response(R"({"type": "Audio", "response": "John"})", false);
  ASSERT_TRUE(o.ok());
  EXPECT_EQ(o.result->modality(), Modality::kSpeech);
}

TEST(Parser, ExtraKeysAreToleratedButTagged) {
  const auto o =
      parse_structured_response(R"({"type": "text", "response": "a", "confidence": 0.9})", false);
  ASSERT_TRUE(o.ok());
  EXPECT_FALSE(o.strict());
  EXPECT_TRUE(has_tag(o, RepairTag::kExtraKeys));
}

TEST(Parser, NumericResponseIsCoerced) {
  const auto o = parse_structured_response(R"({"type": "text", "response": 2})", false);
  ASSERT_TRUE(o.ok());
  EXPECT_EQ(o.result->response(), "2");
  EXPECT_TRUE(has_tag(o, RepairTag::kCoercedResponse));
}

TEST(Parser, UnknownModalityFailsWithoutFallback) {
  const auto o = parse_structured_response(R"({"type": "video", "response": "x"})", false);
  EXPECT_FALSE(o.ok());
  EXPECT_FALSE(o.failure.empty());
  EXPECT_TRUE(has_tag(o, RepairTag::kRejected));
}

TEST(Parser, IrreparableFallsBackToTrimmedText) {
  const auto o = parse_structured_response("  The answer is 42.  ", true);
  ASSERT_TRUE(o.ok());
  EXPECT_TRUE(o.fell_back_to_text);
  EXPECT_EQ(*o.result, StructuredResponse(Modality::kText, "The answer is 42."));
  EXPECT_TRUE(has_tag(o, RepairTag::kFallbackText));
}

TEST(Parser, BlankRawCannotFallBack) {
  const auto o = parse_structured_response("   ", true);
  EXPECT_FALSE(o.ok());
  EXPECT_FALSE(o.fell_back_to_text);
}

TEST(Parser, RepairStructuredTextThrowsIrreparable) {
  try {
    repair_structured_text("{type: image response}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIrreparable);
  }
}

TEST(Parser, OutcomeJsonRoundTrip) {
  const auto o = parse_structured_response("'{\"type\": \"image\", \"response\": \"A\",}'", false);
  const auto back = ParseOutcome::from_json(o.to_json());
  EXPECT_EQ(back.to_json(), o.to_json());
}

TEST(Records, PublishedLayoutRoundTrips) {
  const std::string line =
      R"({"instruction":"Can you show me the famous Japanese painting which includes wave and mountain fuji?",)"
      R"("output":{"type":"image","response":"The Great Wave off Kanagawa.","image_id":"42153"}})";
  const auto records = parse_corpus(line, "inline");
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].image_id, "42153");
  EXPECT_EQ(records[0].output.response(), "The Great Wave off Kanagawa.");
  EXPECT_EQ(serialize_corpus(records), line + "\n");
}

TEST(Records, QAFieldsRoundTrip) {
  const std::string line =
      R"({"instruction":"2+2?","output":{"type":"text","response":"4"},"choices":["3","4"],"correct_indices":[1]})";
  const auto r = parse_corpus(line, "inline").at(0);
  ASSERT_TRUE(r.qa.has_value());
  EXPECT_EQ(r.qa->choices.size(), 2u);
  EXPECT_EQ(r.qa->correct_indices, std::vector<std::size_t>{1});
  EXPECT_EQ(serialize_corpus({r}), line + "\n");
}

TEST(Records, QAIndexOutOfRangeIsRejected) {
  EXPECT_THROW(parse_corpus(R"({"instruction":"q","output":{"type":"text","response":"a"},"choices":["a"],"correct_indices":[3]})",
                            "inline"),
               Error);
}

TEST(Records, RecordIdIsStableAndContentDerived) {
  const InstructionRecord a{.instruction = "Say hi", .output = StructuredResponse(Modality::kSpeech, "Hi")};
  InstructionRecord b = a;
  EXPECT_EQ(record_id(a), record_id(b));
  EXPECT_EQ(record_id(a).size(), 16u);
  b.instruction = "Say hello";
  EXPECT_NE(record_id(a), record_id(b));
  b.id = "explicit";
  EXPECT_EQ(record_id(b), "explicit");
}

TEST(Records, BadLineReportsPathAndLine) {
  testing::TempDir dir;
  write_file(dir / "c.jsonl",
             "{\"instruction\":\"a\",\"output\":{\"type\":\"text\",\"response\":\"b\"}}\n\nnot json\n");
  try {
    read_corpus(dir / "c.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("c.jsonl:3"), std::string::npos) << e.what();
  }
}

TEST(Records, WriteReadRoundTrip) {
  testing::TempDir dir;
  const auto records = read_corpus(testing::fixture("eval_corpus.jsonl"));
  write_corpus(dir / "out.jsonl", records);
  EXPECT_EQ(read_corpus(dir / "out.jsonl"), records);
}

}  // namespace
}  // namespace mgw
