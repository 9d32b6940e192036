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

#include "mgw/backends/backends.hpp"
#include "mgw/backends/call_log.hpp"
#include "mgw/backends/media.hpp"
#include "mgw/backends/mocks.hpp"
#include "mgw/backends/registry.hpp"
#include "mgw/core/parser.hpp"
#include "mgw/core/records.hpp"
#include "mgw/metrics/bleu.hpp"
#include "mgw/util/digest.hpp"
#include "mgw/util/error.hpp"
#include "test_support.hpp"

namespace mgw {
namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kInvalidArgument;
}

TEST(Config, Validation) {
  BackendConfig cfg;
  cfg.base_url = "http://localhost:1";
  EXPECT_NO_THROW(cfg.validate());
  cfg.max_retries = 6;
  EXPECT_THROW(cfg.validate(), Error);
  cfg.max_retries = 5;
  cfg.timeout = std::chrono::milliseconds(0);
  EXPECT_THROW(cfg.validate(), Error);
  ChatRequest req{"hi", 2.5, 10};
  EXPECT_THROW(req.validate(), Error);
  req.temperature = 0.2;
  req.max_new_tokens = 0;
  EXPECT_THROW(req.validate(), Error);
}

TEST(Media, MakeHashesAndChecksMime) {
  const auto a = MediaArtifact::make(MediaKind::kImage, Bytes{1, 2, 3}, "image/png", "p");
  EXPECT_EQ(a.content_hash, sha256_hex(std::span<const std::uint8_t>(a.bytes)));
  EXPECT_EQ(code_of([] { MediaArtifact::make(MediaKind::kImage, Bytes{1}, "audio/wav", "p"); }),
            ErrorCode::kBadPayload);
  EXPECT_EQ(code_of([] { MediaArtifact::make(MediaKind::kAudio, Bytes{}, "audio/wav", "p"); }),
            ErrorCode::kBadPayload);
  EXPECT_EQ(MediaArtifact::from_json(a.to_json(true)), a);
  EXPECT_FALSE(a.to_json().contains("bytes_b64"));
  auto tampered = a.to_json(true);
  tampered["content_hash"] = std::string(64, '0');
  EXPECT_THROW(MediaArtifact::from_json(tampered), Error);
  EXPECT_EQ(extension_for_mime("image/bmp"), ".bmp");
  EXPECT_EQ(mime_for_extension(".wav"), "audio/wav");
  EXPECT_EQ(extension_for_mime("application/x-unknown"), ".bin");
}

TEST(Mocks, ScriptedChatRepliesInOrderThenRepeats) {
  const std::string reply = "{\"type\":\"text\",\"response\":\"2\"}";
  ScriptedChat chat({reply, "second"});
  EXPECT_EQ(complete_chat(chat, {"q"}).text, reply);
  EXPECT_EQ(complete_chat(chat, {"q"}).text, "second");
  EXPECT_EQ(complete_chat(chat, {"q"}).text, "second");
  EXPECT_EQ(chat.calls(), 3u);
}

TEST(Mocks, TruncationReportsLength) {
  ScriptedChat chat({"one two three four five"});
  const auto r = complete_chat(chat, {"q", 0.2, 3});
  EXPECT_EQ(r.text, "one two three");
  EXPECT_EQ(r.finish_reason, FinishReason::kLength);
}

TEST(Mocks, HashImageIsDeterministic64x64Bmp) {
  HashImageBackend img;
  const auto a = generate_image(img, "a red fox", 7);
  const auto b = generate_image(img, "a red fox", 7);
  const auto c = generate_image(img, "a red fox", 8);
  EXPECT_EQ(a.content_hash, b.content_hash);
  EXPECT_NE(a.content_hash, c.content_hash);
  EXPECT_EQ(a.mime, "image/bmp");
  EXPECT_EQ(a.bytes.size(), 54u + 64u * 64u * 3u);
  EXPECT_EQ(a.bytes[0], 'B');
  EXPECT_EQ(a.bytes, hash_image_bytes("a red fox", 7));
  EXPECT_EQ(a.prompt_used, "a red fox");
  EXPECT_THROW(generate_image(img, "  "), Error);
}

TEST(Mocks, EchoSpeechIsVerbatim) {
  EchoSpeechBackend tts;
  for (const std::string text : {"McDonald's",
                                 "She sells sea shells by the seashore. The shells she sells are "
                                 "surely seashells."}) {
    const auto a = synthesize_speech(tts, text);
    EXPECT_EQ(a.prompt_used, text);
    EXPECT_EQ(a.mime, "audio/wav");
    EXPECT_EQ(a.media_kind, MediaKind::kAudio);
  }
  EXPECT_THROW(synthesize_speech(tts, ""), Error);
}

TEST(Mocks, OverlapScorerMatchesFormula) {
  OverlapScorer scorer;
  HashImageBackend img;
  const auto art = generate_image(img, "A red fox in the snow");
  // Token sets {a, red, fox, in, the, snow} and {a, fox, on, grass}: 2 shared of 8.
  EXPECT_DOUBLE_EQ(score_clip(scorer, art, "a fox on grass"), 25.0);
  EXPECT_DOUBLE_EQ(score_clip(scorer, art, "A red fox in the snow"), 100.0);
  const auto audio = MediaArtifact::make(MediaKind::kAudio, Bytes{1}, "audio/wav", "x");
  EXPECT_THROW(score_clip(scorer, audio, "x"), Error);
}

TEST(Mocks, FailingScorerReportsScorerError) {
  auto scorer = make_failing_scorer();
  HashImageBackend img;
  const auto art = generate_image(img, "p");
  EXPECT_EQ(code_of([&] { score_clip(*scorer, art, "p"); }), ErrorCode::kScorerError);
}

TEST(Fid, MissingReferenceNamesEveryId) {
  OverlapScorer scorer;
  HashImageBackend img;
  InMemoryReferenceStore refs;
  refs.add("24531");
  const std::vector<FidPair> ok{{generate_image(img, "x"), "24531"}};
  const auto handle = collect_fid_pair(scorer, refs, ok);
  const auto status = await_fid(scorer, handle);
  EXPECT_EQ(status.status, "done");
  ASSERT_TRUE(status.fid.has_value());

  const std::vector<FidPair> bad{{generate_image(img, "x"), "24531"},
                                 {generate_image(img, "y"), "777"},
                                 {generate_image(img, "z"), "888"}};
  try {
    collect_fid_pair(scorer, refs, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingReference);
    EXPECT_NE(std::string(e.what()).find("777"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("888"), std::string::npos);
  }
  EXPECT_THROW(collect_fid_pair(scorer, refs, std::vector<FidPair>{}), Error);
}

TEST(Fid, DirectoryStoreResolvesByStem) {
  DirectoryReferenceStore refs(testing::fixture("references"));
  EXPECT_TRUE(refs.contains("24531"));
  EXPECT_FALSE(refs.contains("99999999"));
}

TEST(Mocks, InstructionFromPrompt) {
  EXPECT_EQ(instruction_from_prompt("...Instruction: Say hi\nResponse:"), "Say hi");
  EXPECT_EQ(instruction_from_prompt("User: a\nAssistant: b\nUser: c"), "c");
  EXPECT_EQ(instruction_from_prompt("plain"), "plain");
}

TEST(Mocks, OracleAnswersKnownInstructions) {
  const auto records = read_corpus(testing::fixture("eval_small.jsonl"));
  auto chat = make_oracle_chat(oracle_replies_for(records), "fallback");
  for (const auto& r : records) {
    EXPECT_EQ(complete_chat(*chat, {r.instruction}).text, r.output.serialize());
  }
  EXPECT_EQ(complete_chat(*chat, {"unknown"}).text, "fallback");
}

TEST(Mocks, KeywordChatPicksModality) {
  auto chat = make_keyword_chat();
  const auto parse = [&](const std::string& q) {
    return *parse_structured_response(complete_chat(*chat, {q}).text, false).result;
  };
  EXPECT_EQ(parse("Can you draw a red fox in the snow?"),
            StructuredResponse(Modality::kImage, "A red fox in the snow"));
  EXPECT_EQ(parse("Please read aloud 'good morning'").modality(), Modality::kSpeech);
  EXPECT_EQ(parse("What is 1+1?").modality(), Modality::kText);
}

TEST(Registry, BuildsMocksAndRejectsUnknown) {
  BackendOptions opts;
  EXPECT_EQ(make_chat_backend("mock:keyword", opts)->describe(), "mock:keyword");
  EXPECT_EQ(make_image_backend("mock:hash", opts)->describe(), "mock:hash");
  EXPECT_EQ(make_speech_backend("mock:echo", opts)->describe(), "mock:echo");
  EXPECT_EQ(make_scorer_backend("mock:overlap", opts)->describe(), "mock:overlap");
  EXPECT_EQ(make_chat_backend("http://127.0.0.1:9", opts)->describe(), "http://127.0.0.1:9");
  EXPECT_THROW(make_chat_backend("mock:nope", opts), Error);
  EXPECT_THROW(make_image_backend("ftp://x", opts), Error);
  EXPECT_TRUE(is_mock_spec("mock:text"));
}

TEST(CallLog, CountsByBackendAndOperation) {
  auto log = std::make_shared<CallLog>();
  HashImageBackend img(log);
  EchoSpeechBackend tts(log);
  generate_image(img, "a");
  synthesize_speech(tts, "b");
  synthesize_speech(tts, "c");
  EXPECT_EQ(log->count("speech"), 2u);
  EXPECT_EQ(log->count("image", "generate"), 1u);
  EXPECT_EQ(log->entries().back().input, "c");
  log->clear();
  EXPECT_EQ(log->entries().size(), 0u);
}

}  // namespace
}  // namespace mgw
