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

#include <set>

#include "mgw/util/digest.hpp"
#include "mgw/util/error.hpp"
#include "mgw/util/files.hpp"
#include "mgw/util/rng.hpp"
#include "mgw/util/text.hpp"
#include "test_support.hpp"

namespace mgw {
namespace {

TEST(Digest, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Digest, Base64RoundTripAndPadding) {
  EXPECT_EQ(base64_encode(as_bytes("f")), "Zg==");
  EXPECT_EQ(base64_encode(as_bytes("fo")), "Zm8=");
  EXPECT_EQ(base64_encode(as_bytes("foo")), "Zm9v");
  for (const std::string& s : std::vector<std::string>{"", "a", "ab", "abc", "hello world", std::string("\0\xff\x10", 3)}) {
    const auto decoded = base64_decode(base64_encode(as_bytes(s)));
    ASSERT_TRUE(decoded.has_value());
    EXPECT_EQ(std::string(decoded->begin(), decoded->end()), s);
  }
  EXPECT_FALSE(base64_decode("Zm9v!").has_value());
  EXPECT_FALSE(base64_decode("Zm9").has_value());
}

TEST(Text, NormalizeWords) {
  EXPECT_EQ(normalize_words("  Hello,   World!! "), "hello world");
  EXPECT_EQ(normalize_words("???"), "");
  EXPECT_EQ(trim("\t x \n"), "x");
  EXPECT_EQ(split_words(" a  b\tc "), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Text, DumpJsonToleratesInvalidUtf8) {
  nlohmann::ordered_json j;
  j["s"] = std::string("bad \xff byte");
  EXPECT_NO_THROW(dump_json(j));
}

TEST(Rng, BelowStaysInRangeAndIsDeterministic) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.below(7);
    EXPECT_LT(x, 7u);
    EXPECT_EQ(x, b.below(7));
  }
}

TEST(Rng, SampleIndicesAreDistinct) {
  Rng rng(5);
  const auto idx = rng.sample_indices(100, 40);
  EXPECT_EQ(idx.size(), 40u);
  EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 40u);
}

TEST(Rng, DeriveSeedSeparatesLabels) {
  EXPECT_NE(derive_seed(1, "a"), derive_seed(1, "b"));
  EXPECT_NE(derive_seed(1, "a"), derive_seed(2, "a"));
  EXPECT_EQ(derive_seed(1, "a"), derive_seed(1, "a"));
}

TEST(Files, AtomicWriteAndAppend) {
  testing::TempDir dir;
  write_file_atomic(dir / "x.txt", "one");
  EXPECT_EQ(read_file(dir / "x.txt"), "one");
  write_file_atomic(dir / "x.txt", "two");
  EXPECT_EQ(read_file(dir / "x.txt"), "two");
  append_line(dir / "log.jsonl", "a");
  append_line(dir / "log.jsonl", "b");
  EXPECT_EQ(read_file(dir / "log.jsonl"), "a\nb\n");
}

TEST(Files, MissingFileNamesPath) {
  try {
    read_file("/definitely/not/here.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("/definitely/not/here.txt"), std::string::npos);
  }
}

}  // namespace
}  // namespace mgw
