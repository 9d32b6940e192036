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

#include <json.hpp>
#include <sstream>

#include "mgw/cli/cli.hpp"
#include "mgw/util/files.hpp"
#include "test_support.hpp"

namespace mgw {
namespace {

using ojson = nlohmann::ordered_json;

struct Run {
  int code = -1;
  std::string out;
  std::string err;

  ojson json() const {
    auto j = ojson::parse(out, nullptr, false);
    EXPECT_FALSE(j.is_discarded()) << out;
    return j;
  }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fx(const std::string& name) { return testing::fixture(name).string(); }

TEST(Cli, RequiresASubcommand) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
}

TEST(Cli, HelpForEverySubcommand) {
  for (const std::string sub : {"serve", "respond", "datagen", "eval", "stats", "compare"}) {
    const auto r = run({sub, "--help"});
    EXPECT_EQ(r.code, kExitOk) << sub;
    EXPECT_NE(r.out.find(sub), std::string::npos) << sub;
    EXPECT_NE(r.out.find("--"), std::string::npos) << sub;
  }
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, RespondPrintsRoutedJson) {
  testing::TempDir dir;
  const auto art = (dir / "fox.bmp").string();
  const auto r = run({"respond", "--instruction", "Can you draw a red fox in the snow?", "--artifact-out", art});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["modality"], "image");
  EXPECT_EQ(j["trace"]["conversion_prompt"], "A red fox in the snow");
  EXPECT_EQ(read_file(art).size(), 54u + 12288u);
}

TEST(Cli, RespondUsageErrors) {
  EXPECT_EQ(run({"respond"}).code, kExitUsage);
  EXPECT_EQ(run({"respond", "--instruction", "hi", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run({"respond", "--instruction", "hi", "--policy", "loud"}).code, kExitUsage);
  EXPECT_EQ(run({"respond", "--instruction", "hi", "--max-reasks", "-1"}).code, kExitUsage);
}

TEST(Cli, RespondWithoutFallbackReportsTrace) {
  const auto r = run({"respond", "--instruction", "hi", "--llm", "mock:garbage", "--no-fallback"});
  EXPECT_EQ(r.code, kExitRuntime);
  const auto j = r.json();
  EXPECT_TRUE(j["error"].is_string());
  EXPECT_EQ(j["trace"]["raw_llm_text"], "I am not sure.");
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, ConfigFileFillsUnsetOptions) {
  testing::TempDir dir;
  const auto cfg = (dir / "cfg.json").string();
  write_file(cfg, R"({"instruction": "Can you draw a cat?", "llm": "mock:text"})");
  auto r = run({"respond", "--config", cfg});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.json()["modality"], "text");

  // Command-line values win over the file.
  r = run({"respond", "--config", cfg, "--llm", "mock:keyword"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.json()["modality"], "image");

  write_file(cfg, R"({"instruction": "x", "colour": "blue"})");
  r = run({"respond", "--config", cfg});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("colour"), std::string::npos);

  write_file(cfg, R"({"instruction": {"nested": 1}})");
  EXPECT_EQ(run({"respond", "--config", cfg}).code, kExitUsage);
  write_file(cfg, "[1]");
  EXPECT_EQ(run({"respond", "--config", cfg}).code, kExitUsage);
}

TEST(Cli, MissingCorpusIsARuntimeError) {
  testing::TempDir dir;
  const auto missing = (dir / "nowhere.jsonl").string();
  const auto r = run({"eval", "--corpus", missing, "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, kExitRuntime);
  EXPECT_NE(r.err.find("nowhere.jsonl"), std::string::npos);
  EXPECT_EQ(run({"stats", "--corpus", missing}).code, kExitRuntime);
  EXPECT_EQ(run({"eval", "--corpus", missing}).code, kExitUsage);
}

TEST(Cli, EvalWritesReportAndResumes) {
  testing::TempDir dir;
  const auto out = (dir / "full").string();
  const auto full = run({"eval", "--corpus", fx("eval_corpus.jsonl"), "--llm", "mock:oracle", "--scorer",
                         "mock:overlap", "--references", fx("references"), "--out", out, "--name", "oracle"});
  ASSERT_EQ(full.code, kExitOk) << full.err;
  const auto report = full.json();
  EXPECT_EQ(report["items"], 60);
  EXPECT_EQ(report["modality_accuracy"]["value"], 1.0);
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(out) / "report.md"));

  const auto part = (dir / "part").string();
  const std::vector<std::string> base = {"eval", "--corpus", fx("eval_corpus.jsonl"), "--llm", "mock:oracle",
                                         "--scorer", "mock:overlap", "--references", fx("references"),
                                         "--out", part, "--name", "oracle"};
  auto first = base;
  first.insert(first.end(), {"--max-items", "25"});
  const auto interrupted = run(first);
  ASSERT_EQ(interrupted.code, kExitOk);
  EXPECT_NE(interrupted.err.find("--resume"), std::string::npos);
  auto second = base;
  second.push_back("--resume");
  const auto resumed = run(second);
  ASSERT_EQ(resumed.code, kExitOk) << resumed.err;
  EXPECT_EQ(read_file(std::filesystem::path(part) / "report.json"),
            read_file(std::filesystem::path(out) / "report.json"));

  // compare ranks the two systems.
  const auto text_out = (dir / "text").string();
  ASSERT_EQ(run({"eval", "--corpus", fx("eval_corpus.jsonl"), "--llm", "mock:text", "--out", text_out,
                 "--name", "text"})
                .code,
            kExitOk);
  const auto cmp = run({"compare", out + "/report.json", text_out + "/report.json"});
  ASSERT_EQ(cmp.code, kExitOk) << cmp.err;
  EXPECT_TRUE(cmp.json().is_object());
  const auto md = run({"compare", "--markdown", out + "/report.json", text_out + "/report.json"});
  ASSERT_EQ(md.code, kExitOk);
  EXPECT_NE(md.out.find("| oracle"), std::string::npos);
  EXPECT_EQ(run({"compare", (dir / "absent.json").string()}).code, kExitUsage);
}

TEST(Cli, DatagenMixAndStatsPipeline) {
  testing::TempDir dir;
  const auto gen = (dir / "gen").string();
  const auto g = run({"datagen", "--modality", "image", "--captions", fx("image_captions.txt"), "--seeds",
                      fx("seeds.jsonl"), "--out", gen, "--seed", "7"});
  ASSERT_EQ(g.code, kExitOk) << g.err;
  const auto summary = g.json();
  const auto records = summary["records"].get<std::string>();
  ASSERT_TRUE(std::filesystem::exists(records));
  ASSERT_TRUE(std::filesystem::exists(summary["manifest"].get<std::string>()));
  const auto manifest = ojson::parse(read_file(summary["manifest"].get<std::string>()));
  EXPECT_EQ(manifest["captions_drawn"], 120);
  EXPECT_EQ(manifest["batches"], 2);
  EXPECT_EQ(manifest["records"], summary["retained"]);
  const std::size_t retained = summary["retained"].get<std::size_t>();
  ASSERT_GT(retained, 20u);

  // Same seed, same bytes.
  const auto gen2 = (dir / "gen2").string();
  ASSERT_EQ(run({"datagen", "--modality", "image", "--captions", fx("image_captions.txt"), "--seeds",
                 fx("seeds.jsonl"), "--out", gen2, "--seed", "7"})
                .code,
            kExitOk);
  EXPECT_EQ(read_file(records), read_file(std::filesystem::path(gen2) / "image.jsonl"));

  const auto mixed = (dir / "mixed").string();
  const auto m = run({"datagen", "--mix", "--text", fx("text_instructions.jsonl"), "--image", records, "--total",
                      "40", "--ratios", "1/2,1/2,0", "--val-fraction", "0.1", "--out", mixed});
  ASSERT_EQ(m.code, kExitOk) << m.err;
  const auto man = m.json();
  EXPECT_EQ(man["splits"]["train"].get<std::size_t>() + man["splits"]["val"].get<std::size_t>(), 40u);
  EXPECT_EQ(man["splits"]["val"], 4);
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(mixed) / "train.jsonl"));
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(mixed) / "val.jsonl"));

  EXPECT_EQ(run({"datagen", "--mix", "--out", mixed, "--total", "4"}).code, kExitUsage);
  EXPECT_EQ(run({"datagen", "--modality", "text", "--captions", fx("image_captions.txt"), "--seeds",
                 fx("seeds.jsonl"), "--out", gen})
                .code,
            kExitUsage);

  const auto table = (dir / "stats.json").string();
  const auto s = run({"stats", "--corpus", (std::filesystem::path(mixed) / "corpus.jsonl").string(), "--out", table});
  ASSERT_EQ(s.code, kExitOk) << s.err;
  EXPECT_EQ(s.json(), ojson::parse(read_file(table)));
}

}  // namespace
}  // namespace mgw
