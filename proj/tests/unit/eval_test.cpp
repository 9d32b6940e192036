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

#include <atomic>

#include "mgw/backends/call_log.hpp"
#include "mgw/core/records.hpp"
#include "mgw/eval/harness.hpp"
#include "mgw/eval/report.hpp"
#include "mgw/util/error.hpp"
#include "mgw/util/files.hpp"
#include "mgw/util/rng.hpp"
#include "test_support.hpp"

namespace mgw {
namespace {

using ojson = nlohmann::ordered_json;

EvalJob job_for(const std::string& llm, const std::string& corpus = "eval_corpus.jsonl") {
  EvalJob job;
  job.corpus = testing::fixture(corpus);
  job.system.llm = llm;
  job.system.scorer = "mock:overlap";
  job.reference_dir = testing::fixture("references");
  return job;
}

std::string dir_bytes(const std::filesystem::path& dir) {
  return read_file(dir / "report.json") + read_file(dir / "report.md") + read_file(dir / "ledger.jsonl");
}

TEST(Eval, OracleScoresPerfectly) {
  auto log = std::make_shared<CallLog>();
  const auto out = run_eval(job_for("mock:oracle"), log);
  const auto& r = out.report;
  EXPECT_EQ(r.items, 60u);
  EXPECT_TRUE(r.complete());
  EXPECT_EQ(r.modality_accuracy.value, 1.0);
  EXPECT_EQ(r.speech_bleu.value, 1.0);
  EXPECT_EQ(r.qa_accuracy.value, 1.0);
  EXPECT_EQ(r.clip_mean.value, 100.0);
  EXPECT_TRUE(r.fid.value.has_value()) << r.fid.absent_reason;
  EXPECT_EQ(r.confusion.n_total, 40u);
  EXPECT_EQ(r.parse_fallbacks, 0u);
  EXPECT_EQ(r.backend_errors, 0u);
  EXPECT_EQ(r.llm_calls, 60u);
  EXPECT_EQ(log->count("llm"), 60u);
  EXPECT_EQ(log->count("image", "generate"), 20u);
  EXPECT_EQ(log->count("speech"), 20u);
}

TEST(Eval, FewshotPolicyAlsoReachesOracle) {
  auto job = job_for("mock:oracle", "eval_small.jsonl");
  job.system.policy = PromptPolicy::kFewshot;
  EXPECT_EQ(run_eval(job).report.modality_accuracy.value, 1.0);
}

TEST(Eval, AlwaysTextScoresZeroAndGatesEverything) {
  const auto out = run_eval(job_for("mock:text"));
  const auto& r = out.report;
  EXPECT_EQ(r.modality_accuracy.value, 0.0);
  EXPECT_EQ(r.confusion.n_total, 40u);
  EXPECT_EQ(r.confusion.counts[1][0], 20u);
  EXPECT_EQ(r.confusion.counts[2][0], 20u);
  EXPECT_FALSE(r.speech_bleu.value.has_value());
  EXPECT_FALSE(r.speech_bleu.absent_reason.empty());
  EXPECT_FALSE(r.clip_mean.value.has_value());
  for (const auto& item : out.items) {
    if (item.ground != Modality::kText) {
      EXPECT_FALSE(item.gated);
      EXPECT_FALSE(item.bleu.has_value());
      EXPECT_FALSE(item.clip.has_value());
    }
  }
}

TEST(Eval, PenalizeMismatchSubstitutesZero) {
  auto job = job_for("mock:text");
  job.penalize_mismatch = true;
  const auto r = run_eval(job).report;
  EXPECT_EQ(r.speech_bleu.value, 0.0);
  EXPECT_EQ(r.clip_mean.value, 0.0);
}

TEST(Eval, IncludeTextGroundWidensDenominator) {
  auto job = job_for("mock:text");
  job.include_text_ground = true;
  const auto r = run_eval(job).report;
  EXPECT_EQ(r.confusion.n_total, 60u);
  EXPECT_NEAR(*r.modality_accuracy.value, 20.0 / 60.0, 1e-12);
}

TEST(Eval, ResumeAfterInterruptionEqualsUninterrupted) {
  testing::TempDir tmp;
  const auto full = run_eval(job_for("mock:oracle"));
  write_report(full, tmp / "full");

  auto job = job_for("mock:oracle");
  job.cache_dir = tmp / "cache";
  job.max_items = 17;
  const auto partial = run_eval(job);
  EXPECT_EQ(partial.report.completed, 17u);
  EXPECT_FALSE(partial.report.complete());
  EXPECT_FALSE(partial.report.fid.value.has_value());

  auto log = std::make_shared<CallLog>();
  job.max_items.reset();
  job.resume = true;
  const auto resumed = run_eval(job, log);
  EXPECT_EQ(log->count("llm"), 43u);
  EXPECT_EQ(resumed.report, full.report);
  write_report(resumed, tmp / "resumed");
  EXPECT_EQ(dir_bytes(tmp / "resumed"), dir_bytes(tmp / "full"));
}

TEST(Eval, CancelledBeforeStartRoutesNothing) {
  std::atomic<bool> cancel{true};
  auto job = job_for("mock:oracle");
  job.cancel = &cancel;
  const auto out = run_eval(job);
  EXPECT_EQ(out.report.completed, 0u);
  EXPECT_FALSE(out.report.modality_accuracy.value.has_value());
}

TEST(Eval, CorpusOrderDoesNotMatter) {
  testing::TempDir tmp;
  auto records = read_corpus(testing::fixture("eval_corpus.jsonl"));
  Rng rng(17);
  rng.shuffle(records);
  write_corpus(tmp / "shuffled.jsonl", records);
  auto job = job_for("mock:oracle");
  const auto a = run_eval(job).report;
  job.corpus = tmp / "shuffled.jsonl";
  job.parallelism = 1;
  EXPECT_EQ(run_eval(job).report, a);
}

TEST(Eval, RecomputeFromWrittenFilesMatches) {
  testing::TempDir tmp;
  for (const char* llm : {"mock:oracle", "mock:text", "mock:keyword"}) {
    const auto job = job_for(llm);
    const auto out = run_eval(job);
    write_report(out, tmp.path());
    EXPECT_EQ(recompute_report_from_dir(tmp.path(), job.system), out.report) << llm;
    EXPECT_EQ(EvalReport::from_json(ojson::parse(read_file(tmp / "report.json"))), out.report);
  }
}

TEST(Eval, BudgetCountsReasks) {
  auto job = job_for("mock:garbage", "eval_small.jsonl");
  job.system.max_reasks = 2;
  const auto r = run_eval(job).report;
  EXPECT_EQ(r.llm_calls, 6u * 3u);
  EXPECT_EQ(r.parse_fallbacks, 6u);
}

TEST(Eval, ConversionOutageIsRecordedNotFatal) {
  auto job = job_for("mock:oracle");
  job.system.image = "mock:down";
  const auto r = run_eval(job).report;
  EXPECT_EQ(r.backend_errors, 20u);
  EXPECT_EQ(r.modality_accuracy.value, 1.0);
  EXPECT_FALSE(r.clip_mean.value.has_value());
  EXPECT_EQ(r.speech_bleu.value, 1.0);
}

TEST(Eval, LlmOutageCountsAsMiss) {
  const auto out = run_eval(job_for("mock:down", "eval_small.jsonl"));
  EXPECT_EQ(out.report.modality_accuracy.value, 0.0);
  EXPECT_EQ(out.report.backend_errors, 6u);
  for (const auto& item : out.items) {
    EXPECT_TRUE(item.error.has_value());
    EXPECT_FALSE(item.predicted.has_value());
  }
}

TEST(Eval, MissingCorpusNamesPath) {
  auto job = job_for("mock:oracle");
  job.corpus = "/nonexistent/corpus.jsonl";
  try {
    run_eval(job);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/corpus.jsonl"), std::string::npos);
  }
}

TEST(Eval, FidNeedsResolvableReferences) {
  auto job = job_for("mock:oracle");
  job.reference_dir.reset();
  EXPECT_FALSE(run_eval(job).report.fid.value.has_value());
  testing::TempDir empty;
  job.reference_dir = empty.path();
  const auto r = run_eval(job).report;
  EXPECT_FALSE(r.fid.value.has_value());
  EXPECT_NE(r.fid.absent_reason.find("24531"), std::string::npos) << r.fid.absent_reason;
}

TEST(Config, DigestIgnoresNameOnly) {
  SystemConfig a;
  SystemConfig b = a;
  b.name = "other";
  EXPECT_EQ(a.digest(), b.digest());
  b.policy = PromptPolicy::kFewshot;
  EXPECT_NE(a.digest(), b.digest());
  EXPECT_EQ(a.digest().size(), 16u);
  EXPECT_EQ(SystemConfig::from_json(b.to_json()).to_json(), b.to_json());
  auto job = job_for("mock:text");
  job.max_items = 3;
  EXPECT_EQ(EvalJob::from_json(job.to_json()).to_json(), job.to_json());
}

TEST(Report, MarkdownColumnsAndDashes) {
  const auto out = run_eval(job_for("mock:text"));
  const auto md = render_markdown(out.report);
  EXPECT_NE(md.find("| System | Modality Acc.(%) | CLIP | FID | QA | BLEU |"), std::string::npos);
  EXPECT_NE(md.find(std::string("| ") + std::string(kMissingCell) + " |"), std::string::npos);
  EXPECT_NE(md.find("| system | 0.0 |"), std::string::npos);
}

TEST(Report, LedgerHasNoTimingOrBytes) {
  const auto out = run_eval(job_for("mock:oracle", "eval_small.jsonl"));
  const auto ledger = render_ledger(out.items);
  EXPECT_EQ(ledger.find("millis"), std::string::npos);
  EXPECT_EQ(ledger.find("bytes_b64"), std::string::npos);
  EXPECT_EQ(std::count(ledger.begin(), ledger.end(), '\n'), 6);
}

TEST(Report, SchemaMismatch) {
  try {
    EvalReport::from_json(ojson{{"schema", "other/1"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaMismatch);
  }
  const auto good = run_eval(job_for("mock:oracle", "eval_small.jsonl")).report.to_json();
  const std::vector<ojson> mixed{good, ojson{{"hello", 1}}};
  EXPECT_THROW(compare_systems(mixed), Error);
  const std::vector<ojson> one{good};
  EXPECT_THROW(compare_systems(one), Error);
}

TEST(Compare, IdenticalReportsGiveIdenticalRows) {
  const auto r = run_eval(job_for("mock:oracle")).report.to_json();
  const std::vector<ojson> two{r, r};
  const auto c = compare_systems(two);
  ASSERT_EQ(c.rows.size(), 2u);
  EXPECT_EQ(c.rows[0].values, c.rows[1].values);
  EXPECT_EQ(c.rows[0].ranks, c.rows[1].ranks);
  EXPECT_EQ(c.rows[0].ranks[0], 1u);
}

TEST(Compare, RanksAndMissingNotes) {
  auto oracle_job = job_for("mock:oracle");
  oracle_job.system.name = "oracle";
  auto text_job = job_for("mock:text");
  text_job.system.name = "text";
  text_job.system.scorer.clear();
  const std::vector<ojson> reports{run_eval(text_job).report.to_json(),
                                   run_eval(oracle_job).report.to_json()};
  const auto c = compare_systems(reports);
  EXPECT_EQ(c.rows[0].system, "text");
  EXPECT_EQ(c.rows[1].ranks[0], 1u);
  EXPECT_EQ(c.rows[0].ranks[0], 2u);
  EXPECT_FALSE(c.rows[0].values[1].has_value());
  EXPECT_FALSE(c.notes.empty());
  EXPECT_NE(c.to_markdown().find(std::string(kMissingCell)), std::string::npos);
  EXPECT_EQ(c.to_json()["rows"].size(), 2u);
}

}  // namespace
}  // namespace mgw
