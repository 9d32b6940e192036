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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <httplib.h>

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgw/backends/call_log.hpp"
#include "mgw/backends/mocks.hpp"
#include "mgw/backends/registry.hpp"
#include "mgw/cli/cli.hpp"
#include "mgw/core/parser.hpp"
#include "mgw/core/records.hpp"
#include "mgw/datagen/captions.hpp"
#include "mgw/datagen/filter.hpp"
#include "mgw/datagen/generation.hpp"
#include "mgw/datagen/mix.hpp"
#include "mgw/eval/harness.hpp"
#include "mgw/eval/report.hpp"
#include "mgw/metrics/bleu.hpp"
#include "mgw/router/router.hpp"
#include "mgw/service/server.hpp"
#include "mgw/util/digest.hpp"
#include "mgw/util/files.hpp"
#include "mgw/util/rng.hpp"
#include "mgw/util/text.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace mgw {
namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Collects the first few failures of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_.size() < 3) failures_.push_back(what);
    ++count_;
  }
  bool ok() const { return count_ == 0; }
  std::string summary() const {
    std::string s;
    for (const auto& f : failures_) s += (s.empty() ? "" : "; ") + f;
    if (count_ > failures_.size()) s += "; +" + std::to_string(count_ - failures_.size()) + " more";
    return s;
  }

 private:
  std::vector<std::string> failures_;
  std::size_t count_ = 0;
};

EvalJob corpus_job(const std::string& llm) {
  EvalJob job;
  job.corpus = testing::fixture("eval_corpus.jsonl");
  job.system.llm = llm;
  job.system.scorer = "mock:overlap";
  job.reference_dir = testing::fixture("references");
  return job;
}

void oracle_end_to_end(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_eval(corpus_job("mock:oracle")).report;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::array<std::size_t, 3> per_route{};
  for (const auto& rec : read_corpus(testing::fixture("eval_corpus.jsonl"))) ++per_route[index_of(rec.output.modality())];
  c.expect(per_route == std::array<std::size_t, 3>{20, 20, 20}, "corpus is not 20 items per route");
  c.expect(r.items == 60 && r.complete(), "expected 60 completed items");
  c.expect(r.modality_accuracy.value == 1.0, "modality accuracy != 1");
  c.expect(r.speech_bleu.value == 1.0, "speech BLEU != 1");
  c.expect(r.qa_accuracy.value == 1.0, "QA accuracy != 1");
  c.expect(secs < 10.0, "took " + std::to_string(secs) + " s");
}

void adversarial_floor(Check& c) {
  const auto out = run_eval(corpus_job("mock:text"));
  const auto& r = out.report;
  c.expect(r.modality_accuracy.value == 0.0, "modality accuracy != 0");
  c.expect(r.confusion.n_total == 40, "eligible set is not the 40 image/speech items");
  c.expect(!r.speech_bleu.value && !r.clip_mean.value, "gated metrics should be absent");
  for (const auto& item : out.items) {
    if (item.ground == Modality::kText) continue;
    c.expect(!item.gated && !item.bleu && !item.clip, item.record_id + " passed the eligibility gate");
  }
}

void parser_corpus(Check& c) {
  const std::vector<StructuredResponse> originals{
      {Modality::kText, "The three primary colors are red, blue, and yellow."},
      {Modality::kImage, "The Great Wave off Kanagawa."},
      {Modality::kSpeech, "Good morning, everyone."},
      {Modality::kImage, "A red fox in the snow"},
      {Modality::kSpeech, "Welcome aboard, and enjoy the ride!"},
  };
  std::size_t variants = 0;
  for (const auto& sr : originals) {
    const bool speech = sr.modality() == Modality::kSpeech;
    // Speech records are written with the "audio" alias in every variant.
    const std::string type = speech ? "audio" : std::string(to_string(sr.modality()));
    const std::string strict = "{\"type\": \"" + type + "\", \"response\": \"" + sr.response() + "\"}";
    const std::vector<std::string> corrupted{
        "```json\n" + strict + "\n```",
        "'{'type': '" + type + "', 'response': '" + sr.response() + "'}'",
        "Sure! Here is the answer: " + strict + " Let me know if you need anything else.",
        "{\"type\": \"" + type + "\", \"response\": \"" + sr.response() + "\",}",
    };
    for (const auto& raw : corrupted) {
      ++variants;
      const auto p = parse_structured_response(raw, true);
      c.expect(p.ok() && !p.fell_back_to_text && *p.result == sr, "variant not restored: " + raw);
    }
  }
  c.expect(variants == 20, "expected 20 variants");

  const std::vector<std::string> irreparable{
      "I am not sure what you are asking for.",
      "{\"type\": \"image\", \"response\": ",
      "{\"type\": \"hologram\", \"response\": \"a spinning cube\"}",
  };
  for (const auto& raw : irreparable) {
    const auto p = parse_structured_response(raw, true);
    c.expect(p.ok() && p.fell_back_to_text && p.result->modality() == Modality::kText &&
                 p.result->response() == trim(raw),
             "no text fallback for: " + raw);
  }
}

void bleu_oracle(Check& c) {
  Rng rng(20240601);
  for (int i = 0; i < 50; ++i) {
    const std::string cand = oracle::random_sentence(rng);
    std::vector<std::string> refs;
    const auto n = 1 + rng.below(3);
    for (std::uint64_t k = 0; k < n; ++k) refs.push_back(oracle::random_sentence(rng));
    const double got = bleu(cand, refs);
    const double want = oracle::bleu(cand, refs);
    c.expect(std::abs(got - want) <= 1e-9, "pair " + std::to_string(i) + ": " + std::to_string(got) +
                                               " vs " + std::to_string(want));
  }
  for (int i = 0; i < 100; ++i) {
    const std::string x = oracle::random_sentence(rng);
    c.expect(bleu(x, x) == 1.0, "bleu(x,[x]) != 1 for '" + x + "'");
  }
}

void datagen_arithmetic(Check& c) {
  std::vector<std::string> captions;
  for (int i = 0; i < 600; ++i) captions.push_back("caption number " + std::to_string(i));
  CaptionPool pool(Modality::kImage, captions, "synthetic");
  auto teacher = make_teacher_chat();
  const auto seeds = read_corpus(testing::fixture("seeds.jsonl"), RecordSource::kSeed);
  GenerationOptions go;
  go.batch_size = 60;
  const auto batches = run_generation(pool, seeds, *teacher, Modality::kImage, 11, go);
  std::set<std::string> seen;
  std::size_t drawn = 0;
  for (const auto& b : batches) {
    c.expect(b.captions.size() == 60, "batch of " + std::to_string(b.captions.size()));
    drawn += b.captions.size();
    for (const auto& cap : b.captions) seen.insert(cap);
  }
  c.expect(batches.size() == 10, std::to_string(batches.size()) + " batches");
  c.expect(seen.size() == 600 && drawn == 600, "batches are not disjoint or do not cover the pool");

  const auto counts = apportion(52000, MixRatios{});
  c.expect(counts == std::array<std::size_t, 3>{17334, 17333, 17333}, "apportion(52000) mismatch");

  const std::vector<CaptionInstruction> pairs{
      {"Purr", "Generate the sound of a cat purring"},
      {"Konnichiwa", "Read this sentence in Japanese: good afternoon"},
      {"Hello", "   "},
      {"  ", "Say hello to everyone"},
      {"Good night", "Please say good night to the kids."},
      {"Good night", "Please say good night to the kids!"},
      {"Welcome", "Announce a warm welcome to our guests"},
  };
  const auto r = filter_instructions(pairs, Modality::kSpeech);
  c.expect(r.report.input == pairs.size(), "input count");
  c.expect(r.report.retained + r.report.removed() == r.report.input, "filter counts do not sum to input");
  c.expect(r.report.nonspeech_audio == 1 && r.report.non_english_speech == 1 && r.report.empty == 1 &&
               r.report.malformed == 1 && r.report.duplicate == 1,
           "expected one removal per class");
  bool purr = false;
  for (const auto& rm : r.removed) {
    purr |= rm.reason == FilterReason::kNonspeechAudio &&
            rm.pair.instruction == "Generate the sound of a cat purring";
  }
  c.expect(purr, "cat purring was not removed as non-speech audio");
}

void speech_verbatim(Check& c) {
  Rng rng(77);
  std::map<std::string, std::string> replies;
  std::vector<std::pair<std::string, std::string>> cases;
  for (int i = 0; i < 50; ++i) {
    std::string words = oracle::random_sentence(rng, 2, 14);
    if (i % 5 == 0) words = "  " + words + "  ";
    if (i % 7 == 0) words += " \"quoted\" \\ tab\tend";
    const std::string instruction = "Please say item " + std::to_string(i) + " aloud";
    replies[instruction] = StructuredResponse(Modality::kSpeech, words).serialize(
        i % 2 ? SpeechSpelling::kAudio : SpeechSpelling::kSpeech);
    cases.emplace_back(instruction, words);
  }
  BackendSet b;
  b.llm = make_oracle_chat(replies, "unused");
  b.image = std::make_shared<HashImageBackend>(nullptr);
  b.speech = std::make_shared<EchoSpeechBackend>(nullptr);
  for (const auto& [instruction, words] : cases) {
    const auto r = route(instruction, ConversationHistory{}, b, RouteOptions{});
    const auto& parsed = r.trace.parse_outcome.result;
    c.expect(r.modality == Modality::kSpeech && r.artifact && parsed, instruction + " was not routed to speech");
    if (!r.artifact || !parsed) continue;
    c.expect(r.artifact->prompt_used == parsed->response(), instruction + ": prompt_used differs from response");
    c.expect(parsed->response() == words, instruction + ": parsed response differs from the emitted one");
  }
}

// datagen (both media routes) + mix + eval, all through the CLI entry point.
void pipeline(const fs::path& dir) {
  std::ostringstream out, err;
  auto must = [&](std::vector<std::string> args) {
    if (dispatch(args, out, err) != kExitOk) fail(ErrorCode::kIo, "pipeline step failed: " + err.str());
  };
  const auto fx = [](const std::string& n) { return testing::fixture(n).string(); };
  must({"datagen", "--modality", "image", "--captions", fx("image_captions.txt"), "--seeds", fx("seeds.jsonl"),
        "--out", (dir / "gen").string(), "--seed", "5", "--parallelism", "4"});
  must({"datagen", "--modality", "speech", "--captions", fx("speech_captions.jsonl"), "--seeds", fx("seeds.jsonl"),
        "--out", (dir / "gen").string(), "--seed", "6", "--parallelism", "4"});
  must({"datagen", "--mix", "--text", fx("text_instructions.jsonl"), "--image", (dir / "gen/image.jsonl").string(),
        "--speech", (dir / "gen/speech.jsonl").string(), "--total", "60", "--val-fraction", "0.25", "--seed", "9",
        "--out", (dir / "mix").string()});
  must({"eval", "--corpus", (dir / "mix/val.jsonl").string(), "--llm", "mock:keyword", "--scorer", "mock:overlap",
        "--parallelism", "4", "--out", (dir / "eval").string()});
}

void determinism(Check& c) {
  testing::TempDir tmp;
  const fs::path work = tmp / "run";
  const std::vector<std::string> files{"gen/image.jsonl",      "gen/image.manifest.json", "gen/speech.jsonl",
                                       "gen/speech.manifest.json", "mix/corpus.jsonl",    "mix/train.jsonl",
                                       "mix/val.jsonl",         "mix/manifest.json",       "eval/report.json",
                                       "eval/report.md",        "eval/ledger.jsonl"};
  pipeline(work);
  std::map<std::string, std::string> first;
  for (const auto& f : files) first[f] = read_file(work / f);
  fs::remove_all(work);
  pipeline(work);
  for (const auto& f : files) {
    c.expect(!first[f].empty(), f + " is empty");
    c.expect(read_file(work / f) == first[f], f + " differs between runs");
  }
}

void service_contract(Check& c) {
  testing::TempDir tmp;
  ServiceConfig cfg;
  cfg.llm = "mock:oracle";
  cfg.oracle_corpus = testing::fixture("eval_corpus.jsonl");
  cfg.data_dir = tmp.path();
  cfg.request_log = tmp / "requests.log";
  Gateway gw(cfg, backends_for(cfg));
  const int port = gw.start(0);
  httplib::Client cli("127.0.0.1", port);

  auto res = cli.Post("/v1/sessions", "", "application/json");
  c.expect(res && res->status == 201, "session create failed");
  const std::string sid = res ? ojson::parse(res->body).value("id", "") : "";

  const auto records = read_corpus(testing::fixture("eval_corpus.jsonl"));
  std::vector<const InstructionRecord*> picks;
  for (auto m : {Modality::kText, Modality::kImage, Modality::kSpeech}) {
    for (const auto& r : records) {
      if (r.output.modality() == m) {
        picks.push_back(&r);
        break;
      }
    }
  }
  for (const auto* rec : picks) {
    const ojson body = {{"instruction", rec->instruction}, {"session_id", sid}};
    res = cli.Post("/v1/respond", body.dump(), "application/json");
    c.expect(res && res->status == 200, "respond failed for " + rec->instruction);
    if (!res || res->status != 200) continue;
    const auto j = ojson::parse(res->body);
    c.expect(j["modality"] == std::string(to_string(rec->output.modality())), "wrong modality");
    if (rec->output.modality() == Modality::kText) continue;
    const auto url = j["artifact_url"].get<std::string>();
    auto art = cli.Get(url);
    c.expect(art && art->status == 200, "artifact fetch failed: " + url);
    if (!art) continue;
    const std::string id = url.substr(url.rfind('/') + 1);
    c.expect(sha256_hex(art->body) == id, "artifact bytes do not hash to their id");
    c.expect(j["trace"]["conversion_prompt"] == rec->output.response(), "conversion prompt differs");
  }
  res = cli.Get("/v1/sessions/" + sid);
  c.expect(res && res->status == 200, "session fetch failed");
  if (res) {
    const auto turns = ojson::parse(res->body)["turns"];
    c.expect(turns.size() == 2 * picks.size(), "session has " + std::to_string(turns.size()) + " turns");
    for (std::size_t i = 0; i < turns.size() && i / 2 < picks.size(); i += 2) {
      c.expect(turns[i]["text"] == picks[i / 2]->instruction, "turn order");
    }
  }
  gw.stop();

  // An eval killed after 23 items and resumed matches an uninterrupted run.
  const fs::path whole = tmp / "whole", part = tmp / "part";
  auto job = corpus_job("mock:oracle");
  job.cache_dir = whole / "cache";
  write_report(run_eval(job), whole);
  job.cache_dir = part / "cache";
  job.max_items = 23;
  const auto stopped = run_eval(job);
  c.expect(!stopped.report.complete(), "interrupted run claims completion");
  job.max_items.reset();
  job.resume = true;
  write_report(run_eval(job), part);
  for (const auto* f : {"report.json", "report.md", "ledger.jsonl"}) {
    c.expect(read_file(whole / f) == read_file(part / f), std::string(f) + " differs after resume");
  }
}

}  // namespace
}  // namespace mgw

int main() {
  const std::vector<std::pair<std::string, std::function<void(mgw::Check&)>>> criteria{
      {"oracle end-to-end", mgw::oracle_end_to_end},
      {"adversarial floor", mgw::adversarial_floor},
      {"parser corpus", mgw::parser_corpus},
      {"BLEU oracle equivalence", mgw::bleu_oracle},
      {"datagen arithmetic", mgw::datagen_arithmetic},
      {"verbatim speech", mgw::speech_verbatim},
      {"determinism", mgw::determinism},
      {"service contract", mgw::service_contract},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    mgw::Check c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    if (c.ok()) {
      std::cout << "PASS " << name << "\n";
    } else {
      ++failed;
      std::cout << "FAIL " << name << ": " << c.summary() << "\n";
    }
  }
  return failed == 0 ? 0 : 1;
}
