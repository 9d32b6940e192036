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

#include "mgw/cli/cli.hpp"

#include <algorithm>
#include <atomic>
#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mgw/datagen/filter.hpp"
#include "mgw/datagen/generation.hpp"
#include "mgw/datagen/mix.hpp"
#include "mgw/datagen/stats.hpp"
#include "mgw/eval/harness.hpp"
#include "mgw/eval/report.hpp"
#include "mgw/router/router.hpp"
#include "mgw/service/server.hpp"
#include "mgw/util/error.hpp"
#include "mgw/util/files.hpp"
#include "mgw/util/text.hpp"

namespace mgw {
namespace {

using ojson = nlohmann::ordered_json;

std::atomic<bool> g_interrupted{false};

extern "C" void on_interrupt(int) { g_interrupted = true; }

// Installs a SIGINT/SIGTERM flag for the lifetime of the object.
class InterruptScope {
 public:
  InterruptScope() {
    g_interrupted = false;
    prev_int_ = std::signal(SIGINT, on_interrupt);
    prev_term_ = std::signal(SIGTERM, on_interrupt);
  }
  ~InterruptScope() {
    std::signal(SIGINT, prev_int_);
    std::signal(SIGTERM, prev_term_);
  }

 private:
  void (*prev_int_)(int);
  void (*prev_term_)(int);
};

// Flat JSON config: every key must name a long option of the subcommand.
// Values only fill options not given on the command line.
void apply_config(CLI::App& sub, const std::string& path) {
  const auto j = ojson::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw CLI::ValidationError("--config", path + " is not a flat JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw CLI::ValidationError("--config", "unknown key '" + key + "' in " + path);
    }
    if (key == "config") throw CLI::ValidationError("--config", "config files cannot nest");
    if (opt->count() > 0) continue;
    std::vector<std::string> values;
    auto scalar = [&](const ojson& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
      if (v.is_number()) return v.dump();
      throw CLI::ValidationError("--config", "key '" + key + "' must be a scalar or a list of scalars");
    };
    if (value.is_array()) {
      for (const auto& v : value) values.push_back(scalar(v));
    } else {
      values.push_back(scalar(value));
    }
    for (auto& v : values) opt->add_result(v);
    opt->run_callback();
  }
}

Modality route_modality(const std::string& s) {
  const Modality m = canonicalize_modality(s);
  require(m != Modality::kText, "--modality must be image or speech");
  return m;
}

double parse_share(const std::string& s) {
  const auto slash = s.find('/');
  std::size_t used = 0;
  if (slash == std::string::npos) {
    const double v = std::stod(s, &used);
    require(used == s.size(), "bad ratio '" + s + "'");
    return v;
  }
  const double num = std::stod(s.substr(0, slash));
  const double den = std::stod(s.substr(slash + 1));
  require(den > 0, "bad ratio '" + s + "'");
  return num / den;
}

MixRatios parse_ratios(const std::string& s) {
  MixRatios r;
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  require(parts.size() == 3, "--ratios needs three comma-separated shares (text,image,speech)");
  for (std::size_t i = 0; i < 3; ++i) r.share[i] = parse_share(parts[i]);
  // Exact thirds written as decimals are common; renormalize tiny drift.
  const double sum = r.share[0] + r.share[1] + r.share[2];
  if (std::abs(sum - 1.0) <= 1e-3 && sum > 0) {
    for (auto& x : r.share) x /= sum;
  }
  r.validate();
  return r;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& records) {
  auto p = records;
  p.replace_extension(".manifest.json");
  return p;
}

// Required options are checked after the config overlay so a config file
// can supply them.
void need(CLI::App& sub, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (sub.get_option(n)->count() == 0) throw CLI::RequiredError(n);
  }
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modality gateway: route instructions to text, image or speech"};
  app.name("mgw");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::function<int()> action;

  // serve
  ServiceConfig svc;
  std::string svc_config, svc_policy = "tuned", svc_token, svc_log, svc_oracle;
  std::string svc_data = svc.data_dir.string();
  int svc_timeout = static_cast<int>(svc.respond_timeout.count());
  auto* serve = app.add_subcommand("serve", "Run the HTTP gateway");
  serve->add_option("--config", svc_config, "Flat JSON file with option defaults");
  serve->add_option("--host", svc.host, "Bind address")->capture_default_str();
  serve->add_option("--port", svc.port, "Port (0 picks a free one)")->capture_default_str();
  serve->add_option("--llm", svc.llm, "LLM backend URL or mock:<name>")->capture_default_str();
  serve->add_option("--image", svc.image, "Image backend URL or mock:<name>")->capture_default_str();
  serve->add_option("--speech", svc.speech, "Speech backend URL or mock:<name>")->capture_default_str();
  serve->add_option("--scorer", svc.scorer, "Scorer backend URL or mock:<name>");
  serve->add_option("--policy", svc_policy, "tuned or fewshot")
      ->check(CLI::IsMember({"tuned", "fewshot"}))->capture_default_str();
  serve->add_option("--max-turns", svc.max_turns, "Turns of session history sent to the LLM")
      ->check(CLI::PositiveNumber)->capture_default_str();
  serve->add_option("--max-reasks", svc.max_reasks, "Corrective re-asks on unparseable replies")
      ->check(CLI::NonNegativeNumber);
  serve->add_option("--data-dir", svc_data, "Artifact, session and eval-job storage")->capture_default_str();
  serve->add_option("--token", svc_token, "Require this bearer token (default: $MGW_GATEWAY_TOKEN)");
  serve->add_option("--request-log", svc_log, "Append one JSON line per request here (default stderr)");
  serve->add_option("--respond-timeout", svc_timeout, "Seconds")->check(CLI::PositiveNumber)->capture_default_str();
  serve->add_option("--oracle-corpus", svc_oracle, "Corpus whose responses mock:oracle replays");
  serve->callback([&] {
    if (!svc_config.empty()) apply_config(*serve, svc_config);
    action = [&]() -> int {
      svc.policy = parse_policy(svc_policy);
      svc.data_dir = svc_data;
      svc.respond_timeout = std::chrono::seconds(svc_timeout);
      if (!svc_log.empty()) svc.request_log = svc_log;
      if (!svc_oracle.empty()) svc.oracle_corpus = svc_oracle;
      if (!svc_token.empty()) {
        svc.bearer_token = svc_token;
      } else if (const char* env = std::getenv("MGW_GATEWAY_TOKEN"); env && *env) {
        svc.bearer_token = env;
      }
      Gateway gw(svc, backends_for(svc));
      InterruptScope scope;
      const int port = gw.start();
      ojson j;
      j["listening"] = svc.host + ":" + std::to_string(port);
      out << dump_json(j) << std::endl;
      while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      gw.stop();
      gw.join_jobs();
      return kExitOk;
    };
  });

  // respond
  std::string r_config, r_instruction, r_llm = "mock:keyword", r_image = "mock:hash",
                                       r_speech = "mock:echo", r_policy = "tuned", r_oracle,
                                       r_artifact_out;
  int r_reasks = 0;
  bool r_no_fallback = false;
  auto* respond = app.add_subcommand("respond", "Route one instruction and print the result");
  respond->add_option("--config", r_config, "Flat JSON file with option defaults");
  respond->add_option("--instruction", r_instruction, "User instruction (required)");
  respond->add_option("--llm", r_llm, "LLM backend URL or mock:<name>")->capture_default_str();
  respond->add_option("--image", r_image, "Image backend URL or mock:<name>")->capture_default_str();
  respond->add_option("--speech", r_speech, "Speech backend URL or mock:<name>")->capture_default_str();
  respond->add_option("--policy", r_policy, "tuned or fewshot")
      ->check(CLI::IsMember({"tuned", "fewshot"}))->capture_default_str();
  respond->add_option("--max-reasks", r_reasks, "Corrective re-asks")->check(CLI::NonNegativeNumber);
  respond->add_flag("--no-fallback", r_no_fallback, "Fail instead of treating unparseable replies as text");
  respond->add_option("--oracle-corpus", r_oracle, "Corpus whose responses mock:oracle replays");
  respond->add_option("--artifact-out", r_artifact_out, "Write artifact bytes to this file");
  respond->callback([&] {
    if (!r_config.empty()) apply_config(*respond, r_config);
    need(*respond, {"--instruction"});
    action = [&]() -> int {
      BackendOptions opts;
      if (!r_oracle.empty()) opts.oracle_replies = oracle_replies_for(read_corpus(r_oracle));
      BackendSet b;
      b.llm = make_chat_backend(r_llm, opts);
      b.image = make_image_backend(r_image, opts);
      b.speech = make_speech_backend(r_speech, opts);
      RouteOptions ro;
      ro.policy = parse_policy(r_policy);
      ro.fallback_to_text = !r_no_fallback;
      ro.max_reasks = r_reasks;
      try {
        const RoutedResult result = route(r_instruction, ConversationHistory{}, b, ro);
        if (result.artifact && !r_artifact_out.empty()) {
          write_file(r_artifact_out,
                     std::string_view(reinterpret_cast<const char*>(result.artifact->bytes.data()),
                                      result.artifact->bytes.size()));
        }
        out << dump_json(result.to_json(), 2) << "\n";
        return kExitOk;
      } catch (const RouteError& e) {
        ojson j;
        j["error"] = e.what();
        j["trace"] = e.trace().to_json();
        out << dump_json(j, 2) << "\n";
        err << "mgw: " << e.what() << "\n";
        return kExitRuntime;
      }
    };
  });

  // datagen
  std::string d_config, d_modality, d_captions, d_seeds, d_out, d_llm = "mock:teacher";
  std::string d_text, d_image, d_speech, d_ratios = "1/3,1/3,1/3", d_nonspeech, d_languages;
  std::size_t d_target = 0, d_batch = kMaxCaptionsPerTeacherCall, d_parallel = 2, d_total = 0;
  double d_rate = 0, d_val = 0.0, d_dedup = 0.8;
  std::uint64_t d_seed = 0;
  bool d_mix = false;
  auto* datagen = app.add_subcommand("datagen", "Generate, filter, mix and split instruction data");
  datagen->add_option("--config", d_config, "Flat JSON file with option defaults");
  datagen->add_option("--modality", d_modality, "Target route for generation: image or speech");
  datagen->add_option("--captions", d_captions, "Caption pool (text lines or JSON lines with \"caption\")");
  datagen->add_option("--seeds", d_seeds, "Seed instruction corpus (JSON lines)");
  datagen->add_option("--target", d_target, "Captions to draw; 0 uses the whole pool")->capture_default_str();
  datagen->add_option("--out", d_out, "Output directory (required)");
  datagen->add_option("--llm", d_llm, "Teacher LLM URL or mock:<name>")->capture_default_str();
  datagen->add_option("--batch-size", d_batch, "Captions per teacher call")
      ->check(CLI::Range(std::size_t{1}, kMaxCaptionsPerTeacherCall))->capture_default_str();
  datagen->add_option("--parallelism", d_parallel, "Concurrent teacher calls")
      ->check(CLI::PositiveNumber)->capture_default_str();
  datagen->add_option("--rate", d_rate, "Max teacher calls per second (0 = unlimited)");
  datagen->add_option("--dedup-threshold", d_dedup, "Trigram Jaccard at which instructions are duplicates")
      ->capture_default_str();
  datagen->add_option("--nonspeech-lexicon", d_nonspeech, "Replace the shipped non-speech lexicon");
  datagen->add_option("--languages-lexicon", d_languages, "Replace the shipped language lexicon");
  datagen->add_option("--seed", d_seed, "RNG seed")->capture_default_str();
  datagen->add_flag("--mix", d_mix, "Mix per-route corpora instead of generating");
  datagen->add_option("--text", d_text, "Text-route corpus (mix mode)");
  datagen->add_option("--image", d_image, "Image-route corpus (mix mode)");
  datagen->add_option("--speech", d_speech, "Speech-route corpus (mix mode)");
  datagen->add_option("--total", d_total, "Dataset size (mix mode)");
  datagen->add_option("--ratios", d_ratios, "text,image,speech shares (mix mode)")->capture_default_str();
  datagen->add_option("--val-fraction", d_val, "Validation share per modality (mix mode)")
      ->check(CLI::Range(0.0, 0.999999));
  datagen->callback([&] {
    if (!d_config.empty()) apply_config(*datagen, d_config);
    need(*datagen, {"--out"});
    if (d_mix) {
      if (d_text.empty() && d_image.empty() && d_speech.empty()) {
        throw CLI::RequiredError("--mix needs at least one of --text, --image, --speech");
      }
      if (d_total == 0) throw CLI::RequiredError("--total");
    } else {
      for (auto [name, v] : {std::pair{"--modality", &d_modality}, {"--captions", &d_captions},
                             {"--seeds", &d_seeds}}) {
        if (v->empty()) throw CLI::RequiredError(name);
      }
    }
    action = [&]() -> int {
      const std::filesystem::path outdir = d_out;
      std::filesystem::create_directories(outdir);
      if (!d_mix) {
        const Modality target = route_modality(d_modality);
        CaptionPool pool = CaptionPool::load(d_captions, target);
        const auto seeds = read_corpus(d_seeds, RecordSource::kSeed);
        BackendOptions opts;
        const auto teacher = make_chat_backend(d_llm, opts);
        GenerationOptions go;
        go.batch_size = d_batch;
        go.target_captions = d_target;
        go.parallelism = d_parallel;
        go.max_calls_per_second = d_rate;
        const auto batches = run_generation(pool, seeds, *teacher, target, d_seed, go);
        const auto pairs = collect_pairs(batches);
        FilterOptions fo;
        fo.dedup_threshold = d_dedup;
        if (!d_nonspeech.empty()) fo.nonspeech_terms = load_lexicon(d_nonspeech);
        if (!d_languages.empty()) fo.languages = load_lexicon(d_languages);
        const auto filtered = filter_instructions(pairs, target, fo);

        const std::string route(to_string(target));
        const auto records_path = outdir / (route + ".jsonl");
        write_corpus(records_path, filtered.retained);
        ojson manifest;
        manifest["route"] = route;
        manifest["caption_source"] = pool.source_name();
        manifest["teacher_model"] = teacher->describe();
        manifest["rng_seed"] = d_seed;
        manifest["batch_size"] = d_batch;
        manifest["captions_drawn"] = [&] {
          std::size_t n = 0;
          for (const auto& b : batches) n += b.captions.size();
          return n;
        }();
        auto batch_json = ojson::array();
        std::size_t failed = 0;
        for (const auto& b : batches) {
          batch_json.push_back(b.to_json());
          if (b.error) ++failed;
        }
        manifest["batches"] = batches.size();
        manifest["failed_batches"] = failed;
        manifest["raw_pairs"] = pairs.size();
        manifest["filter_report"] = filtered.report.to_json();
        manifest["records"] = filtered.retained.size();
        manifest["batch_log"] = std::move(batch_json);
        write_file_atomic(manifest_path_for(records_path), dump_json(manifest, 2) + "\n");
        for (const auto& b : batches) {
          if (b.error) err << "mgw: batch " << b.index << " skipped: " << *b.error << "\n";
          else if (b.shortfall() > 0) err << "mgw: batch " << b.index << " shortfall " << b.shortfall() << "\n";
        }
        ojson summary;
        summary["records"] = records_path.string();
        summary["manifest"] = manifest_path_for(records_path).string();
        summary["retained"] = filtered.retained.size();
        summary["filter_report"] = filtered.report.to_json();
        out << dump_json(summary, 2) << "\n";
        return kExitOk;
      }

      std::array<std::vector<InstructionRecord>, 3> sources;
      DatasetManifest extra;
      const std::array<std::string*, 3> paths{&d_text, &d_image, &d_speech};
      for (auto m : kAllModalities) {
        const std::string& p = *paths[index_of(m)];
        if (p.empty()) continue;
        sources[index_of(m)] = read_corpus(p, m == Modality::kText ? RecordSource::kHuman : RecordSource::kTeacher);
        const auto mp = manifest_path_for(p);
        if (m != Modality::kText && std::filesystem::exists(mp)) {
          const auto gm = ojson::parse(read_file(mp));
          const std::string route(to_string(m));
          extra.caption_sources[route] = gm.value("caption_source", "");
          if (gm.contains("filter_report")) extra.filter_reports[route] = FilterReport::from_json(gm["filter_report"]);
          if (extra.teacher_model.empty()) extra.teacher_model = gm.value("teacher_model", "");
        }
      }
      auto mixed = mix_dataset(sources[0], sources[1], sources[2], d_total, parse_ratios(d_ratios), d_seed);
      const auto split = split_dataset(mixed.records, d_val, d_seed);
      DatasetManifest& man = mixed.manifest;
      man.caption_sources = extra.caption_sources;
      man.filter_reports = extra.filter_reports;
      man.teacher_model = extra.teacher_model;
      man.train_size = split.train.size();
      man.val_size = split.val.size();
      write_corpus(outdir / "corpus.jsonl", mixed.records);
      write_corpus(outdir / "train.jsonl", split.train);
      write_corpus(outdir / "val.jsonl", split.val);
      write_file_atomic(outdir / "manifest.json", dump_json(man.to_json(), 2) + "\n");
      out << dump_json(man.to_json(), 2) << "\n";
      return kExitOk;
    };
  });

  // eval
  std::string e_config, e_corpus, e_policy = "tuned", e_out, e_cache, e_refs, e_name = "system";
  SystemConfig e_sys;
  std::size_t e_parallel = kDefaultEvalParallelism, e_max_items = 0;
  bool e_resume = false, e_penalize = false, e_text_ground = false, e_no_fallback = false;
  auto* eval = app.add_subcommand("eval", "Benchmark a system on a validation corpus");
  eval->add_option("--config", e_config, "Flat JSON file with option defaults");
  eval->add_option("--corpus", e_corpus, "Validation corpus, JSON lines (required)");
  eval->add_option("--policy", e_policy, "tuned or fewshot")
      ->check(CLI::IsMember({"tuned", "fewshot"}))->capture_default_str();
  eval->add_option("--llm", e_sys.llm, "LLM backend URL or mock:<name>")->capture_default_str();
  eval->add_option("--image", e_sys.image, "Image backend URL or mock:<name>")->capture_default_str();
  eval->add_option("--speech", e_sys.speech, "Speech backend URL or mock:<name>")->capture_default_str();
  eval->add_option("--scorer", e_sys.scorer, "Scorer backend URL or mock:<name>");
  eval->add_option("--out", e_out, "Report directory (required)");
  eval->add_flag("--resume", e_resume, "Reuse cached item results");
  eval->add_option("--cache-dir", e_cache, "Item cache (default <out>/cache)");
  eval->add_option("--references", e_refs, "Reference image directory for FID");
  eval->add_option("--parallelism", e_parallel, "Concurrent router invocations")
      ->check(CLI::PositiveNumber)->capture_default_str();
  eval->add_option("--name", e_name, "System name in the report")->capture_default_str();
  eval->add_option("--max-reasks", e_sys.max_reasks, "Corrective re-asks")->check(CLI::NonNegativeNumber);
  eval->add_flag("--no-fallback", e_no_fallback, "Count unparseable replies as errors");
  eval->add_flag("--penalize-mismatch", e_penalize, "Score gated-out items as 0 instead of excluding them");
  eval->add_flag("--include-text-ground", e_text_ground, "Count text-ground items toward modality accuracy");
  eval->add_option("--max-items", e_max_items, "Stop after routing this many items (0 = all)");
  eval->callback([&] {
    if (!e_config.empty()) apply_config(*eval, e_config);
    need(*eval, {"--corpus", "--out"});
    action = [&]() -> int {
      EvalJob job;
      job.corpus = e_corpus;
      job.system = e_sys;
      job.system.name = e_name;
      job.system.policy = parse_policy(e_policy);
      job.system.fallback_to_text = !e_no_fallback;
      job.parallelism = e_parallel;
      job.cache_dir = e_cache.empty() ? std::filesystem::path(e_out) / "cache" : std::filesystem::path(e_cache);
      if (!e_refs.empty()) job.reference_dir = e_refs;
      job.resume = e_resume;
      job.penalize_mismatch = e_penalize;
      job.include_text_ground = e_text_ground;
      if (e_max_items > 0) job.max_items = e_max_items;
      InterruptScope scope;
      job.cancel = &g_interrupted;
      const EvalOutcome outcome = run_eval(job);
      write_report(outcome, e_out);
      out << dump_json(outcome.report.to_json(), 2) << "\n";
      if (!outcome.report.complete()) {
        err << "mgw: " << outcome.report.completed << "/" << outcome.report.items
            << " items evaluated; rerun with --resume to finish\n";
      }
      return kExitOk;
    };
  });

  // stats
  std::string s_config, s_corpus, s_verbs, s_nouns, s_out;
  auto* stats = app.add_subcommand("stats", "Root verb / noun distribution of a corpus");
  stats->add_option("--config", s_config, "Flat JSON file with option defaults");
  stats->add_option("--corpus", s_corpus, "Corpus, JSON lines (required)");
  stats->add_option("--verbs", s_verbs, "Replace the shipped verb lexicon");
  stats->add_option("--nouns", s_nouns, "Replace the shipped noun lexicon");
  stats->add_option("--out", s_out, "Also write the table to this file");
  stats->callback([&] {
    if (!s_config.empty()) apply_config(*stats, s_config);
    need(*stats, {"--corpus"});
    action = [&]() -> int {
      StatsLexicons lex = StatsLexicons::shipped();
      if (!s_verbs.empty()) {
        lex.verbs.clear();
        for (auto& v : load_lexicon(s_verbs)) lex.verbs.insert(std::move(v));
      }
      if (!s_nouns.empty()) {
        lex.nouns.clear();
        for (auto& n : load_lexicon(s_nouns)) lex.nouns.insert(std::move(n));
      }
      const auto records = read_corpus(s_corpus);
      const std::string body = dump_json(verb_noun_stats(records, lex).to_json(), 2) + "\n";
      if (!s_out.empty()) write_file_atomic(s_out, body);
      out << body;
      return kExitOk;
    };
  });

  // compare
  std::vector<std::string> c_reports;
  bool c_markdown = false;
  auto* compare = app.add_subcommand("compare", "Side-by-side table of evaluation reports");
  compare->add_option("reports", c_reports, "report.json files")->required()->check(CLI::ExistingFile);
  compare->add_flag("--markdown", c_markdown, "Print a Markdown table instead of JSON");
  compare->callback([&] {
    action = [&]() -> int {
      std::vector<ojson> docs;
      for (const auto& p : c_reports) {
        auto j = ojson::parse(read_file(p), nullptr, false);
        if (j.is_discarded()) fail(ErrorCode::kSchemaMismatch, p + " is not JSON");
        docs.push_back(std::move(j));
      }
      const Comparison cmp = compare_systems(docs);
      out << (c_markdown ? cmp.to_markdown() : dump_json(cmp.to_json(), 2) + "\n");
      return kExitOk;
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const Error& e) {
    err << "mgw: " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidArgument ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    err << "mgw: " << e.what() << "\n";
    return kExitRuntime;
  }
  if (!action) return kExitUsage;
  try {
    return action();
  } catch (const Error& e) {
    err << "mgw: " << e.what() << "\n";
    return e.code() == ErrorCode::kInvalidArgument ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    err << "mgw: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace mgw
