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

#include "mgw/eval/harness.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <mutex>
#include <thread>

#include "mgw/metrics/bleu.hpp"
#include "mgw/util/digest.hpp"
#include "mgw/util/error.hpp"
#include "mgw/util/files.hpp"
#include "mgw/util/text.hpp"

namespace mgw {
namespace {

using ojson = nlohmann::ordered_json;

ojson opt_json(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::optional<double> opt_double(const ojson& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

// Fills the metric fields of a routed item.
void score_item(ItemResult& item, const InstructionRecord& record, ScorerBackend* scorer) {
  item.has_qa = record.qa.has_value();
  if (!item.predicted) return;
  item.gated = eligibility_gate(item.ground, *item.predicted);
  if (!item.gated) {
    item.notes.push_back("gated out: predicted " + std::string(to_string(*item.predicted)));
    return;
  }
  const std::string& reference = record.output.response();
  switch (item.ground) {
    case Modality::kText:
      if (!record.qa) {
        item.notes.push_back("qa: record has no choices");
      } else if (!item.text) {
        item.notes.push_back("qa: no text response");
      } else {
        try {
          const auto verdict = qa_score(*record.qa, *item.text);
          item.qa_correct = verdict.correct;
          item.qa_chosen = verdict.chosen;
        } catch (const Error& e) {
          item.notes.push_back(std::string("qa: ") + e.what());
        }
      }
      break;
    case Modality::kImage:
      if (!item.artifact) {
        item.notes.push_back("clip: no image artifact");
      } else if (!scorer) {
        item.notes.push_back("clip: no scorer backend");
      } else {
        try {
          item.clip = score_clip(*scorer, *item.artifact, reference);
        } catch (const Error& e) {
          item.notes.push_back(std::string("clip: ") + e.what());
        }
      }
      break;
    case Modality::kSpeech: {
      const auto& parsed = item.trace.parse_outcome.result;
      if (!parsed) {
        item.notes.push_back("bleu: no parsed response");
        break;
      }
      try {
        item.bleu = bleu(parsed->response(), reference);
      } catch (const Error& e) {
        item.notes.push_back(std::string("bleu: ") + e.what());
      }
      break;
    }
  }
}

ItemResult evaluate_one(const InstructionRecord& record, const std::string& id,
                        const BackendSet& backends, const RouteOptions& options) {
  ItemResult item;
  item.record_id = id;
  item.ground = record.output.modality();
  const auto t0 = std::chrono::steady_clock::now();
  try {
    RoutedResult routed = route(record.instruction, ConversationHistory{}, backends, options);
    item.predicted = routed.modality;
    item.text = std::move(routed.text);
    item.artifact = std::move(routed.artifact);
    item.trace = std::move(routed.trace);
  } catch (const RouteError& e) {
    item.trace = e.trace();
    item.error = e.what();
    if (item.trace.parse_outcome.result) item.predicted = item.trace.parse_outcome.result->modality();
  } catch (const std::exception& e) {
    item.error = e.what();
  }
  score_item(item, record, backends.scorer.get());
  item.wall_millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return item;
}

MetricSlot fid_for(const std::vector<ItemResult>& items,
                   const std::vector<const InstructionRecord*>& records, const EvalJob& job,
                   ScorerBackend* scorer) {
  if (!scorer) return {std::nullopt, "no scorer backend"};
  if (!job.reference_dir) return {std::nullopt, "no reference image store"};
  std::vector<FidPair> pairs;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    if (it.ground == Modality::kImage && it.gated && it.artifact && records[i]->image_id) {
      pairs.push_back({*it.artifact, *records[i]->image_id});
    }
  }
  if (pairs.empty()) return {std::nullopt, "no gated image items with an image_id"};

  std::string material = job.system.digest();
  for (const auto& p : pairs) material += "|" + p.generated.content_hash + ":" + p.reference_image_id;
  const std::string key = sha256_hex(material).substr(0, 16);
  std::optional<std::filesystem::path> cache_file;
  if (job.cache_dir) {
    cache_file = *job.cache_dir / ("fid-" + key + ".json");
    if (std::filesystem::exists(*cache_file)) {
      const auto j = ojson::parse(read_file(*cache_file), nullptr, false);
      if (!j.is_discarded() && j.contains("fid")) return MetricSlot::from_json(j["fid"]);
    }
  }
  MetricSlot slot;
  try {
    DirectoryReferenceStore refs(*job.reference_dir);
    const FidHandle handle = collect_fid_pair(*scorer, refs, pairs);
    const FidStatus st = await_fid(*scorer, handle);
    if (st.status == "done" && st.fid) {
      slot.value = st.fid;
    } else {
      slot.absent_reason = "fid job " + handle.job_id + " ended with status " + st.status;
    }
  } catch (const Error& e) {
    slot.absent_reason = e.what();
  }
  if (cache_file && slot.value) {
    ojson j;
    j["fid"] = slot.to_json();
    write_file_atomic(*cache_file, dump_json(j, 2) + "\n");
  }
  return slot;
}

}  // namespace

std::string SystemConfig::digest() const {
  ojson j = to_json();
  j.erase("name");
  return sha256_hex(dump_json(j)).substr(0, 16);
}

RouteOptions SystemConfig::route_options() const {
  RouteOptions o;
  o.policy = policy;
  o.fallback_to_text = fallback_to_text;
  o.max_reasks = max_reasks;
  o.temperature = temperature;
  o.max_new_tokens = max_new_tokens;
  return o;
}

ojson SystemConfig::to_json() const {
  ojson j;
  j["name"] = name;
  j["policy"] = std::string(to_string(policy));
  j["llm"] = llm;
  j["image"] = image;
  j["speech"] = speech;
  j["scorer"] = scorer;
  j["fallback_to_text"] = fallback_to_text;
  j["max_reasks"] = max_reasks;
  j["temperature"] = temperature;
  j["max_new_tokens"] = max_new_tokens;
  return j;
}

SystemConfig SystemConfig::from_json(const ojson& j) {
  SystemConfig s;
  s.name = j.value("name", s.name);
  s.policy = parse_policy(j.value("policy", std::string(to_string(s.policy))));
  s.llm = j.value("llm", s.llm);
  s.image = j.value("image", s.image);
  s.speech = j.value("speech", s.speech);
  s.scorer = j.value("scorer", s.scorer);
  s.fallback_to_text = j.value("fallback_to_text", s.fallback_to_text);
  s.max_reasks = j.value("max_reasks", s.max_reasks);
  s.temperature = j.value("temperature", s.temperature);
  s.max_new_tokens = j.value("max_new_tokens", s.max_new_tokens);
  return s;
}

ojson EvalJob::to_json() const {
  ojson j;
  j["corpus"] = corpus.string();
  j["system"] = system.to_json();
  j["parallelism"] = parallelism;
  j["cache_dir"] = cache_dir ? ojson(cache_dir->string()) : ojson(nullptr);
  j["reference_dir"] = reference_dir ? ojson(reference_dir->string()) : ojson(nullptr);
  j["rng_seed"] = rng_seed;
  j["resume"] = resume;
  j["penalize_mismatch"] = penalize_mismatch;
  j["include_text_ground"] = include_text_ground;
  return j;
}

EvalJob EvalJob::from_json(const ojson& j) {
  require(j.is_object(), "eval job must be a JSON object");
  require(j.contains("corpus") && j["corpus"].is_string(), "eval job needs a string \"corpus\"");
  EvalJob job;
  job.corpus = j["corpus"].get<std::string>();
  if (j.contains("system")) job.system = SystemConfig::from_json(j["system"]);
  job.parallelism = j.value("parallelism", job.parallelism);
  if (j.contains("cache_dir") && j["cache_dir"].is_string()) job.cache_dir = j["cache_dir"].get<std::string>();
  if (j.contains("reference_dir") && j["reference_dir"].is_string()) {
    job.reference_dir = j["reference_dir"].get<std::string>();
  }
  job.rng_seed = j.value("rng_seed", job.rng_seed);
  job.resume = j.value("resume", job.resume);
  job.penalize_mismatch = j.value("penalize_mismatch", job.penalize_mismatch);
  job.include_text_ground = j.value("include_text_ground", job.include_text_ground);
  return job;
}

ojson ItemResult::to_json(bool include_timing, bool include_bytes) const {
  ojson j;
  j["record_id"] = record_id;
  j["ground"] = std::string(to_string(ground));
  j["predicted"] = predicted ? ojson(std::string(to_string(*predicted))) : ojson(nullptr);
  j["gated"] = gated;
  j["has_qa"] = has_qa;
  j["text"] = text ? ojson(*text) : ojson(nullptr);
  j["artifact"] = artifact ? artifact->to_json(include_bytes) : ojson(nullptr);
  j["clip"] = opt_json(clip);
  j["bleu"] = opt_json(bleu);
  j["qa_correct"] = qa_correct ? ojson(*qa_correct) : ojson(nullptr);
  j["qa_chosen"] = qa_chosen ? ojson(*qa_chosen) : ojson(nullptr);
  j["error"] = error ? ojson(*error) : ojson(nullptr);
  j["notes"] = notes;
  j["trace"] = trace.to_json(include_timing);
  if (include_timing) j["wall_millis"] = wall_millis;
  return j;
}

ItemResult ItemResult::from_json(const ojson& j) {
  ItemResult r;
  r.record_id = j.at("record_id").get<std::string>();
  r.ground = canonicalize_modality(j.at("ground").get<std::string>());
  if (j.at("predicted").is_string()) r.predicted = canonicalize_modality(j["predicted"].get<std::string>());
  r.gated = j.at("gated").get<bool>();
  r.has_qa = j.value("has_qa", false);
  if (j.at("text").is_string()) r.text = j["text"].get<std::string>();
  if (j.at("artifact").is_object()) r.artifact = MediaArtifact::from_json(j["artifact"]);
  r.clip = opt_double(j, "clip");
  r.bleu = opt_double(j, "bleu");
  if (j.at("qa_correct").is_boolean()) r.qa_correct = j["qa_correct"].get<bool>();
  if (j.at("qa_chosen").is_number()) r.qa_chosen = j["qa_chosen"].get<std::size_t>();
  if (j.at("error").is_string()) r.error = j["error"].get<std::string>();
  r.notes = j.value("notes", std::vector<std::string>{});
  r.trace = RouteTrace::from_json(j.at("trace"));
  r.wall_millis = j.value("wall_millis", 0.0);
  return r;
}

ojson MetricSlot::to_json() const {
  ojson j;
  j["value"] = opt_json(value);
  j["absent_reason"] = value ? ojson(nullptr) : ojson(absent_reason);
  return j;
}

MetricSlot MetricSlot::from_json(const ojson& j) {
  MetricSlot m;
  m.value = opt_double(j, "value");
  if (!m.value) m.absent_reason = j.at("absent_reason").get<std::string>();
  return m;
}

ojson EvalReport::to_json() const {
  ojson j;
  j["schema"] = std::string(kReportSchema);
  j["system"] = system;
  j["config_digest"] = config_digest;
  j["policy"] = policy;
  j["items"] = items;
  j["completed"] = completed;
  j["modality_accuracy"] = modality_accuracy.to_json();
  j["confusion"] = confusion.to_json();
  j["clip_mean"] = clip_mean.to_json();
  j["clip_missing"] = clip_missing;
  j["fid"] = fid.to_json();
  j["qa_accuracy"] = qa_accuracy.to_json();
  j["speech_bleu"] = speech_bleu.to_json();
  j["parse_fallbacks"] = parse_fallbacks;
  j["backend_errors"] = backend_errors;
  j["llm_calls"] = llm_calls;
  j["penalize_mismatch"] = penalize_mismatch;
  j["include_text_ground"] = include_text_ground;
  return j;
}

EvalReport EvalReport::from_json(const ojson& j) {
  if (!j.is_object() || j.value("schema", "") != kReportSchema) {
    fail(ErrorCode::kSchemaMismatch, "not an evaluation report (expected schema " +
                                         std::string(kReportSchema) + ")");
  }
  try {
    EvalReport r;
    r.system = j.at("system").get<std::string>();
    r.config_digest = j.at("config_digest").get<std::string>();
    r.policy = j.at("policy").get<std::string>();
    r.items = j.at("items").get<std::size_t>();
    r.completed = j.at("completed").get<std::size_t>();
    r.modality_accuracy = MetricSlot::from_json(j.at("modality_accuracy"));
    r.confusion = ModalityConfusion::from_json(j.at("confusion"));
    r.clip_mean = MetricSlot::from_json(j.at("clip_mean"));
    r.clip_missing = j.at("clip_missing").get<std::size_t>();
    r.fid = MetricSlot::from_json(j.at("fid"));
    r.qa_accuracy = MetricSlot::from_json(j.at("qa_accuracy"));
    r.speech_bleu = MetricSlot::from_json(j.at("speech_bleu"));
    r.parse_fallbacks = j.at("parse_fallbacks").get<std::size_t>();
    r.backend_errors = j.at("backend_errors").get<std::size_t>();
    r.llm_calls = j.at("llm_calls").get<std::size_t>();
    r.penalize_mismatch = j.at("penalize_mismatch").get<bool>();
    r.include_text_ground = j.at("include_text_ground").get<bool>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kSchemaMismatch, std::string("malformed evaluation report: ") + e.what());
  }
}

EvalReport compute_report(std::vector<ItemResult> items, std::size_t corpus_size,
                          const SystemConfig& system, bool penalize_mismatch,
                          bool include_text_ground, const MetricSlot& fid) {
  std::sort(items.begin(), items.end(),
            [](const ItemResult& a, const ItemResult& b) { return a.record_id < b.record_id; });
  EvalReport r;
  r.system = system.name;
  r.config_digest = system.digest();
  r.policy = std::string(to_string(system.policy));
  r.items = corpus_size;
  r.completed = items.size();
  r.penalize_mismatch = penalize_mismatch;
  r.include_text_ground = include_text_ground;
  r.fid = fid;

  std::vector<ModalityPrediction> predictions;
  std::vector<std::optional<double>> clips;
  std::vector<GatedScore> clip_scores, bleu_scores, qa_scores;
  std::size_t eligible_unpredicted = 0;
  for (const auto& it : items) {
    r.llm_calls += static_cast<std::size_t>(it.trace.llm_calls);
    if (it.fell_back_to_text()) ++r.parse_fallbacks;
    if (it.error) ++r.backend_errors;
    if (!it.predicted) {
      // Routing failed before a modality was chosen: counts as a miss.
      if (include_text_ground || it.ground != Modality::kText) ++eligible_unpredicted;
      continue;
    }
    predictions.push_back({it.ground, *it.predicted});
    switch (it.ground) {
      case Modality::kImage:
        clip_scores.push_back({it.ground, *it.predicted, it.clip});
        if (it.gated) clips.push_back(it.clip);
        break;
      case Modality::kSpeech:
        bleu_scores.push_back({it.ground, *it.predicted, it.bleu});
        break;
      case Modality::kText:
        if (it.has_qa) {
          qa_scores.push_back({it.ground, *it.predicted,
                               it.qa_correct ? std::optional<double>(*it.qa_correct ? 1.0 : 0.0)
                                             : std::nullopt});
        }
        break;
    }
  }

  if (predictions.empty() && eligible_unpredicted == 0) {
    r.modality_accuracy.absent_reason = "no routed items";
  } else {
    std::size_t correct = 0, total = eligible_unpredicted;
    if (!predictions.empty()) {
      try {
        const auto acc = modality_accuracy(predictions, include_text_ground);
        r.confusion = acc.confusion;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kEmptyEligibleSet) throw;
        for (const auto& p : predictions) {
          ++r.confusion.counts[index_of(p.ground)][index_of(p.predicted)];
        }
      }
      correct = r.confusion.n_correct;
      total += r.confusion.n_total;
    }
    r.confusion.n_total = total;
    if (total == 0) {
      r.modality_accuracy.absent_reason = "no accuracy-eligible items";
    } else {
      r.modality_accuracy.value = static_cast<double>(correct) / static_cast<double>(total);
    }
  }

  auto fill = [&](MetricSlot& slot, const std::vector<GatedScore>& scores, const char* what) {
    slot.value = gated_mean(scores, penalize_mismatch);
    if (!slot.value) slot.absent_reason = std::string("no gated ") + what + " scores";
  };
  fill(r.qa_accuracy, qa_scores, "qa");
  fill(r.speech_bleu, bleu_scores, "speech bleu");
  if (system.scorer.empty()) {
    r.clip_mean.absent_reason = "no scorer backend";
  } else if (penalize_mismatch) {
    fill(r.clip_mean, clip_scores, "clip");
  } else {
    try {
      const auto agg = aggregate_clip(clips);
      r.clip_mean.value = agg.mean;
      r.clip_missing = agg.missing;
    } catch (const Error& e) {
      r.clip_missing = clips.size();
      r.clip_mean.absent_reason = clips.empty() ? "no gated clip scores" : e.what();
    }
  }
  return r;
}

EvalOutcome run_eval(const EvalJob& job, std::shared_ptr<CallLog> log) {
  const auto records = read_corpus(job.corpus, RecordSource::kSampledBenchmark);
  BackendOptions opts;
  opts.log = std::move(log);
  opts.oracle_replies = oracle_replies_for(records);
  BackendSet backends;
  backends.llm = make_chat_backend(job.system.llm, opts);
  if (!job.system.image.empty()) backends.image = make_image_backend(job.system.image, opts);
  if (!job.system.speech.empty()) backends.speech = make_speech_backend(job.system.speech, opts);
  if (!job.system.scorer.empty()) backends.scorer = make_scorer_backend(job.system.scorer, opts);
  return run_eval(job, backends);
}

EvalOutcome run_eval(const EvalJob& job, const BackendSet& backends) {
  require(job.parallelism >= 1, "parallelism must be >= 1");
  const auto records = read_corpus(job.corpus, RecordSource::kSampledBenchmark);
  require(!records.empty(), "corpus " + job.corpus.string() + " is empty");

  // Record-id order fixes every downstream sum.
  std::vector<std::pair<std::string, const InstructionRecord*>> order;
  for (const auto& r : records) order.emplace_back(record_id(r), &r);
  std::sort(order.begin(), order.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (order[i].first == order[i - 1].first) {
      fail(ErrorCode::kInvalidArgument, "duplicate record id '" + order[i].first + "' in " +
                                            job.corpus.string());
    }
  }

  const std::string digest = job.system.digest();
  if (job.cache_dir) std::filesystem::create_directories(*job.cache_dir);
  auto cache_path = [&](const std::string& id) {
    return *job.cache_dir / (id + "-" + digest + ".json");
  };

  std::vector<std::optional<ItemResult>> results(order.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (job.resume && job.cache_dir && std::filesystem::exists(cache_path(order[i].first))) {
      const auto j = ojson::parse(read_file(cache_path(order[i].first)), nullptr, false);
      if (!j.is_discarded()) {
        try {
          results[i] = ItemResult::from_json(j);
          continue;
        } catch (const std::exception&) {
          // unreadable cache entry: run it again
        }
      }
    }
    pending.push_back(i);
  }

  const RouteOptions options = job.system.route_options();
  std::mutex cache_mu;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> started{0};
  auto worker = [&] {
    for (;;) {
      if (job.cancel && job.cancel->load()) return;
      if (job.max_items && started.fetch_add(1) >= *job.max_items) return;
      const std::size_t k = next++;
      if (k >= pending.size()) return;
      const std::size_t i = pending[k];
      ItemResult item = evaluate_one(*order[i].second, order[i].first, backends, options);
      if (job.cache_dir) {
        const std::string body = dump_json(item.to_json(true, true)) + "\n";
        std::lock_guard lock(cache_mu);
        write_file_atomic(cache_path(order[i].first), body);
      }
      results[i] = std::move(item);
    }
  };
  const std::size_t threads = std::min(job.parallelism, std::max<std::size_t>(pending.size(), 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  EvalOutcome out;
  std::vector<const InstructionRecord*> done_records;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (!results[i]) continue;
    out.items.push_back(std::move(*results[i]));
    done_records.push_back(order[i].second);
  }
  MetricSlot fid = out.items.size() == order.size()
                       ? fid_for(out.items, done_records, job, backends.scorer.get())
                       : MetricSlot{std::nullopt, "run incomplete"};
  out.report = compute_report(out.items, order.size(), job.system, job.penalize_mismatch,
                              job.include_text_ground, fid);
  return out;
}

}  // namespace mgw
