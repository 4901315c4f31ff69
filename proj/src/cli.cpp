// Copyright 2026 The xalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xalign/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "xalign/clients.hpp"
#include "xalign/error.hpp"
#include "xalign/eval.hpp"
#include "xalign/hash.hpp"
#include "xalign/instructgen.hpp"

namespace xalign {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

// ---- config parsing --------------------------------------------------------

fs::path existing_path(const json& doc, const char* key, const fs::path& base) {
  if (!doc.at(key).is_string()) throw ConfigError(std::string("\"") + key + "\" must be a path");
  fs::path p = doc.at(key).get<std::string>();
  if (p.is_relative()) p = base / p;
  if (!fs::exists(p)) {
    throw ConfigError(std::string("\"") + key + "\": file not found: " + p.string());
  }
  return p;
}

SimilarityConfig parse_similarity(const json& j) {
  static const std::set<std::string> kKeys{"method", "weights", "binary_bow"};
  SimilarityConfig c;
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw ConfigError("unknown similarity key \"" + key + "\"");
  }
  if (j.contains("method")) c.method = parse_method(j.at("method").get<std::string>());
  if (j.contains("weights")) {
    c.ensemble_weights.clear();
    for (const auto& [name, w] : j.at("weights").items()) {
      c.ensemble_weights[parse_method(name)] = w.get<double>();
    }
  }
  c.binary_bow = j.value("binary_bow", false);
  c.validate();
  return c;
}

ClientSpec parse_client(const json& j, const fs::path& base, const char* what) {
  ClientSpec spec;
  spec.type = j.at("type").get<std::string>();
  if (spec.type == "mock" || spec.type == "fixture") {
    spec.path = existing_path(j, "path", base);
  } else if (spec.type == "http") {
    spec.url = j.at("url").get<std::string>();
    HttpEndpoint::parse(spec.url);
  } else if (spec.type != "identity") {
    throw ConfigError(std::string("unknown ") + what + " client type \"" + spec.type + "\"");
  }
  spec.timeout = j.value("timeout", 60.0);
  return spec;
}

std::optional<ClientSpec> client_from_env(const char* var) {
  const char* url = std::getenv(var);
  if (url == nullptr || *url == '\0') return std::nullopt;
  ClientSpec spec;
  spec.type = "http";
  spec.url = url;
  return spec;
}

std::unique_ptr<ScoringClient> make_scorer(const ClientSpec& spec) {
  if (spec.type == "mock") return std::make_unique<MockScoringClient>(MockScoringClient::load(spec.path));
  if (spec.type == "fixture") {
    return std::make_unique<FixtureScoringClient>(FixtureScoringClient::load(spec.path));
  }
  if (spec.type == "http") return std::make_unique<HttpScoringClient>(spec.url, spec.timeout);
  throw ConfigError("scorer type \"" + spec.type + "\" cannot score");
}

std::unique_ptr<MtClient> make_mt(const ClientSpec& spec) {
  if (spec.type == "identity") return std::make_unique<IdentityMtClient>();
  if (spec.type == "fixture") return std::make_unique<FixtureMtClient>(FixtureMtClient::load(spec.path));
  if (spec.type == "http") return std::make_unique<HttpMtClient>(spec.url, spec.timeout);
  throw ConfigError("MT client type \"" + spec.type + "\" cannot translate");
}

// ---- shared plumbing -------------------------------------------------------

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<std::string> read_jsonl_lines(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> lines;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!json::accept(line)) throw ParseError(path.string(), number, "invalid JSON");
    lines.push_back(line);
  }
  return lines;
}

struct LoadedRun {
  RunConfig config;
  LabelRegistry registry;
  LabeledDataset queries;
  LabeledDataset d_src;
  std::vector<ParallelPair> d_para;
  std::unique_ptr<EmbeddingProvider> embeddings;
  std::unique_ptr<MtClient> mt_inner;
  std::unique_ptr<MtClient> mt;
  TaskConfig task;

  TaskResources resources(ScoringClient* client) const {
    TaskResources r;
    r.registry = &registry;
    r.d_src = config.d_src ? &d_src : nullptr;
    r.d_para = d_para;
    r.embeddings = embeddings.get();
    r.client = client;
    r.mt = mt.get();
    return r;
  }
};

std::unique_ptr<LoadedRun> load_run(const fs::path& config_path) {
  auto run = std::make_unique<LoadedRun>();
  run->config = load_run_config(config_path);
  const auto& c = run->config;
  run->registry = LabelRegistry::load(c.label_sets);
  run->queries = load_labeled(c.queries, format_from_path(c.queries), &run->registry, c.task);
  if (c.d_src) run->d_src = load_labeled(*c.d_src, format_from_path(*c.d_src), &run->registry, c.task);
  if (c.d_para) run->d_para = load_parallel(*c.d_para, format_from_path(*c.d_para));
  if (c.embeddings) {
    run->embeddings = std::make_unique<FileEmbeddingProvider>(FileEmbeddingProvider::load(*c.embeddings));
  } else if (c.embeddings_url) {
    run->embeddings = std::make_unique<HttpEmbeddingProvider>(*c.embeddings_url);
  }
  if (c.mt) {
    run->mt_inner = make_mt(*c.mt);
    run->mt = std::make_unique<MemoizingMtClient>(*run->mt_inner);
  }

  auto& t = run->task;
  t.task = c.task;
  t.template_kind = c.template_kind;
  t.templates = c.templates;
  if (c.strategy) t.strategy = RetrievalStrategy{*c.strategy, c.similarity, c.k, c.seed};
  t.alignment_mode = c.alignment_mode;
  t.label_mode = c.label_mode;
  t.alignment_k = c.alignment_k;
  t.alignment_similarity = c.alignment_similarity;
  t.select.length_normalize = c.length_norm;
  t.max_inflight = c.max_inflight;
  t.source_lang = c.source_lang;
  validate_task(t, run->resources(nullptr));
  return run;
}

std::string protocol_hash(const RunConfig& c) {
  ordered_json p;
  p["task"] = c.task;
  p["template_kind"] = to_string(c.template_kind);
  p["templates"] = c.templates;
  p["queries_sha256"] = sha256_file(c.queries);
  return sha256_hex(p.dump());
}

// ---- commands --------------------------------------------------------------

struct GenInstructArgs {
  std::string parallel;
  std::string objectives = "tlm,mt,xss,mlm";
  std::uint64_t seed = 0;
  std::string out;
  std::optional<std::size_t> fixed_template;
  double mask_ratio = 0.15;
  std::string mask_token = "<mask>";
  std::size_t tlm_repeats = 1;
};

int cmd_gen_instruct(const GenInstructArgs& a, std::ostream& out) {
  GenerateOptions options;
  options.objectives = parse_objectives(a.objectives);
  options.fixed_template = a.fixed_template;
  options.seed = a.seed;
  options.mask_ratio = a.mask_ratio;
  options.mask_token = a.mask_token;
  options.tlm_repeats = a.tlm_repeats;
  const auto pairs = load_parallel(a.parallel, format_from_path(a.parallel));
  const auto samples = generate_dataset(pairs, options);
  std::ostringstream buffer;
  write_instruct_jsonl(buffer, samples);
  write_file(a.out, buffer.str());
  std::map<Objective, std::size_t> counts;
  for (const auto& s : samples) ++counts[s.objective];
  out << "generated " << samples.size() << " samples\n";
  for (const auto& [objective, n] : counts) out << "  " << to_string(objective) << ": " << n << '\n';
  return kExitOk;
}

struct PlanReplayArgs {
  std::string old_path;
  std::string new_path;
  std::size_t r = 0;
  std::size_t batch_size = 0;
  std::uint64_t seed = 0;
  std::size_t epochs = 1;
  bool no_replay = false;
  std::string out;
};

int cmd_plan_replay(const PlanReplayArgs& a, std::ostream& out) {
  const auto fresh = read_jsonl_lines(a.new_path);
  std::vector<std::string> old;
  if (!a.no_replay) {
    if (a.old_path.empty()) throw ConfigError("--old is required unless --no-replay is given");
    old = read_jsonl_lines(a.old_path);
  }
  const auto batches =
      interleave_replay(old.size(), fresh.size(), {a.r, a.seed}, a.batch_size, a.epochs,
                        a.no_replay ? ReplayMode::none : ReplayMode::replay);
  std::ostringstream buffer;
  for (std::size_t b = 0; b < batches.size(); ++b) {
    ordered_json line;
    line["batch"] = b;
    line["epoch"] = batches[b].epoch;
    auto items = ordered_json::array();
    for (const auto& item : batches[b].items) {
      ordered_json entry;
      entry["source"] = item.from_old ? "old" : "new";
      entry["index"] = item.index;
      entry["record"] = ordered_json::parse(item.from_old ? old[item.index] : fresh[item.index]);
      items.push_back(std::move(entry));
    }
    line["items"] = std::move(items);
    buffer << line.dump() << '\n';
  }
  write_file(a.out, buffer.str());
  out << "planned " << batches.size() << " batches\n";
  return kExitOk;
}

int cmd_retrieve(const std::string& config_path, const std::string& out_path, std::ostream& out) {
  auto run = load_run(config_path);
  const auto& t = run->task;
  std::unique_ptr<ExemplarRetriever> retriever;
  if (t.strategy) {
    retriever = std::make_unique<ExemplarRetriever>(run->d_src, *t.strategy, run->embeddings.get(),
                                                    run->d_para, run->mt.get());
  }
  std::unique_ptr<AlignmentRetriever> aligner;
  if (t.alignment_mode == AlignmentMode::query) {
    aligner = std::make_unique<AlignmentRetriever>(run->d_para, t.alignment_k,
                                                   t.alignment_similarity, run->embeddings.get());
  }
  std::ostringstream buffer;
  for (const auto& q : run->queries) {
    ordered_json line;
    line["query_id"] = q.id;
    auto exemplars = ordered_json::array();
    if (retriever) {
      const auto result = retriever->retrieve(q);
      for (std::size_t i = 0; i < result.exemplars.size(); ++i) {
        ordered_json e;
        e["id"] = result.exemplars.exemplars[i].id;
        e["rank"] = result.exemplars.provenance[i].rank;
        e["score"] = result.exemplars.provenance[i].score;
        exemplars.push_back(std::move(e));
      }
      if (result.translated_query) line["translated_query"] = *result.translated_query;
      if (result.bridge_pair_id) line["bridge_pair_id"] = *result.bridge_pair_id;
    }
    line["exemplars"] = std::move(exemplars);
    if (aligner) {
      const auto pairs = aligner->retrieve(q);
      auto list = ordered_json::array();
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        ordered_json p;
        p["id"] = pairs.pairs[i].id;
        p["score"] = pairs.scores[i];
        list.push_back(std::move(p));
      }
      line["alignment_pairs"] = std::move(list);
    }
    buffer << line.dump() << '\n';
  }
  if (out_path.empty()) {
    out << buffer.str();
  } else {
    write_file(out_path, buffer.str());
  }
  return kExitOk;
}

struct EvaluateArgs {
  std::string config;
  bool dry_run = false;
  std::string record_scores;
  std::string out;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  auto run = load_run(a.config);
  const auto& c = run->config;
  auto scorer_spec = c.scorer ? c.scorer : client_from_env(kScorerUrlEnv);
  if (!scorer_spec) {
    throw ConfigError("no scorer configured (set \"scorer\" or " + std::string(kScorerUrlEnv) + ")");
  }
  auto scorer = make_scorer(*scorer_spec);

  if (a.dry_run) {
    const auto dry = run_task(run->queries, run->task, run->resources(scorer.get()), true);
    if (dry.first_prompt) out << dry.first_prompt->prefix() << '\n';
    return kExitOk;
  }

  std::unique_ptr<RecordingScoringClient> recorder;
  ScoringClient* client = scorer.get();
  if (!a.record_scores.empty()) {
    recorder = std::make_unique<RecordingScoringClient>(*scorer);
    client = recorder.get();
  }
  const auto result = run_task(run->queries, run->task, run->resources(client));
  auto report = aggregate(c.task, result.per_template, result.excluded);
  report.config_hash = c.config_hash;
  report.protocol_hash = protocol_hash(c);
  const std::string text = to_json(report).dump(2) + "\n";

  const fs::path out_path = !a.out.empty() ? fs::path(a.out) : c.output.value_or(fs::path{});
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
    out << std::fixed << std::setprecision(4) << "accuracy " << report.averaged.accuracy
        << ", weighted F1 " << report.averaged.weighted_f1 << " over "
        << report.averaged.n << " queries x " << report.per_template.size() << " templates ("
        << report.excluded << " excluded)\n";
  }
  if (recorder) {
    std::ostringstream fixture;
    recorder->write(fixture);
    write_file(a.record_scores, fixture.str());
  }
  return kExitOk;
}

struct AlignQualityArgs {
  std::string lexicon;
  std::string embeddings;
  std::size_t k = 10;
  bool multi_sense = false;
  std::string out;
};

int cmd_align_quality(const AlignQualityArgs& a, std::ostream& out) {
  const auto lexicon =
      load_lexicon(a.lexicon, a.multi_sense ? LexiconMode::multi_sense : LexiconMode::single_sense);
  const auto provider = FileEmbeddingProvider::load(a.embeddings);
  const auto report = word_retrieval_accuracy(lexicon, provider, a.k);
  if (!a.out.empty()) write_file(a.out, to_json(report).dump(2) + "\n");
  out << std::fixed << std::setprecision(4) << "accuracy@" << report.k << " = "
      << report.accuracy_at_k << " (" << report.hits << "/" << report.n_words << " words, "
      << report.n_missing << " missing)\n";
  return kExitOk;
}

int cmd_report(const std::string& baseline, const std::string& treatment, const std::string& out_path,
               std::ostream& out) {
  auto read_report = [](const std::string& path) {
    try {
      return report_from_json(json::parse(read_file(path)));
    } catch (const json::exception& e) {
      throw ParseError(path, 1, e.what());
    }
  };
  const auto delta = delta_report(read_report(baseline), read_report(treatment));
  const std::string text = to_json(delta).dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
  }
  return kExitOk;
}

}  // namespace

RunConfig parse_run_config(const json& doc, const fs::path& base_dir) {
  static const std::set<std::string> kKeys{
      "task", "template_kind", "templates", "queries", "d_src", "d_para", "label_sets",
      "embeddings", "embeddings_url", "strategy", "k", "seed", "similarity", "alignment_mode",
      "alignment_k", "alignment_similarity", "label_language_mode", "source_lang", "scorer", "mt",
      "max_inflight", "length_norm", "output"};
  if (!doc.is_object()) throw ConfigError("run config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kKeys.count(key)) throw ConfigError("unknown config key \"" + key + "\"");
  }
  RunConfig c;
  try {
    c.task = doc.at("task").get<std::string>();
    c.template_kind = parse_task_kind(doc.value("template_kind", c.task));
    if (doc.contains("templates")) c.templates = doc.at("templates").get<std::vector<std::size_t>>();
    c.queries = existing_path(doc, "queries", base_dir);
    if (doc.contains("d_src")) c.d_src = existing_path(doc, "d_src", base_dir);
    if (doc.contains("d_para")) c.d_para = existing_path(doc, "d_para", base_dir);
    c.label_sets = existing_path(doc, "label_sets", base_dir);
    if (doc.contains("embeddings")) c.embeddings = existing_path(doc, "embeddings", base_dir);
    if (doc.contains("embeddings_url")) {
      c.embeddings_url = doc.at("embeddings_url").get<std::string>();
    } else if (const char* url = std::getenv(kEmbedUrlEnv); url != nullptr && *url != '\0' &&
                                                              !c.embeddings) {
      c.embeddings_url = url;
    }
    const std::string strategy = doc.value("strategy", "zero_shot");
    c.k = doc.value("k", std::size_t{3});
    if (strategy != "zero_shot" && c.k > 0) c.strategy = parse_strategy_kind(strategy);
    if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("similarity")) c.similarity = parse_similarity(doc.at("similarity"));
    c.alignment_mode = parse_alignment_mode(doc.value("alignment_mode", "none"));
    c.alignment_k = doc.value("alignment_k", std::size_t{3});
    c.alignment_similarity = doc.contains("alignment_similarity")
                                 ? parse_similarity(doc.at("alignment_similarity"))
                                 : c.similarity;
    c.label_mode = parse_label_language_mode(doc.value("label_language_mode", "source_only"));
    if (doc.contains("source_lang")) {
      try {
        c.source_lang = LanguageTag(doc.at("source_lang").get<std::string>());
      } catch (const ValidationError& e) {
        throw ConfigError(e.what());
      }
    }
    if (doc.contains("scorer")) c.scorer = parse_client(doc.at("scorer"), base_dir, "scorer");
    if (doc.contains("mt")) {
      c.mt = parse_client(doc.at("mt"), base_dir, "MT");
    } else {
      c.mt = client_from_env(kMtUrlEnv);
    }
    c.max_inflight = doc.value("max_inflight", std::size_t{8});
    c.length_norm = doc.value("length_norm", false);
    if (doc.contains("output")) {
      fs::path p = doc.at("output").get<std::string>();
      c.output = p.is_relative() ? base_dir / p : p;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid run config: ") + e.what());
  }
  if (c.strategy == StrategyKind::random && !c.seed) {
    throw ConfigError("strategy random requires \"seed\"");
  }
  if (c.strategy && !c.d_src) throw ConfigError("retrieval strategies need \"d_src\"");
  if (c.alignment_mode == AlignmentMode::query && !c.d_para) {
    throw ConfigError("alignment_mode query needs \"d_para\"");
  }
  if (c.strategy == StrategyKind::translation && !c.d_para) {
    throw ConfigError("strategy translation needs \"d_para\"");
  }
  if (c.strategy == StrategyKind::translate_test && !c.mt) {
    throw ConfigError("strategy translate_test needs an \"mt\" client or " +
                      std::string(kMtUrlEnv));
  }
  auto hashed = doc;
  hashed.erase("output");
  c.config_hash = sha256_hex(hashed.dump());
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  return parse_run_config(doc, path.parent_path());
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-lingual in-context learning and alignment-data toolkit", "xalign"};
  app.require_subcommand(1);
  std::function<int()> action;

  GenInstructArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-instruct", "Generate alignment instruction data");
  gen_cmd->add_option("--parallel", gen.parallel, "Parallel corpus (JSONL or TSV)")
      ->required()
      ->check(CLI::ExistingFile);
  gen_cmd->add_option("--objectives", gen.objectives, "Comma-separated subset of tlm,mt,xss,mlm")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->required();
  gen_cmd->add_option("--out", gen.out, "Output JSONL")->required();
  gen_cmd->add_option("--template", gen.fixed_template, "Use one template index (0-5) for all");
  gen_cmd->add_option("--mask-ratio", gen.mask_ratio, "Masked token fraction")->capture_default_str();
  gen_cmd->add_option("--mask-token", gen.mask_token, "Mask token")->capture_default_str();
  gen_cmd->add_option("--tlm-repeats", gen.tlm_repeats, "TLM samples per pair and direction")
      ->capture_default_str();
  gen_cmd->callback([&] { action = [&] { return cmd_gen_instruct(gen, out); }; });

  PlanReplayArgs replay;
  auto* replay_cmd = app.add_subcommand("plan-replay", "Interleave replayed and new samples into batches");
  replay_cmd->add_option("--old", replay.old_path, "Previous training data (JSONL)")
      ->check(CLI::ExistingFile);
  replay_cmd->add_option("--new", replay.new_path, "New training data (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  replay_cmd->add_option("--r", replay.r, "Number of replayed old samples");
  replay_cmd->add_option("--batch-size", replay.batch_size, "Batch size (even in replay mode)")
      ->required();
  replay_cmd->add_option("--seed", replay.seed, "Random seed")->required();
  replay_cmd->add_option("--epochs", replay.epochs, "Passes over the new data")->capture_default_str();
  replay_cmd->add_flag("--no-replay", replay.no_replay, "Emit batches of new samples only");
  replay_cmd->add_option("--out", replay.out, "Output JSONL, one batch per line")->required();
  replay_cmd->callback([&] { action = [&] { return cmd_plan_replay(replay, out); }; });

  std::string retrieve_config;
  std::string retrieve_out;
  auto* retrieve_cmd = app.add_subcommand("retrieve", "Show retrieved exemplars and alignment pairs");
  retrieve_cmd->add_option("--config", retrieve_config, "Run config (JSON)")->required();
  retrieve_cmd->add_option("--out", retrieve_out, "Output JSONL (default stdout)");
  retrieve_cmd->callback([&] {
    action = [&] { return cmd_retrieve(retrieve_config, retrieve_out, out); };
  });

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand("evaluate", "Run an evaluation and write a metric report");
  eval_cmd->add_option("--config", eval.config, "Run config (JSON)")->required();
  eval_cmd->add_flag("--dry-run", eval.dry_run, "Print the first assembled prompt and exit");
  eval_cmd->add_option("--record-scores", eval.record_scores,
                       "Write every score call as a fixture-client file");
  eval_cmd->add_option("--out", eval.out, "Report path (overrides the config's output)");
  eval_cmd->callback([&] { action = [&] { return cmd_evaluate(eval, out); }; });

  AlignQualityArgs aq;
  auto* aq_cmd = app.add_subcommand("align-quality", "Word-level cross-lingual retrieval accuracy@k");
  aq_cmd->add_option("--lexicon", aq.lexicon, "Bilingual lexicon (TSV)")
      ->required()
      ->check(CLI::ExistingFile);
  aq_cmd->add_option("--embeddings", aq.embeddings, "Word vectors keyed <lang>:<word> (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  aq_cmd->add_option("--k", aq.k, "Cutoff")->capture_default_str();
  aq_cmd->add_flag("--multi-sense", aq.multi_sense, "Allow several translations per word");
  aq_cmd->add_option("--out", aq.out, "Report JSON");
  aq_cmd->callback([&] { action = [&] { return cmd_align_quality(aq, out); }; });

  std::string baseline;
  std::string treatment;
  std::string report_out;
  auto* report_cmd = app.add_subcommand("report", "Per-language weighted-F1 delta between two reports");
  report_cmd->add_option("--baseline", baseline, "Baseline report")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--treatment", treatment, "Treatment report")
      ->required()
      ->check(CLI::ExistingFile);
  report_cmd->add_option("--out", report_out, "Delta JSON (default stdout)");
  report_cmd->callback([&] {
    action = [&] { return cmd_report(baseline, treatment, report_out, out); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action();
  } catch (const ConfigError& e) {
    err << "xalign: " << e.what() << "\nRun with --help for more information.\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "xalign: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace xalign
