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

#include "xalign/scoring.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <set>
#include <thread>

#include "xalign/error.hpp"
#include "xalign/hash.hpp"
#include "xalign/text.hpp"

namespace xalign {
namespace {

bool ends_with(std::string_view text, std::string_view suffix) {
  return text.size() >= suffix.size() && text.substr(text.size() - suffix.size()) == suffix;
}

std::optional<LanguageTag> dataset_language(const LabeledDataset* d_src) {
  if (d_src == nullptr) return std::nullopt;
  for (const auto& e : *d_src) {
    if (!e.label.empty()) return e.lang;
  }
  return std::nullopt;
}

// Per-query state shared by all templates.
struct PreparedQuery {
  const LabeledExample* query = nullptr;
  const LabelSet* display = nullptr;
  std::string gold;
  std::string scored_text;
  ExemplarSet exemplars;
  std::string align_block;
};

}  // namespace

Prediction select_label(const std::string& query_id, std::span<const AssembledPrompt> candidates,
                        ScoringClient& client, const SelectOptions& options) {
  if (candidates.empty()) throw ValidationError("query " + query_id + ": no candidate prompts");
  for (const auto& c : candidates) {
    if (!ends_with(c.full_text, c.candidate_label)) {
      throw ValidationError("query " + query_id + ": prompt does not end with its label \"" +
                            c.candidate_label + "\"");
    }
  }
  const std::string prefix(candidates.front().prefix());
  for (const auto& c : candidates) {
    if (c.prefix() != prefix) {
      throw ValidationError("query " + query_id +
                            ": candidate prompts do not share a common prefix");
    }
  }

  Prediction p;
  p.query_id = query_id;
  p.prompt_hash = sha256_hex(prefix);
  for (const auto& c : candidates) {
    double s = client.score(prefix, c.candidate_label);
    if (!std::isfinite(s)) {
      throw ClientError("query " + query_id + ": non-finite score for label \"" +
                        c.candidate_label + "\"");
    }
    if (options.length_normalize) {
      s /= static_cast<double>(std::max<std::size_t>(1, codepoint_count(c.candidate_label)));
    }
    p.per_label_scores.emplace_back(c.candidate_label, s);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.per_label_scores.size(); ++i) {
    const auto& [label, score] = p.per_label_scores[i];
    const auto& [best_label, best_score] = p.per_label_scores[best];
    if (score > best_score || (score == best_score && label < best_label)) best = i;
  }
  p.chosen_index = best;
  p.chosen_label = p.per_label_scores[best].first;
  return p;
}

void parallel_for(std::size_t n, std::size_t max_inflight,
                  const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(std::max<std::size_t>(max_inflight, 1), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work);
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string_view to_string(AlignmentMode mode) {
  switch (mode) {
    case AlignmentMode::none: return "none";
    case AlignmentMode::label: return "label";
    case AlignmentMode::query: return "query";
  }
  return "?";
}

std::string_view to_string(LabelLanguageMode mode) {
  return mode == LabelLanguageMode::source_only ? "source_only" : "target_only";
}

AlignmentMode parse_alignment_mode(std::string_view name) {
  if (name == "none") return AlignmentMode::none;
  if (name == "label") return AlignmentMode::label;
  if (name == "query") return AlignmentMode::query;
  throw ConfigError("unknown alignment mode \"" + std::string(name) + "\"");
}

LabelLanguageMode parse_label_language_mode(std::string_view name) {
  if (name == "source_only") return LabelLanguageMode::source_only;
  if (name == "target_only") return LabelLanguageMode::target_only;
  throw ConfigError("unknown label language mode \"" + std::string(name) + "\"");
}

void validate_task(const TaskConfig& config, const TaskResources& resources) {
  if (resources.registry == nullptr) throw ConfigError("label sets are required");
  if (config.task.empty()) throw ConfigError("task name is required");
  if (!is_classification(config.template_kind)) {
    throw ConfigError("template kind " + std::string(to_string(config.template_kind)) +
                      " is not an evaluation template");
  }
  if (config.templates.empty()) throw ConfigError("at least one template is required");
  for (auto t : config.templates) {
    if (t >= template_count(config.template_kind)) {
      throw ConfigError("template out of range: " + std::string(to_string(config.template_kind)) +
                        " index " + std::to_string(t));
    }
  }
  if (config.max_inflight == 0) throw ConfigError("max_inflight must be ≥ 1");

  const auto src_lang = dataset_language(resources.d_src);
  if (config.strategy) {
    try {
      config.strategy->validate();
    } catch (const ValidationError& e) {
      throw ConfigError(e.what());
    }
    if (!src_lang) throw ConfigError("retrieval needs a labeled exemplar dataset (d_src)");
    if (config.strategy->kind == StrategyKind::translation && resources.d_para.empty()) {
      throw ConfigError("translation retrieval needs a parallel corpus (d_para)");
    }
    if (config.strategy->kind == StrategyKind::translate_test && resources.mt == nullptr) {
      throw ConfigError("translate_test retrieval needs an MT client");
    }
    if (config.strategy->kind != StrategyKind::random &&
        config.strategy->similarity.needs_embeddings() && resources.embeddings == nullptr) {
      throw ConfigError("similarity method " +
                        std::string(to_string(config.strategy->similarity.method)) +
                        " needs embeddings");
    }
  }
  if (config.alignment_mode == AlignmentMode::query) {
    if (resources.d_para.empty()) {
      throw ConfigError("alignment_mode query needs a parallel corpus (d_para)");
    }
    if (config.alignment_k == 0) throw ConfigError("k must be ≥ 1");
    config.alignment_similarity.validate();
    if (config.alignment_similarity.needs_embeddings() && resources.embeddings == nullptr) {
      throw ConfigError("query alignment similarity needs embeddings");
    }
  }
  if (src_lang && config.source_lang && *src_lang != *config.source_lang) {
    throw ConfigError("source_lang " + config.source_lang->code() +
                      " differs from the exemplar language " + src_lang->code());
  }
  if (!src_lang && !config.source_lang) {
    throw ConfigError("source_lang is required when no exemplar dataset is given");
  }
  const LanguageTag lang = src_lang ? *src_lang : *config.source_lang;
  if (resources.registry->find(config.task, lang) == nullptr) {
    throw ConfigError("no label set registered for task " + config.task + ", source language " +
                      lang.code());
  }
}

TaskRun run_task(const LabeledDataset& queries, const TaskConfig& config,
                 const TaskResources& resources, bool dry_run) {
  validate_task(config, resources);
  if (!dry_run && resources.client == nullptr) throw ConfigError("a scoring client is required");
  if (config.alignment_mode == AlignmentMode::query) {
    std::set<LanguageTag> covered;
    for (const auto& p : resources.d_para) covered.insert(p.tgt_lang);
    for (const auto& q : queries) {
      if (!covered.count(q.lang)) {
        throw ConfigError("query alignment: no parallel pairs with target language " + q.lang.code());
      }
    }
  }

  const auto& registry = *resources.registry;
  const LanguageTag src_lang =
      dataset_language(resources.d_src).value_or(config.source_lang.value_or(LanguageTag{}));
  const LabelSet& src_set = registry.at(config.task, src_lang);

  TaskRun run;
  std::vector<PreparedQuery> prepared;
  for (const auto& q : queries) {
    auto exclude = [&](std::string reason) { run.excluded.push_back({q.id, std::move(reason)}); };
    const LabelSet* tgt_set = registry.find(config.task, q.lang);
    const bool needs_target = config.label_mode == LabelLanguageMode::target_only ||
                              config.alignment_mode == AlignmentMode::label;
    if (needs_target && tgt_set == nullptr) {
      exclude("label set unregistered for task " + config.task + ", language " + q.lang.code());
      continue;
    }
    if (q.label.empty()) {
      exclude("query has no gold label");
      continue;
    }
    std::optional<std::size_t> gold_index;
    if (tgt_set != nullptr) gold_index = tgt_set->index_of(q.label);
    if (!gold_index) gold_index = src_set.index_of(q.label);
    if (!gold_index) {
      exclude("gold label \"" + q.label + "\" is not in the label set");
      continue;
    }
    PreparedQuery p;
    p.query = &q;
    p.display = config.label_mode == LabelLanguageMode::target_only ? tgt_set : &src_set;
    p.gold = src_set.labels[*gold_index];
    p.scored_text = q.text;
    if (config.alignment_mode == AlignmentMode::label) {
      p.align_block = build_label_alignment(src_set, *tgt_set);
    }
    prepared.push_back(std::move(p));
  }

  std::unique_ptr<ExemplarRetriever> retriever;
  if (config.strategy) {
    retriever = std::make_unique<ExemplarRetriever>(*resources.d_src, *config.strategy,
                                                    resources.embeddings, resources.d_para,
                                                    resources.mt);
  }
  std::unique_ptr<AlignmentRetriever> aligner;
  if (config.alignment_mode == AlignmentMode::query) {
    aligner = std::make_unique<AlignmentRetriever>(resources.d_para, config.alignment_k,
                                                   config.alignment_similarity,
                                                   resources.embeddings);
  }

  auto prepare = [&](std::size_t i) {
    auto& p = prepared[i];
    if (retriever) {
      auto result = retriever->retrieve(*p.query);
      p.exemplars = std::move(result.exemplars);
      if (result.translated_query) p.scored_text = std::move(*result.translated_query);
    }
    if (aligner) p.align_block = build_query_alignment(aligner->retrieve(*p.query));
  };
  auto assemble_all = [&](const PreparedQuery& p, const PromptTemplate& tmpl) {
    const std::string icl = build_icl_block(p.exemplars, tmpl, src_set, *p.display, config.icl);
    std::vector<AssembledPrompt> candidates;
    for (const auto& label : p.display->labels) {
      candidates.push_back(assemble(icl, p.align_block, p.scored_text, tmpl, *p.display, label));
    }
    return candidates;
  };

  if (dry_run) {
    if (!prepared.empty()) {
      prepare(0);
      const auto& tmpl = get_template(config.template_kind, config.templates.front());
      run.first_prompt = assemble_all(prepared.front(), tmpl).front();
    }
    return run;
  }

  parallel_for(prepared.size(), config.max_inflight, prepare);

  const std::size_t nq = prepared.size();
  const std::size_t nt = config.templates.size();
  run.per_template.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    run.per_template[t].template_index = config.templates[t];
    run.per_template[t].predictions.resize(nq);
    run.per_template[t].scored.resize(nq);
  }
  parallel_for(nt * nq, config.max_inflight, [&](std::size_t job) {
    const std::size_t t = job / nq;
    const std::size_t qi = job % nq;
    const auto& p = prepared[qi];
    const auto& tmpl = get_template(config.template_kind, config.templates[t]);
    const auto candidates = assemble_all(p, tmpl);
    auto prediction = select_label(p.query->id, candidates, *resources.client, config.select);
    ScoredQuery scored{p.query->id, p.query->lang, p.gold, src_set.labels[prediction.chosen_index]};
    run.per_template[t].predictions[qi] = std::move(prediction);
    run.per_template[t].scored[qi] = std::move(scored);
  });
  if (nq > 0) {
    run.first_prompt =
        assemble_all(prepared.front(), get_template(config.template_kind, config.templates.front()))
            .front();
  }
  return run;
}

}  // namespace xalign
