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

// Label selection by continuation log-probability and the evaluation runner.
//
// All candidate prompts of a query share one prefix, so the argmax of
// score(prefix, label) equals the argmax of the joint prompt score. Ties go to
// the byte-wise smallest label.

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "xalign/clients.hpp"
#include "xalign/corpus.hpp"
#include "xalign/prompting.hpp"
#include "xalign/retrieval.hpp"

namespace xalign {

struct Prediction {
  std::string query_id;
  std::string chosen_label;
  std::size_t chosen_index = 0;  // position in per_label_scores
  std::vector<std::pair<std::string, double>> per_label_scores;  // candidate order
  std::string prompt_hash;  // sha256 of the shared prefix

  bool operator==(const Prediction&) const = default;
};

struct SelectOptions {
  /// Divides each score by the label's code point count.
  bool length_normalize = false;
};

/// Throws ValidationError when a candidate's full_text does not end with its
/// label or when prefixes differ, and ClientError on a non-finite score.
Prediction select_label(const std::string& query_id, std::span<const AssembledPrompt> candidates,
                        ScoringClient& client, const SelectOptions& options = {});

/// Calls fn(0..n-1) on at most max_inflight threads (inline when 1). The first
/// exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t max_inflight,
                  const std::function<void(std::size_t)>& fn);

enum class AlignmentMode { none, label, query };
enum class LabelLanguageMode { source_only, target_only };

std::string_view to_string(AlignmentMode mode);
std::string_view to_string(LabelLanguageMode mode);
AlignmentMode parse_alignment_mode(std::string_view name);
LabelLanguageMode parse_label_language_mode(std::string_view name);

struct TaskConfig {
  std::string task;  // label-set task name
  TaskKind template_kind = TaskKind::sentiment;
  std::vector<std::size_t> templates{0, 1, 2};
  std::optional<RetrievalStrategy> strategy;  // nullopt: zero-shot
  AlignmentMode alignment_mode = AlignmentMode::none;
  LabelLanguageMode label_mode = LabelLanguageMode::source_only;
  std::size_t alignment_k = 3;
  SimilarityConfig alignment_similarity;
  IclOptions icl;
  SelectOptions select;
  std::size_t max_inflight = 8;
  /// Required when there is no exemplar dataset; otherwise must match it.
  std::optional<LanguageTag> source_lang;
};

struct TaskResources {
  const LabelRegistry* registry = nullptr;
  const LabeledDataset* d_src = nullptr;
  std::span<const ParallelPair> d_para;
  const EmbeddingProvider* embeddings = nullptr;
  ScoringClient* client = nullptr;
  MtClient* mt = nullptr;
};

struct Exclusion {
  std::string query_id;
  std::string reason;
};

/// One scored query, in label-set class terms.
struct ScoredQuery {
  std::string query_id;
  LanguageTag lang;
  std::string gold;       // canonical (source-language) label
  std::string predicted;  // canonical label of the chosen candidate
};

struct TemplateRun {
  std::size_t template_index = 0;
  std::vector<Prediction> predictions;  // query order
  std::vector<ScoredQuery> scored;      // parallel to predictions
};

struct TaskRun {
  std::vector<TemplateRun> per_template;
  std::vector<Exclusion> excluded;
  /// First assembled prompt (first template, first query, first label).
  std::optional<AssembledPrompt> first_prompt;
};

/// Checks that every resource the configuration needs is present; throws
/// ConfigError otherwise. Called by run_task before any client call.
void validate_task(const TaskConfig& config, const TaskResources& resources);

/// For every template: retrieve (shared across templates), build the
/// alignment block, assemble one prompt per candidate label and select. A
/// query whose mode needs an unregistered label set is excluded with a reason.
/// `dry_run` stops after assembling the first prompt.
TaskRun run_task(const LabeledDataset& queries, const TaskConfig& config,
                 const TaskResources& resources, bool dry_run = false);

}  // namespace xalign
