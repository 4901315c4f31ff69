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

// Prompt templates and prompt assembly.
//
// A prompt for one candidate label is
//
//   icl_block "\n\n" align_block "\n\n" query_block
//
// with empty blocks (and their joiner) omitted. The query block is the
// evaluation template rendered with [LABELS_CHOICE] = candidate label, and the
// label is always the final placeholder of an evaluation template, so all
// candidate prompts of one query share everything but the label suffix.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xalign/corpus.hpp"
#include "xalign/retrieval.hpp"

namespace xalign {

enum class TaskKind { tlm, mt, xss, mlm, sentiment, emotion, topic };

std::string_view to_string(TaskKind kind);
/// Throws ConfigError for unknown names.
TaskKind parse_task_kind(std::string_view name);
/// sentiment, emotion and topic.
bool is_classification(TaskKind kind) noexcept;

struct PromptTemplate {
  TaskKind kind;
  std::size_t index;
  std::string_view body;
};

/// Every stored template, grouped by kind, in index order.
std::span<const PromptTemplate> all_templates() noexcept;
std::size_t template_count(TaskKind kind) noexcept;
/// Throws ValidationError("template out of range") for a bad index.
const PromptTemplate& get_template(TaskKind kind, std::size_t index);

/// Names of the "[NAME]" placeholders in `body`, in order of first
/// occurrence. A placeholder is '[' + [A-Z_]+ + ']'.
std::vector<std::string> placeholders(std::string_view body);

using RenderContext = std::map<std::string, std::string, std::less<>>;

/// Substitutes every placeholder in one left-to-right pass; substituted values
/// are never rescanned. Unused context entries are ignored. Throws
/// ValidationError naming the first placeholder without a value.
std::string render(std::string_view body, const RenderContext& context);
std::string render(const PromptTemplate& tmpl, const RenderContext& context);

/// "a or b" for two labels, "a, b, or c" for three or more.
std::string format_options(std::span<const std::string> labels);

/// "In {tgt name}, s1 means t1, s2 means t2, and sk means tk". Both label sets
/// must be registered and of equal length.
std::string build_label_alignment(const std::string& task, const LanguageTag& src_lang,
                                  const LanguageTag& tgt_lang, const LabelRegistry& registry);
std::string build_label_alignment(const LabelSet& src, const LabelSet& tgt);

/// "t1 means s1, t2 means s2, and tk means sk"; a single pair is "t means s".
std::string build_query_alignment(const AlignmentPairs& pairs);

struct IclOptions {
  std::string joiner = "\n\n";
  bool most_similar_last = true;
};

/// Renders each exemplar with `eval_template`, [OPTIONS] from `display_labels`
/// and [LABELS_CHOICE] = display label of the exemplar's class. Exemplar gold
/// labels are resolved to a class index in `exemplar_labels`; an unknown label
/// throws ValidationError. `exemplars` is expected in rank order.
std::string build_icl_block(const ExemplarSet& exemplars, const PromptTemplate& eval_template,
                            const LabelSet& exemplar_labels, const LabelSet& display_labels,
                            const IclOptions& options = {});

struct AssembledPrompt {
  std::string icl_block;
  std::string align_block;
  std::string query_block;
  std::string full_text;
  std::string candidate_label;

  /// full_text without the trailing candidate label.
  std::string_view prefix() const noexcept;
};

/// Renders the query block with [INPUT] = `query_text`, [OPTIONS] from
/// `display_labels` and [LABELS_CHOICE] = `candidate_label`, then joins the
/// non-empty blocks with "\n\n".
AssembledPrompt assemble(std::string_view icl_block, std::string_view align_block,
                         std::string_view query_text, const PromptTemplate& eval_template,
                         const LabelSet& display_labels, const std::string& candidate_label);

struct ManifestEntry {
  TaskKind kind;
  std::size_t index;
  std::string body;
};

/// JSON array of {"task_kind", "index", "body"}.
std::vector<ManifestEntry> load_template_manifest(const std::filesystem::path& path);
/// Human-readable differences between a manifest and the stored templates;
/// empty when they agree exactly.
std::vector<std::string> diff_manifest(std::span<const ManifestEntry> manifest);

}  // namespace xalign
