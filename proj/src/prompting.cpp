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

#include "xalign/prompting.hpp"

#include <algorithm>
#include <array>

#include <json.hpp>

#include "xalign/error.hpp"
#include "xalign/hash.hpp"
#include "xalign/language.hpp"
#include "xalign/text.hpp"

namespace xalign {
namespace {

using K = TaskKind;

// Grouped by kind, index order within a kind.
constexpr std::array<PromptTemplate, 33> kTemplates{{
    {K::tlm, 0,
     "[INPUT_TEXT]. Denoise the previous [INPUT_LANG] text to its equivalent sentence in "
     "[CONTEXT_LANG]: [CONTEXT]\n[LABEL_TEXT]"},
    {K::tlm, 1,
     "Context in [CONTEXT_LANG]: [CONTEXT]\nFix the following [INPUT_LANG] text \"[INPUT_TEXT]\" "
     "ensuring the meaning is equivalent with the context. [LABEL_TEXT]"},
    {K::tlm, 2,
     "Context in [CONTEXT_LANG]: [CONTEXT]\nNoisy text in [INPUT_LANG]: [INPUT_TEXT]\nHow would "
     "you fix the [INPUT_LANG] sentence to make the meaning the same as the context? "
     "[LABEL_TEXT]"},
    {K::tlm, 3,
     "[INPUT_TEXT]. Denoise the previous [INPUT_LANG] sentence to its equivalent sentence: "
     "[CONTEXT]\n[LABEL_TEXT]"},
    {K::tlm, 4,
     "Context: [CONTEXT]\nFix the following [INPUT_LANG] text \"[INPUT_TEXT]\" ensuring the "
     "meaning is equivalent with the context. [LABEL_TEXT]"},
    {K::tlm, 5,
     "Context: [CONTEXT]\nNoisy text in [INPUT_LANG]: [INPUT_TEXT]\nHow would you fix the "
     "[INPUT_LANG] sentence to make the meaning the same as the [CONTEXT_LANG] sentence? "
     "[LABEL_TEXT]"},

    {K::mt, 0,
     "Translate the following text from [SOURCE_LANG] to [TARGET_LANG].\nText: "
     "[SOURCE_TEXT]\nTranslation: [TARGET_TEXT]"},
    {K::mt, 1,
     "[SOURCE_TEXT]\nTranslate the text above from [SOURCE_LANG] to [TARGET_LANG]. "
     "[TARGET_TEXT]"},
    {K::mt, 2,
     "Text in [SOURCE_LANG]: [SOURCE_TEXT]\nHow would you translate that in [TARGET_LANG]? "
     "[TARGET_TEXT]"},
    {K::mt, 3,
     "Translate the following text to [TARGET_LANG].\nText: [SOURCE_TEXT]\nTranslation: "
     "[TARGET_TEXT]"},
    {K::mt, 4, "[SOURCE_TEXT]\nTranslate the text above to [TARGET_LANG]. [TARGET_TEXT]"},
    {K::mt, 5,
     "Input text: [SOURCE_TEXT]\nHow would you translate that into [TARGET_LANG]? "
     "[TARGET_TEXT]"},

    {K::xss, 0,
     "[SOURCE_LANG] sentence: [SOURCE_TEXT]\n[TARGET_LANG] sentence: [TARGET_TEXT]\nDo the two "
     "sentences have the same meaning? [LABEL]"},
    {K::xss, 1,
     "Sentence A: [SOURCE_TEXT]\nSentence B: [TARGET_TEXT]\nDo sentence A and sentence B have "
     "the same meaning? [LABEL]"},
    {K::xss, 2,
     "[SOURCE_LANG] sentence: [SOURCE_TEXT]\n[TARGET_LANG] sentence: [TARGET_TEXT]\nAre the two "
     "sentences equivalent? [LABEL]"},
    {K::xss, 3,
     "Sentence A: [SOURCE_TEXT]\nSentence B: [TARGET_TEXT]\nAre sentence A and sentence B "
     "equivalent? [LABEL]"},
    {K::xss, 4,
     "Is the [SOURCE_LANG] sentence \"[SOURCE_TEXT]\" equivalent to the [TARGET_LANG] sentence "
     "\"[TARGET_TEXT]\"? [LABEL]"},
    {K::xss, 5,
     "Is the sentence \"[SOURCE_TEXT]\" equivalent to the sentence \"[TARGET_TEXT]\"? [LABEL]"},

    {K::mlm, 0,
     "Denoise the following noisy [SOURCE_LANG] text: \"[SOURCE_TEXT]\", to make a correct "
     "sentence. [TARGET_TEXT]"},
    {K::mlm, 1, "Fix and complete the following [SOURCE_LANG] sentence: [SOURCE_TEXT]\n[TARGET_TEXT]"},
    {K::mlm, 2,
     "Sentence in [SOURCE_LANG]: [SOURCE_TEXT]\nHow would you fix the sentence to make a correct "
     "sentence? [TARGET_TEXT]"},
    {K::mlm, 3,
     "Denoise the following noisy text \"[SOURCE_TEXT]\" to make a correct [SOURCE_LANG] "
     "sentence. [TARGET_TEXT]"},
    {K::mlm, 4, "Fix and complete the following sentence: [SOURCE_TEXT]\n[TARGET_TEXT]"},
    {K::mlm, 5,
     "Input text: [SOURCE_TEXT]\nHow would you fix the sentence to make a correct [SOURCE_LANG] "
     "sentence? [TARGET_TEXT]"},

    {K::sentiment, 0,
     "[INPUT]\nWhat would be the sentiment of the text above? [OPTIONS]? [LABELS_CHOICE]"},
    {K::sentiment, 1,
     "What is the sentiment of this text?\nText: [INPUT]\nAnswer with [OPTIONS]: "
     "[LABELS_CHOICE]"},
    {K::sentiment, 2,
     "Text: [INPUT]\n\nPlease classify the sentiment of above text. Answer with [OPTIONS]: "
     "[LABELS_CHOICE]"},

    {K::emotion, 0,
     "[INPUT]\nWhat would be the emotion of the text above? [OPTIONS]? [LABELS_CHOICE]"},
    {K::emotion, 1,
     "What is the emotion of this text?\nText: [INPUT]\nAnswer with [OPTIONS]: "
     "[LABELS_CHOICE]"},
    {K::emotion, 2,
     "Text: [INPUT]\n\nPlease classify the emotion of above text. Answer with [OPTIONS]: "
     "[LABELS_CHOICE]"},

    {K::topic, 0, "[INPUT]\nWhat would be the topic of the text above? [OPTIONS]? [LABELS_CHOICE]"},
    {K::topic, 1,
     "What is the topic of this text?\nText: [INPUT]\nAnswer with [OPTIONS]: [LABELS_CHOICE]"},
    {K::topic, 2,
     "Text: [INPUT]\n\nPlease classify the topic of above text. Answer with [OPTIONS]: "
     "[LABELS_CHOICE]"},
}};

bool is_placeholder_char(char c) { return (c >= 'A' && c <= 'Z') || c == '_'; }

// Length of the placeholder starting at body[pos] ('[' ... ']'), or 0.
std::size_t placeholder_length(std::string_view body, std::size_t pos) {
  if (body[pos] != '[') return 0;
  std::size_t end = pos + 1;
  while (end < body.size() && is_placeholder_char(body[end])) ++end;
  if (end == pos + 1 || end >= body.size() || body[end] != ']') return 0;
  return end - pos + 1;
}

// "x1 means y1, x2 means y2, and xk means yk"; the ", and " also separates a
// two-item list.
std::string means_list(const std::vector<std::pair<std::string_view, std::string_view>>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += i + 1 == items.size() ? ", and " : ", ";
    out.append(items[i].first);
    out += " means ";
    out.append(items[i].second);
  }
  return out;
}

void require_classification(const PromptTemplate& tmpl) {
  if (!is_classification(tmpl.kind)) {
    throw ValidationError("expected an evaluation template, got " + std::string(to_string(tmpl.kind)));
  }
}

}  // namespace

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case K::tlm: return "tlm";
    case K::mt: return "mt";
    case K::xss: return "xss";
    case K::mlm: return "mlm";
    case K::sentiment: return "sentiment";
    case K::emotion: return "emotion";
    case K::topic: return "topic";
  }
  return "?";
}

TaskKind parse_task_kind(std::string_view name) {
  for (auto kind : {K::tlm, K::mt, K::xss, K::mlm, K::sentiment, K::emotion, K::topic}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown template kind \"" + std::string(name) + "\"");
}

bool is_classification(TaskKind kind) noexcept {
  return kind == K::sentiment || kind == K::emotion || kind == K::topic;
}

std::span<const PromptTemplate> all_templates() noexcept { return kTemplates; }

std::size_t template_count(TaskKind kind) noexcept { return is_classification(kind) ? 3 : 6; }

const PromptTemplate& get_template(TaskKind kind, std::size_t index) {
  for (const auto& t : kTemplates) {
    if (t.kind == kind && t.index == index) return t;
  }
  throw ValidationError("template out of range: " + std::string(to_string(kind)) + " has " +
                        std::to_string(template_count(kind)) + " templates, index " +
                        std::to_string(index) + " requested");
}

std::vector<std::string> placeholders(std::string_view body) {
  std::vector<std::string> out;
  for (std::size_t pos = 0; pos < body.size(); ++pos) {
    const std::size_t len = placeholder_length(body, pos);
    if (len == 0) continue;
    std::string name(body.substr(pos + 1, len - 2));
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(std::move(name));
    pos += len - 1;
  }
  return out;
}

std::string render(std::string_view body, const RenderContext& context) {
  std::string out;
  out.reserve(body.size() * 2);
  std::size_t pos = 0;
  while (pos < body.size()) {
    const std::size_t len = placeholder_length(body, pos);
    if (len == 0) {
      out += body[pos++];
      continue;
    }
    const auto name = body.substr(pos + 1, len - 2);
    const auto it = context.find(name);
    if (it == context.end()) {
      throw ValidationError("no value for placeholder [" + std::string(name) + "]");
    }
    out += it->second;
    pos += len;
  }
  return out;
}

std::string render(const PromptTemplate& tmpl, const RenderContext& context) {
  return render(tmpl.body, context);
}

std::string format_options(std::span<const std::string> labels) {
  if (labels.size() < 2) throw ValidationError("options need at least 2 labels");
  if (labels.size() == 2) return labels[0] + " or " + labels[1];
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i > 0) out += i + 1 == labels.size() ? ", or " : ", ";
    out += labels[i];
  }
  return out;
}

std::string build_label_alignment(const LabelSet& src, const LabelSet& tgt) {
  if (src.size() != tgt.size()) {
    throw ValidationError("label sets of " + src.lang.code() + " and " + tgt.lang.code() +
                          " differ in length");
  }
  std::vector<std::pair<std::string_view, std::string_view>> items;
  for (std::size_t i = 0; i < src.size(); ++i) items.emplace_back(src.labels[i], tgt.labels[i]);
  return "In " + display_name(tgt.lang) + ", " + means_list(items);
}

std::string build_label_alignment(const std::string& task, const LanguageTag& src_lang,
                                  const LanguageTag& tgt_lang, const LabelRegistry& registry) {
  return build_label_alignment(registry.at(task, src_lang), registry.at(task, tgt_lang));
}

std::string build_query_alignment(const AlignmentPairs& pairs) {
  if (pairs.pairs.empty()) throw ValidationError("query alignment needs at least one pair");
  std::vector<std::pair<std::string_view, std::string_view>> items;
  for (const auto& p : pairs.pairs) items.emplace_back(p.tgt_text, p.src_text);
  return means_list(items);
}

std::string build_icl_block(const ExemplarSet& exemplars, const PromptTemplate& eval_template,
                            const LabelSet& exemplar_labels, const LabelSet& display_labels,
                            const IclOptions& options) {
  require_classification(eval_template);
  if (exemplar_labels.size() != display_labels.size()) {
    throw ValidationError("exemplar and display label sets differ in length");
  }
  const std::string option_text = format_options(display_labels.labels);
  std::vector<std::string> blocks;
  for (const auto& e : exemplars.exemplars) {
    const auto index = exemplar_labels.index_of(e.label);
    if (!index) {
      throw ValidationError("exemplar " + e.id + ": label \"" + e.label + "\" is not in the " +
                            exemplar_labels.task + "/" + exemplar_labels.lang.code() +
                            " label set");
    }
    blocks.push_back(render(eval_template, {{"INPUT", e.text},
                                            {"OPTIONS", option_text},
                                            {"LABELS_CHOICE", display_labels.labels[*index]}}));
  }
  if (options.most_similar_last) std::reverse(blocks.begin(), blocks.end());
  return join(blocks, options.joiner);
}

std::string_view AssembledPrompt::prefix() const noexcept {
  return std::string_view(full_text).substr(0, full_text.size() - candidate_label.size());
}

AssembledPrompt assemble(std::string_view icl_block, std::string_view align_block,
                         std::string_view query_text, const PromptTemplate& eval_template,
                         const LabelSet& display_labels, const std::string& candidate_label) {
  require_classification(eval_template);
  AssembledPrompt p;
  p.icl_block = icl_block;
  p.align_block = align_block;
  p.candidate_label = candidate_label;
  p.query_block = render(eval_template, {{"INPUT", std::string(query_text)},
                                         {"OPTIONS", format_options(display_labels.labels)},
                                         {"LABELS_CHOICE", candidate_label}});
  for (const std::string* block : {&p.icl_block, &p.align_block, &p.query_block}) {
    if (block->empty()) continue;
    if (!p.full_text.empty()) p.full_text += "\n\n";
    p.full_text += *block;
  }
  return p;
}

std::vector<ManifestEntry> load_template_manifest(const std::filesystem::path& path) {
  std::vector<ManifestEntry> out;
  try {
    const auto root = nlohmann::json::parse(read_file(path));
    for (const auto& e : root) {
      out.push_back({parse_task_kind(e.at("task_kind").get<std::string>()),
                     e.at("index").get<std::size_t>(), e.at("body").get<std::string>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 1, e.what());
  }
  return out;
}

std::vector<std::string> diff_manifest(std::span<const ManifestEntry> manifest) {
  std::vector<std::string> diffs;
  if (manifest.size() != kTemplates.size()) {
    diffs.push_back("manifest has " + std::to_string(manifest.size()) + " entries, " +
                    std::to_string(kTemplates.size()) + " templates stored");
  }
  for (const auto& entry : manifest) {
    const std::string where =
        std::string(to_string(entry.kind)) + "[" + std::to_string(entry.index) + "]";
    if (entry.index >= template_count(entry.kind)) {
      diffs.push_back(where + " has no stored template");
    } else if (get_template(entry.kind, entry.index).body != entry.body) {
      diffs.push_back(where + " body differs");
    }
  }
  return diffs;
}

}  // namespace xalign
