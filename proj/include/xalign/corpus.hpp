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

// Labeled datasets, parallel corpora, bilingual lexicons and label sets.
//
// All text fields are NFC-normalized on load. Records without an "id" get a
// synthesized "<filename>:<line>" id. Loaded containers are plain values and
// are never mutated by the rest of the library.

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xalign/language.hpp"

namespace xalign {

struct LabeledExample {
  std::string id;
  std::string text;
  LanguageTag lang;
  std::string label;  // empty when the record carries no label

  bool operator==(const LabeledExample&) const = default;
};

struct ParallelPair {
  std::string id;
  std::string src_text;
  std::string tgt_text;
  LanguageTag src_lang;
  LanguageTag tgt_lang;

  bool operator==(const ParallelPair&) const = default;
};

struct LexiconEntry {
  std::string src_word;
  std::string tgt_word;
  LanguageTag src_lang;
  LanguageTag tgt_lang;

  bool operator==(const LexiconEntry&) const = default;
};

struct Lexicon {
  LanguageTag src_lang;
  LanguageTag tgt_lang;
  bool multi_sense = false;
  std::vector<LexiconEntry> entries;
};

/// Ordered class labels of one task in one language. Index i denotes the same
/// class in every language of the task.
struct LabelSet {
  std::string task;
  LanguageTag lang;
  std::vector<std::string> labels;

  std::optional<std::size_t> index_of(std::string_view label) const;
  std::size_t size() const noexcept { return labels.size(); }
};

using LabeledDataset = std::vector<LabeledExample>;

enum class FileFormat { jsonl, tsv };

/// ".tsv" -> tsv, anything else -> jsonl.
FileFormat format_from_path(const std::filesystem::path& path);

class LabelRegistry;

/// Loads a labeled dataset. JSONL records are
///   {"id": str, "text": str, "lang": str, "label": str}
/// and TSV files carry a header row naming the columns (id optional).
/// When `registry` is given, every non-empty label must belong to the label
/// set registered for (`task`, record lang), if one is registered.
LabeledDataset load_labeled(const std::filesystem::path& path, FileFormat format,
                            const LabelRegistry* registry = nullptr,
                            std::string_view task = {});
LabeledDataset parse_labeled(std::istream& in, std::string_view source_name,
                             FileFormat format,
                             const LabelRegistry* registry = nullptr,
                             std::string_view task = {});

/// JSONL: {"id", "src_lang", "tgt_lang", "src_text", "tgt_text"}; TSV with a
/// header row using the same column names.
std::vector<ParallelPair> load_parallel(const std::filesystem::path& path,
                                        FileFormat format);
std::vector<ParallelPair> parse_parallel(std::istream& in,
                                         std::string_view source_name,
                                         FileFormat format);

enum class LexiconMode { single_sense, multi_sense };

/// Header "#src=<tag>\ttgt=<tag>" followed by "src_word\ttgt_word" rows. Blank
/// lines are skipped. In single-sense mode a repeated src_word is an error.
Lexicon load_lexicon(const std::filesystem::path& path,
                     LexiconMode mode = LexiconMode::single_sense);
Lexicon parse_lexicon(std::istream& in, std::string_view source_name,
                      LexiconMode mode = LexiconMode::single_sense);

void write_labeled_jsonl(std::ostream& out, const LabeledDataset& dataset);
void write_parallel_jsonl(std::ostream& out, const std::vector<ParallelPair>& pairs);

/// (task, lang) -> LabelSet. A language may be explicitly *unregistered*
/// (its labels are unknown), which is distinct from never having been listed.
class LabelRegistry {
 public:
  enum class Status { registered, unregistered, unknown };

  /// JSON object task -> lang -> [labels]. A null value, or a list made
  /// only of "-", marks the language as unregistered.
  static LabelRegistry load(const std::filesystem::path& path);
  static LabelRegistry parse(std::string_view json_text);

  /// Validates label count, distinctness and cross-language length.
  void add(LabelSet set);
  void mark_unregistered(const std::string& task, const LanguageTag& lang);

  Status status(std::string_view task, const LanguageTag& lang) const;
  const LabelSet* find(std::string_view task, const LanguageTag& lang) const;
  /// Throws ValidationError("label set unregistered ...") unless registered.
  const LabelSet& at(std::string_view task, const LanguageTag& lang) const;

  std::vector<std::string> tasks() const;
  std::vector<LanguageTag> languages(std::string_view task) const;

 private:
  using Key = std::pair<std::string, LanguageTag>;
  std::map<Key, LabelSet> sets_;
  std::set<Key> unregistered_;
};

}  // namespace xalign
