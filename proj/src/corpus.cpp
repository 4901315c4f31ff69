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

#include "xalign/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "xalign/error.hpp"
#include "xalign/text.hpp"

namespace xalign {
namespace {

using nlohmann::json;

// One logical input line with its 1-based line number.
struct Line {
  std::size_t number;
  std::string text;
};

std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string buffer;
  std::size_t number = 0;
  while (std::getline(in, buffer)) {
    ++number;
    if (!buffer.empty() && buffer.back() == '\r') buffer.pop_back();
    lines.push_back({number, buffer});
  }
  return lines;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  });
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

// A record as a flat field map, independent of the on-disk format.
struct RawRecord {
  std::size_t line;
  std::unordered_map<std::string, std::string> fields;

  const std::string* get(const std::string& key) const {
    auto it = fields.find(key);
    return it == fields.end() ? nullptr : &it->second;
  }
};

std::vector<RawRecord> read_records(std::istream& in, std::string_view source,
                                    FileFormat format) {
  std::vector<RawRecord> records;
  const auto lines = read_lines(in);
  const std::string src(source);
  if (format == FileFormat::jsonl) {
    for (const auto& line : lines) {
      if (is_blank(line.text)) continue;
      json value;
      try {
        value = json::parse(line.text);
      } catch (const json::exception& e) {
        throw ParseError(src, line.number, std::string("invalid JSON: ") + e.what());
      }
      if (!value.is_object()) throw ParseError(src, line.number, "expected a JSON object");
      RawRecord record{line.number, {}};
      for (const auto& [key, field] : value.items()) {
        if (field.is_null()) continue;
        if (!field.is_string()) {
          throw ParseError(src, line.number, "field \"" + key + "\" must be a string");
        }
        record.fields.emplace(key, field.get<std::string>());
      }
      records.push_back(std::move(record));
    }
    return records;
  }

  std::vector<std::string> header;
  for (const auto& line : lines) {
    if (is_blank(line.text)) continue;
    if (!is_valid_utf8(line.text)) throw ParseError(src, line.number, "invalid UTF-8");
    auto fields = split_tabs(line.text);
    if (header.empty()) {
      header = std::move(fields);
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError(src, line.number,
                       "expected " + std::to_string(header.size()) + " columns, got " +
                           std::to_string(fields.size()));
    }
    RawRecord record{line.number, {}};
    for (std::size_t i = 0; i < header.size(); ++i) {
      record.fields.emplace(header[i], std::move(fields[i]));
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::string require(const RawRecord& record, const std::string& key,
                    std::string_view source) {
  const auto* value = record.get(key);
  if (value == nullptr) {
    throw ParseError(std::string(source), record.line, "missing field \"" + key + "\"");
  }
  return *value;
}

std::string record_id(const RawRecord& record, std::string_view source) {
  if (const auto* id = record.get("id"); id != nullptr && !id->empty()) return *id;
  return std::filesystem::path(source).filename().string() + ":" +
         std::to_string(record.line);
}

LanguageTag parse_tag(const std::string& code, const std::string& id) {
  if (!LanguageTag::is_valid(code)) {
    throw ValidationError("record " + id + ": invalid language tag \"" + code + "\"");
  }
  return LanguageTag(code);
}

void check_unique(std::unordered_set<std::string>& seen, const std::string& id) {
  if (!seen.insert(id).second) throw ValidationError("duplicate record id " + id);
}

}  // namespace

std::optional<std::size_t> LabelSet::index_of(std::string_view label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

FileFormat format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".tsv" ? FileFormat::tsv : FileFormat::jsonl;
}

LabeledDataset parse_labeled(std::istream& in, std::string_view source_name,
                             FileFormat format, const LabelRegistry* registry,
                             std::string_view task) {
  LabeledDataset dataset;
  std::unordered_set<std::string> seen;
  for (const auto& record : read_records(in, source_name, format)) {
    LabeledExample example;
    example.id = record_id(record, source_name);
    example.text = nfc(require(record, "text", source_name));
    example.lang = parse_tag(require(record, "lang", source_name), example.id);
    if (const auto* label = record.get("label")) example.label = nfc(*label);
    if (example.text.empty()) {
      throw ValidationError("record " + example.id + ": empty text");
    }
    check_unique(seen, example.id);
    if (registry != nullptr && !example.label.empty()) {
      if (const auto* set = registry->find(task, example.lang);
          set != nullptr && !set->index_of(example.label)) {
        throw ValidationError("record " + example.id + ": label \"" + example.label +
                              "\" not in the " + std::string(task) + " label set for " +
                              example.lang.code());
      }
    }
    dataset.push_back(std::move(example));
  }
  return dataset;
}

LabeledDataset load_labeled(const std::filesystem::path& path, FileFormat format,
                            const LabelRegistry* registry, std::string_view task) {
  auto in = open_input(path);
  return parse_labeled(in, path.string(), format, registry, task);
}

std::vector<ParallelPair> parse_parallel(std::istream& in,
                                         std::string_view source_name,
                                         FileFormat format) {
  std::vector<ParallelPair> pairs;
  std::unordered_set<std::string> seen;
  for (const auto& record : read_records(in, source_name, format)) {
    ParallelPair pair;
    pair.id = record_id(record, source_name);
    pair.src_lang = parse_tag(require(record, "src_lang", source_name), pair.id);
    pair.tgt_lang = parse_tag(require(record, "tgt_lang", source_name), pair.id);
    pair.src_text = nfc(require(record, "src_text", source_name));
    pair.tgt_text = nfc(require(record, "tgt_text", source_name));
    if (pair.src_lang == pair.tgt_lang) {
      throw ValidationError("pair " + pair.id + ": src_lang equals tgt_lang (" +
                            pair.src_lang.code() + ")");
    }
    if (pair.src_text.empty() || pair.tgt_text.empty()) {
      throw ValidationError("pair " + pair.id + ": empty text");
    }
    check_unique(seen, pair.id);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<ParallelPair> load_parallel(const std::filesystem::path& path,
                                        FileFormat format) {
  auto in = open_input(path);
  return parse_parallel(in, path.string(), format);
}

Lexicon parse_lexicon(std::istream& in, std::string_view source_name,
                      LexiconMode mode) {
  const std::string src(source_name);
  Lexicon lexicon;
  lexicon.multi_sense = mode == LexiconMode::multi_sense;
  bool have_header = false;
  std::unordered_set<std::string> seen;
  for (const auto& line : read_lines(in)) {
    if (is_blank(line.text)) continue;
    if (!is_valid_utf8(line.text)) throw ParseError(src, line.number, "invalid UTF-8");
    const auto fields = split_tabs(line.text);
    if (!have_header) {
      if (fields.size() != 2 || fields[0].rfind("#src=", 0) != 0 ||
          fields[1].rfind("tgt=", 0) != 0) {
        throw ParseError(src, line.number, "expected header \"#src=<tag>\\ttgt=<tag>\"");
      }
      const auto src_code = fields[0].substr(5);
      const auto tgt_code = fields[1].substr(4);
      if (!LanguageTag::is_valid(src_code) || !LanguageTag::is_valid(tgt_code)) {
        throw ParseError(src, line.number, "invalid language tag in header");
      }
      lexicon.src_lang = LanguageTag(src_code);
      lexicon.tgt_lang = LanguageTag(tgt_code);
      have_header = true;
      continue;
    }
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(src, line.number, "malformed lexicon row");
    }
    LexiconEntry entry{nfc(fields[0]), nfc(fields[1]), lexicon.src_lang,
                       lexicon.tgt_lang};
    if (mode == LexiconMode::single_sense && !seen.insert(entry.src_word).second) {
      throw ParseError(src, line.number,
                       "duplicate source word \"" + entry.src_word + "\" for " +
                           lexicon.tgt_lang.code() + " in single-sense lexicon");
    }
    lexicon.entries.push_back(std::move(entry));
  }
  if (!have_header) throw ParseError(src, 1, "missing lexicon header");
  return lexicon;
}

Lexicon load_lexicon(const std::filesystem::path& path, LexiconMode mode) {
  auto in = open_input(path);
  return parse_lexicon(in, path.string(), mode);
}

void write_labeled_jsonl(std::ostream& out, const LabeledDataset& dataset) {
  for (const auto& example : dataset) {
    nlohmann::ordered_json record;
    record["id"] = example.id;
    record["text"] = example.text;
    record["lang"] = example.lang.code();
    record["label"] = example.label;
    out << record.dump() << '\n';
  }
}

void write_parallel_jsonl(std::ostream& out, const std::vector<ParallelPair>& pairs) {
  for (const auto& pair : pairs) {
    nlohmann::ordered_json record;
    record["id"] = pair.id;
    record["src_lang"] = pair.src_lang.code();
    record["tgt_lang"] = pair.tgt_lang.code();
    record["src_text"] = pair.src_text;
    record["tgt_text"] = pair.tgt_text;
    out << record.dump() << '\n';
  }
}

LabelRegistry LabelRegistry::parse(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError("label sets", 1, std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ValidationError("label-set file must be a JSON object");
  LabelRegistry registry;
  for (const auto& [task, by_lang] : root.items()) {
    if (!by_lang.is_object()) {
      throw ValidationError("label sets for task " + task + " must be an object");
    }
    for (const auto& [code, labels] : by_lang.items()) {
      const LanguageTag lang(code);
      if (labels.is_null()) {
        registry.mark_unregistered(task, lang);
        continue;
      }
      if (!labels.is_array()) {
        throw ValidationError("labels for " + task + "/" + code + " must be a list");
      }
      LabelSet set{task, lang, {}};
      for (const auto& label : labels) {
        if (!label.is_string()) {
          throw ValidationError("labels for " + task + "/" + code + " must be strings");
        }
        set.labels.push_back(nfc(label.get<std::string>()));
      }
      const bool placeholder_only =
          !set.labels.empty() &&
          std::all_of(set.labels.begin(), set.labels.end(),
                      [](const std::string& l) { return l == "-"; });
      if (placeholder_only) {
        registry.mark_unregistered(task, lang);
      } else {
        registry.add(std::move(set));
      }
    }
  }
  return registry;
}

LabelRegistry LabelRegistry::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

void LabelRegistry::add(LabelSet set) {
  if (set.labels.size() < 2) {
    throw ValidationError("task " + set.task + "/" + set.lang.code() +
                          ": a label set needs at least 2 labels");
  }
  for (std::size_t i = 0; i < set.labels.size(); ++i) {
    for (std::size_t j = i + 1; j < set.labels.size(); ++j) {
      if (set.labels[i] == set.labels[j]) {
        throw ValidationError("task " + set.task + "/" + set.lang.code() +
                              ": duplicate label \"" + set.labels[i] + "\"");
      }
    }
  }
  for (const auto& [key, existing] : sets_) {
    if (key.first == set.task && existing.labels.size() != set.labels.size()) {
      throw ValidationError("task " + set.task + ": label sets have unequal lengths (" +
                            existing.lang.code() + " has " +
                            std::to_string(existing.labels.size()) + ", " +
                            set.lang.code() + " has " +
                            std::to_string(set.labels.size()) + ")");
    }
  }
  Key key{set.task, set.lang};
  unregistered_.erase(key);
  sets_.insert_or_assign(std::move(key), std::move(set));
}

void LabelRegistry::mark_unregistered(const std::string& task, const LanguageTag& lang) {
  Key key{task, lang};
  sets_.erase(key);
  unregistered_.insert(std::move(key));
}

LabelRegistry::Status LabelRegistry::status(std::string_view task,
                                            const LanguageTag& lang) const {
  const Key key{std::string(task), lang};
  if (sets_.count(key) != 0) return Status::registered;
  if (unregistered_.count(key) != 0) return Status::unregistered;
  return Status::unknown;
}

const LabelSet* LabelRegistry::find(std::string_view task, const LanguageTag& lang) const {
  const auto it = sets_.find(Key{std::string(task), lang});
  return it == sets_.end() ? nullptr : &it->second;
}

const LabelSet& LabelRegistry::at(std::string_view task, const LanguageTag& lang) const {
  if (const auto* set = find(task, lang)) return *set;
  throw ValidationError("label set unregistered for task " + std::string(task) +
                        ", language " + lang.code());
}

std::vector<std::string> LabelRegistry::tasks() const {
  std::vector<std::string> out;
  for (const auto& [key, set] : sets_) {
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  }
  return out;
}

std::vector<LanguageTag> LabelRegistry::languages(std::string_view task) const {
  std::vector<LanguageTag> out;
  for (const auto& [key, set] : sets_) {
    if (key.first == task) out.push_back(key.second);
  }
  return out;
}

}  // namespace xalign
