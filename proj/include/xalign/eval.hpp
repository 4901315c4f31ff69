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

// Classification metrics, multi-template reports, report deltas and
// word-level cross-lingual retrieval accuracy.
//
// Per-class F1 is 0 whenever precision + recall is 0. Weighted F1 weights each
// gold class by its support; macro F1 averages over the classes present in
// gold.

#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "xalign/corpus.hpp"
#include "xalign/embedding.hpp"
#include "xalign/scoring.hpp"

namespace xalign {

/// Throws ValidationError on length mismatch and "no scored queries" on
/// empty input.
double accuracy(std::span<const std::string> gold, std::span<const std::string> pred);
double weighted_f1(std::span<const std::string> gold, std::span<const std::string> pred);
double macro_f1(std::span<const std::string> gold, std::span<const std::string> pred);

class ConfusionMatrix {
 public:
  /// Labels are the sorted union of gold and predicted labels.
  ConfusionMatrix(std::span<const std::string> gold, std::span<const std::string> pred);

  const std::vector<std::string>& labels() const noexcept { return labels_; }
  /// counts[gold][pred]
  std::size_t count(std::size_t gold, std::size_t pred) const {
    return counts_.at(gold).at(pred);
  }
  std::size_t total() const noexcept { return total_; }
  std::size_t support(std::size_t label) const;
  std::size_t predicted(std::size_t label) const;
  double f1(std::size_t label) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<std::size_t>> counts_;
  std::size_t total_ = 0;
};

struct Metrics {
  double accuracy = 0.0;
  double weighted_f1 = 0.0;
  double macro_f1 = 0.0;
  std::size_t n = 0;

  bool operator==(const Metrics&) const = default;
};

Metrics compute_metrics(std::span<const std::string> gold, std::span<const std::string> pred);

struct TemplateMetrics {
  std::size_t template_index = 0;
  Metrics metrics;
};

struct MetricReport {
  std::string task;
  std::string config_hash;
  std::string protocol_hash;
  std::vector<TemplateMetrics> per_template;
  Metrics averaged;  // arithmetic mean over templates; n = queries per template
  std::map<std::string, Metrics> per_language;  // same averaging per language
  std::size_t excluded = 0;
  std::vector<Exclusion> exclusions;
};

/// Every template must cover the same query ids in the same order.
MetricReport aggregate(const std::string& task, std::span<const TemplateRun> runs,
                       std::span<const Exclusion> exclusions = {});

nlohmann::ordered_json to_json(const MetricReport& report);
MetricReport report_from_json(const nlohmann::json& j);

struct DeltaReport {
  std::string task;
  std::map<std::string, double> delta_weighted_f1;  // treatment - baseline
  double delta_averaged_weighted_f1 = 0.0;
};

/// Throws ValidationError when tasks, protocol hashes or language sets differ.
DeltaReport delta_report(const MetricReport& baseline, const MetricReport& treatment);
nlohmann::ordered_json to_json(const DeltaReport& delta);

struct AlignmentQualityReport {
  LanguageTag src_lang;
  LanguageTag tgt_lang;
  std::size_t k = 0;
  double accuracy_at_k = 0.0;
  std::size_t hits = 0;
  std::size_t n_words = 0;   // evaluated source words
  std::size_t n_missing = 0; // source words skipped for a missing vector
};

/// For every distinct source word, ranks the distinct target words of the
/// lexicon by cosine (ties by ascending word) and counts a hit when any gold
/// translation is in the top k. Vectors are looked up as "<lang>:<word>".
AlignmentQualityReport word_retrieval_accuracy(const Lexicon& lexicon,
                                               const EmbeddingProvider& provider, std::size_t k);
nlohmann::ordered_json to_json(const AlignmentQualityReport& report);

}  // namespace xalign
