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

#include "xalign/eval.hpp"

#include <algorithm>
#include <set>

#include "xalign/error.hpp"
#include "xalign/similarity.hpp"

namespace xalign {
namespace {

void check_inputs(std::span<const std::string> gold, std::span<const std::string> pred) {
  if (gold.size() != pred.size()) {
    throw ValidationError("gold and predicted label lists differ in length (" +
                          std::to_string(gold.size()) + " vs " + std::to_string(pred.size()) +
                          ")");
  }
  if (gold.empty()) throw ValidationError("no scored queries");
}

Metrics mean_of(const std::vector<Metrics>& items) {
  Metrics m;
  for (const auto& x : items) {
    m.accuracy += x.accuracy;
    m.weighted_f1 += x.weighted_f1;
    m.macro_f1 += x.macro_f1;
  }
  const auto n = static_cast<double>(items.size());
  m.accuracy /= n;
  m.weighted_f1 /= n;
  m.macro_f1 /= n;
  m.n = items.front().n;
  return m;
}

nlohmann::ordered_json metrics_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["accuracy"] = m.accuracy;
  j["weighted_f1"] = m.weighted_f1;
  j["macro_f1"] = m.macro_f1;
  j["n"] = m.n;
  return j;
}

Metrics metrics_from_json(const nlohmann::json& j) {
  return {j.at("accuracy").get<double>(), j.at("weighted_f1").get<double>(),
          j.at("macro_f1").get<double>(), j.at("n").get<std::size_t>()};
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::span<const std::string> gold,
                                 std::span<const std::string> pred) {
  check_inputs(gold, pred);
  std::set<std::string> labels(gold.begin(), gold.end());
  labels.insert(pred.begin(), pred.end());
  labels_.assign(labels.begin(), labels.end());
  auto index = [&](const std::string& l) {
    return static_cast<std::size_t>(std::lower_bound(labels_.begin(), labels_.end(), l) -
                                    labels_.begin());
  };
  counts_.assign(labels_.size(), std::vector<std::size_t>(labels_.size(), 0));
  for (std::size_t i = 0; i < gold.size(); ++i) ++counts_[index(gold[i])][index(pred[i])];
  total_ = gold.size();
}

std::size_t ConfusionMatrix::support(std::size_t label) const {
  std::size_t s = 0;
  for (auto c : counts_.at(label)) s += c;
  return s;
}

std::size_t ConfusionMatrix::predicted(std::size_t label) const {
  std::size_t s = 0;
  for (const auto& row : counts_) s += row.at(label);
  return s;
}

double ConfusionMatrix::f1(std::size_t label) const {
  // F1 = 2TP / (2TP + FP + FN), which is 0 exactly when precision + recall is.
  const double tp = static_cast<double>(count(label, label));
  const double denom = static_cast<double>(support(label) + predicted(label));
  return denom == 0.0 ? 0.0 : 2.0 * tp / denom;
}

double accuracy(std::span<const std::string> gold, std::span<const std::string> pred) {
  check_inputs(gold, pred);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) hits += gold[i] == pred[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

double weighted_f1(std::span<const std::string> gold, std::span<const std::string> pred) {
  const ConfusionMatrix cm(gold, pred);
  double sum = 0.0;
  for (std::size_t c = 0; c < cm.labels().size(); ++c) {
    sum += static_cast<double>(cm.support(c)) * cm.f1(c);
  }
  return sum / static_cast<double>(cm.total());
}

double macro_f1(std::span<const std::string> gold, std::span<const std::string> pred) {
  const ConfusionMatrix cm(gold, pred);
  double sum = 0.0;
  std::size_t classes = 0;
  for (std::size_t c = 0; c < cm.labels().size(); ++c) {
    if (cm.support(c) == 0) continue;
    sum += cm.f1(c);
    ++classes;
  }
  return sum / static_cast<double>(classes);
}

Metrics compute_metrics(std::span<const std::string> gold, std::span<const std::string> pred) {
  return {accuracy(gold, pred), weighted_f1(gold, pred), macro_f1(gold, pred), gold.size()};
}

MetricReport aggregate(const std::string& task, std::span<const TemplateRun> runs,
                       std::span<const Exclusion> exclusions) {
  if (runs.empty()) throw ValidationError("no template runs to aggregate");
  const auto& reference = runs.front().scored;
  for (const auto& run : runs) {
    bool same = run.scored.size() == reference.size();
    for (std::size_t i = 0; same && i < reference.size(); ++i) {
      same = run.scored[i].query_id == reference[i].query_id;
    }
    if (!same) {
      throw ValidationError("template " + std::to_string(run.template_index) +
                            " covers a different query set than template " +
                            std::to_string(runs.front().template_index));
    }
  }

  MetricReport report;
  report.task = task;
  report.excluded = exclusions.size();
  report.exclusions.assign(exclusions.begin(), exclusions.end());

  std::set<std::string> languages;
  for (const auto& q : reference) languages.insert(q.lang.code());

  std::vector<Metrics> overall;
  std::map<std::string, std::vector<Metrics>> by_language;
  for (const auto& run : runs) {
    std::vector<std::string> gold;
    std::vector<std::string> pred;
    std::map<std::string, std::pair<std::vector<std::string>, std::vector<std::string>>> slices;
    for (const auto& q : run.scored) {
      gold.push_back(q.gold);
      pred.push_back(q.predicted);
      auto& slice = slices[q.lang.code()];
      slice.first.push_back(q.gold);
      slice.second.push_back(q.predicted);
    }
    const Metrics m = compute_metrics(gold, pred);
    report.per_template.push_back({run.template_index, m});
    overall.push_back(m);
    for (const auto& [lang, slice] : slices) {
      by_language[lang].push_back(compute_metrics(slice.first, slice.second));
    }
  }
  report.averaged = mean_of(overall);
  for (const auto& [lang, items] : by_language) report.per_language[lang] = mean_of(items);
  return report;
}

nlohmann::ordered_json to_json(const MetricReport& report) {
  nlohmann::ordered_json j;
  j["task"] = report.task;
  j["config_hash"] = report.config_hash;
  j["protocol_hash"] = report.protocol_hash;
  auto per_template = nlohmann::ordered_json::array();
  for (const auto& t : report.per_template) {
    auto entry = metrics_json(t.metrics);
    nlohmann::ordered_json row;
    row["template"] = t.template_index;
    for (auto& [k, v] : entry.items()) row[k] = v;
    per_template.push_back(std::move(row));
  }
  j["per_template"] = std::move(per_template);
  j["averaged"] = metrics_json(report.averaged);
  auto per_language = nlohmann::ordered_json::object();
  for (const auto& [lang, m] : report.per_language) per_language[lang] = metrics_json(m);
  j["per_language"] = std::move(per_language);
  j["excluded"] = report.excluded;
  auto exclusions = nlohmann::ordered_json::array();
  for (const auto& e : report.exclusions) {
    nlohmann::ordered_json row;
    row["query_id"] = e.query_id;
    row["reason"] = e.reason;
    exclusions.push_back(std::move(row));
  }
  j["exclusions"] = std::move(exclusions);
  return j;
}

MetricReport report_from_json(const nlohmann::json& j) {
  try {
    MetricReport r;
    r.task = j.at("task").get<std::string>();
    r.config_hash = j.value("config_hash", "");
    r.protocol_hash = j.value("protocol_hash", "");
    for (const auto& t : j.at("per_template")) {
      r.per_template.push_back({t.at("template").get<std::size_t>(), metrics_from_json(t)});
    }
    r.averaged = metrics_from_json(j.at("averaged"));
    for (const auto& [lang, m] : j.at("per_language").items()) {
      r.per_language[lang] = metrics_from_json(m);
    }
    r.excluded = j.at("excluded").get<std::size_t>();
    for (const auto& e : j.value("exclusions", nlohmann::json::array())) {
      r.exclusions.push_back({e.at("query_id").get<std::string>(), e.at("reason").get<std::string>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed report: ") + e.what());
  }
}

DeltaReport delta_report(const MetricReport& baseline, const MetricReport& treatment) {
  if (baseline.task != treatment.task) {
    throw ValidationError("reports are for different tasks (" + baseline.task + " vs " +
                          treatment.task + ")");
  }
  if (baseline.protocol_hash != treatment.protocol_hash) {
    throw ValidationError("reports use different evaluation protocols (protocol_hash " +
                          baseline.protocol_hash + " vs " + treatment.protocol_hash + ")");
  }
  std::vector<std::string> only_baseline;
  std::vector<std::string> only_treatment;
  for (const auto& [lang, m] : baseline.per_language) {
    if (!treatment.per_language.count(lang)) only_baseline.push_back(lang);
  }
  for (const auto& [lang, m] : treatment.per_language) {
    if (!baseline.per_language.count(lang)) only_treatment.push_back(lang);
  }
  if (!only_baseline.empty() || !only_treatment.empty()) {
    std::string msg = "language coverage differs:";
    for (const auto& l : only_baseline) msg += " -" + l;
    for (const auto& l : only_treatment) msg += " +" + l;
    throw ValidationError(msg);
  }
  DeltaReport d;
  d.task = baseline.task;
  for (const auto& [lang, m] : baseline.per_language) {
    d.delta_weighted_f1[lang] = treatment.per_language.at(lang).weighted_f1 - m.weighted_f1;
  }
  d.delta_averaged_weighted_f1 = treatment.averaged.weighted_f1 - baseline.averaged.weighted_f1;
  return d;
}

nlohmann::ordered_json to_json(const DeltaReport& delta) {
  nlohmann::ordered_json j;
  j["task"] = delta.task;
  auto per_language = nlohmann::ordered_json::object();
  for (const auto& [lang, v] : delta.delta_weighted_f1) per_language[lang] = v;
  j["delta_weighted_f1"] = std::move(per_language);
  j["delta_averaged_weighted_f1"] = delta.delta_averaged_weighted_f1;
  return j;
}

AlignmentQualityReport word_retrieval_accuracy(const Lexicon& lexicon,
                                               const EmbeddingProvider& provider, std::size_t k) {
  if (lexicon.entries.empty()) throw ValidationError("lexicon is empty");
  if (k == 0) throw ValidationError("k must be ≥ 1");

  auto lookup = [&](const LanguageTag& lang, const std::string& word) -> std::optional<DenseVector> {
    try {
      return provider.embed(lang.code() + ":" + word, word);
    } catch (const MissingEmbeddingError&) {
      return std::nullopt;
    }
  };

  std::map<std::string, std::set<std::string>> gold;  // source word -> translations
  std::set<std::string> targets;
  for (const auto& e : lexicon.entries) {
    gold[e.src_word].insert(e.tgt_word);
    targets.insert(e.tgt_word);
  }

  std::vector<std::string> pool_ids;
  std::vector<DenseVector> pool;
  for (const auto& w : targets) {
    if (auto v = lookup(lexicon.tgt_lang, w)) {
      pool_ids.push_back(w);
      pool.push_back(std::move(*v));
    }
  }
  const std::set<std::string> available(pool_ids.begin(), pool_ids.end());

  AlignmentQualityReport report;
  report.src_lang = lexicon.src_lang;
  report.tgt_lang = lexicon.tgt_lang;
  report.k = k;
  std::vector<double> scores(pool.size());
  for (const auto& [word, translations] : gold) {
    const auto v = lookup(lexicon.src_lang, word);
    const bool reachable = std::any_of(translations.begin(), translations.end(),
                                       [&](const std::string& t) { return available.count(t); });
    if (!v || !reachable) {
      ++report.n_missing;
      continue;
    }
    for (std::size_t i = 0; i < pool.size(); ++i) scores[i] = cosine(*v, pool[i]);
    const auto top = rank_top_k(pool_ids, scores, k);
    const bool hit = std::any_of(top.begin(), top.end(), [&](const RankedCandidate& r) {
      return translations.count(r.candidate_id) != 0;
    });
    ++report.n_words;
    report.hits += hit ? 1 : 0;
  }
  if (report.n_words == 0) {
    throw ValidationError("no lexicon word has vectors on both sides");
  }
  report.accuracy_at_k = static_cast<double>(report.hits) / static_cast<double>(report.n_words);
  return report;
}

nlohmann::ordered_json to_json(const AlignmentQualityReport& report) {
  nlohmann::ordered_json j;
  j["lang_pair"] = report.src_lang.code() + "-" + report.tgt_lang.code();
  j["k"] = report.k;
  j["accuracy_at_k"] = report.accuracy_at_k;
  j["hits"] = report.hits;
  j["n_words"] = report.n_words;
  j["n_missing"] = report.n_missing;
  return j;
}

}  // namespace xalign
