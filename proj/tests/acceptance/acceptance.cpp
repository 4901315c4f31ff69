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

// Acceptance suite. Prints one "[PASS]" or "[FAIL]" line per criterion and
// exits nonzero when any criterion fails or exceeds its time budget.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "test_support.hpp"
#include "xalign/cli.hpp"
#include "xalign/clients.hpp"
#include "xalign/corpus.hpp"
#include "xalign/embedding.hpp"
#include "xalign/eval.hpp"
#include "xalign/hash.hpp"
#include "xalign/instructgen.hpp"
#include "xalign/prompting.hpp"
#include "xalign/retrieval.hpp"
#include "xalign/scoring.hpp"
#include "xalign/similarity.hpp"

namespace xalign::acceptance {
namespace {

namespace fs = std::filesystem;
using testing::data_dir;
using testing::source_dir;

/// Empty on success, otherwise the first failure found.
using Outcome = std::optional<std::string>;

struct Criterion {
  int number;
  std::string name;
  double budget_ms;
  std::function<Outcome()> check;
};

std::string str(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

// ---- 1: template fidelity ----------------------------------------------------

Outcome template_fidelity() {
  const auto manifest = load_template_manifest(source_dir() / "data" / "templates.json");
  if (manifest.size() != all_templates().size()) {
    return "manifest has " + std::to_string(manifest.size()) + " entries, table has " +
           std::to_string(all_templates().size());
  }
  if (const auto diff = diff_manifest(manifest); !diff.empty()) return "manifest drift: " + diff.front();
  const std::regex leftover(R"(\[[A-Z][A-Z_]*\])");
  for (const auto& t : all_templates()) {
    RenderContext ctx;
    for (const auto& name : placeholders(t.body)) ctx[name] = "filled " + name;
    const auto out = render(t, ctx);
    if (std::regex_search(out, leftover)) {
      return std::string(to_string(t.kind)) + " " + std::to_string(t.index) + " keeps a placeholder";
    }
  }
  return std::nullopt;
}

// ---- 2: retrieval oracle equivalence -----------------------------------------

std::vector<std::string> random_texts(std::mt19937_64& gen, std::size_t n, std::size_t vocab) {
  std::uniform_int_distribution<std::size_t> word(0, vocab - 1), len(1, 8);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    for (std::size_t j = len(gen); j > 0; --j) {
      const auto w = word(gen);
      if (!text.empty()) text += ' ';
      text += "t" + std::string(1, static_cast<char>('a' + w % 26)) +
              std::string(1, static_cast<char>('a' + w / 26 % 26));
    }
    out.push_back(text);
  }
  return out;
}

Outcome retrieval_equivalence() {
  std::mt19937_64 gen(2026);
  std::normal_distribution<double> g(0.0, 1.0);
  const std::vector<Method> methods{Method::bow, Method::tfidf, Method::embedding, Method::ensemble};
  for (int corpus = 0; corpus < 50; ++corpus) {
    const std::size_t n = corpus == 0 ? 1 : std::uniform_int_distribution<std::size_t>(2, 1000)(gen);
    const std::size_t vocab = std::uniform_int_distribution<std::size_t>(5, 300)(gen);
    const auto texts = random_texts(gen, n, vocab);
    std::vector<Candidate> candidates;
    std::vector<std::string> ids;
    FileEmbeddingProvider provider;
    std::map<std::string, std::vector<double>> vectors;
    const std::size_t dim = 6;
    auto add_vector = [&](const std::string& key) {
      std::vector<double> v(dim);
      // Coarse values make exact score ties between candidates common.
      for (auto& x : v) x = std::round(g(gen) * 2.0) / 2.0;
      v[0] = std::abs(v[0]) + 0.5;
      vectors[key] = v;
      provider.insert(key, DenseVector(v));
    };
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back("c" + std::to_string(i));
      candidates.push_back({ids.back(), texts[i], ""});
      add_vector(ids.back());
    }
    for (const auto method : methods) {
      SimilarityConfig config;
      config.method = method;
      const CandidatePool pool(candidates, config, &provider);
      for (int q = 0; q < 3; ++q) {
        const std::string key = "query" + std::to_string(q);
        if (!vectors.count(key)) add_vector(key);
        const std::string query =
            q == 0 ? texts[std::uniform_int_distribution<std::size_t>(0, n - 1)(gen)]
                   : random_texts(gen, 1, vocab + 20).front();
        const auto tfidf = oracle::tfidf_scores(texts, query);
        const auto bow = oracle::bow_scores(texts, query, false);
        std::vector<double> emb;
        for (const auto& id : ids) emb.push_back(oracle::cosine(vectors[key], vectors[id]));
        std::vector<double> expected_scores;
        switch (method) {
          case Method::bow: expected_scores = bow; break;
          case Method::tfidf: expected_scores = tfidf; break;
          case Method::embedding: expected_scores = emb; break;
          case Method::ensemble:
            expected_scores = oracle::ensemble({{1.0, tfidf}, {1.0, bow}, {1.0, emb}});
            break;
        }
        for (const std::size_t k : {1, 3, 10}) {
          const auto expected = oracle::rank_ids(ids, expected_scores, k);
          std::vector<std::string> got;
          for (const auto& r : pool.top_k({query, key}, k)) got.push_back(r.candidate_id);
          if (got != expected) {
            return "corpus " + std::to_string(corpus) + " method " + std::string(to_string(method)) +
                   " k " + std::to_string(k) + ": ranking differs from brute force";
          }
        }
      }
    }
  }
  return std::nullopt;
}

// ---- 3: metric oracle ----------------------------------------------------------

Outcome metric_oracle() {
  std::mt19937_64 gen(303);
  for (int trial = 0; trial < 100; ++trial) {
    const int classes = std::uniform_int_distribution<int>(1, 6)(gen);
    const int n = std::uniform_int_distribution<int>(1, 100)(gen);
    std::uniform_int_distribution<int> label(0, classes - 1);
    std::vector<std::string> gold, pred;
    for (int i = 0; i < n; ++i) {
      gold.push_back("class" + std::to_string(label(gen)));
      pred.push_back("class" + std::to_string(label(gen)));
    }
    const auto ref = oracle::reference_metrics(gold, pred);
    const auto m = compute_metrics(gold, pred);
    for (const auto& [name, got, want] :
         {std::tuple{"accuracy", m.accuracy, ref.accuracy},
          std::tuple{"weighted F1", m.weighted_f1, ref.weighted_f1},
          std::tuple{"macro F1", m.macro_f1, ref.macro_f1}}) {
      if (std::abs(got - want) > 1e-9) {
        return "trial " + std::to_string(trial) + ": " + name + " " + str(got) + " vs " + str(want);
      }
    }
  }
  return std::nullopt;
}

// ---- 4: continuation argmax equals joint argmax -------------------------------

std::uint64_t fnv(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Outcome continuation_argmax() {
  // Conditional scores are multiples of 0.5 so that label ties occur.
  MockScoringClient mock;
  mock.add_rule(MockScoringClient::RuleFn(
      [](std::string_view prompt, std::string_view continuation) -> std::optional<double> {
        const auto h = fnv(std::string(prompt) + "\x1f" + std::string(continuation));
        return -0.5 * static_cast<double>(h % 7);
      }));
  std::mt19937_64 gen(404);
  const std::vector<std::string> words{"amber", "cobalt", "jade", "onyx", "ruby", "topaz", "umber", "zinc"};
  std::size_t ties = 0;
  for (int q = 0; q < 200; ++q) {
    std::vector<std::string> pool = words;
    std::shuffle(pool.begin(), pool.end(), gen);
    pool.resize(std::uniform_int_distribution<std::size_t>(2, 6)(gen));
    const LabelSet labels{"synthetic", LanguageTag("eng"), pool};
    const auto kind = q % 3 == 0 ? TaskKind::sentiment : (q % 3 == 1 ? TaskKind::emotion : TaskKind::topic);
    const auto& tmpl = get_template(kind, static_cast<std::size_t>(q) % template_count(kind));
    const std::string query = random_texts(gen, 1, 50).front();
    std::vector<AssembledPrompt> candidates;
    for (const auto& l : labels.labels) candidates.push_back(assemble("", "", query, tmpl, labels, l));
    const auto prediction = select_label("q" + std::to_string(q), candidates, mock);

    // Joint log-probability of each full prompt: a prefix term shared by all
    // candidates plus the continuation term.
    const std::string prefix(candidates.front().prefix());
    const double prefix_logprob = -static_cast<double>(fnv(prefix) % 1000) - 0.25;
    std::vector<double> joint;
    std::vector<std::string> continuations;
    for (const auto& c : candidates) {
      continuations.push_back(c.full_text.substr(prefix.size()));
      joint.push_back(prefix_logprob + mock.score(prefix, continuations.back()));
    }
    const double top = *std::max_element(joint.begin(), joint.end());
    std::size_t best = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (joint[i] == top && (best == candidates.size() || continuations[i] < continuations[best])) best = i;
    }
    if (std::count(joint.begin(), joint.end(), top) > 1) ++ties;
    if (prediction.chosen_index != best) {
      return "query " + std::to_string(q) + ": continuation argmax " + prediction.chosen_label +
             ", joint argmax " + candidates[best].candidate_label;
    }
  }
  if (ties == 0) return "no tied query was exercised";
  return std::nullopt;
}

// ---- 5: replay interleaving ----------------------------------------------------

Outcome replay_interleaving() {
  for (const std::size_t batch : {2, 8, 32}) {
    for (const std::uint64_t seed : {0, 1, 99}) {
      const auto batches = interleave_replay(64, 64, {64, seed}, batch, 1);
      std::vector<int> seen(64, 0);
      std::set<std::size_t> old_used;
      for (std::size_t b = 0; b < batches.size(); ++b) {
        const auto& items = batches[b].items;
        if (items.size() != batch) {
          return "batch size " + std::to_string(batch) + ": batch " + std::to_string(b) + " has " +
                 std::to_string(items.size()) + " items";
        }
        for (std::size_t i = 0; i < items.size(); ++i) {
          if (items[i].from_old != (i % 2 == 0)) {
            return "batch size " + std::to_string(batch) + ": position " + std::to_string(i) +
                   " of batch " + std::to_string(b) + " breaks old/new alternation";
          }
          if (items[i].from_old) {
            old_used.insert(items[i].index);
          } else {
            ++seen.at(items[i].index);
          }
        }
      }
      if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
        return "batch size " + std::to_string(batch) + ": a new sample is not covered exactly once";
      }
      if (old_used.size() != 64) return "batch size " + std::to_string(batch) + ": old sample incomplete";
    }
  }
  return std::nullopt;
}

// ---- 6: instruction data determinism ------------------------------------------

Outcome instruct_determinism() {
  const auto pairs = load_parallel(data_dir() / "parallel_200.jsonl", FileFormat::jsonl);
  GenerateOptions options;
  options.objectives = {Objective::tlm, Objective::mt, Objective::xss, Objective::mlm};
  options.seed = 42;
  const auto samples = generate_dataset(pairs, options);
  std::ostringstream out;
  write_instruct_jsonl(out, samples);
  std::string golden = read_file(data_dir() / "golden" / "instruct_seed42.sha256");
  golden.erase(golden.find_last_not_of(" \n") + 1);
  if (const auto digest = sha256_hex(out.str()); digest != golden) return "sha256 " + digest + " != golden";

  std::map<std::string, const ParallelPair*> by_id;
  for (const auto& p : pairs) by_id[p.id] = &p;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  for (const auto& s : samples) {
    if (s.objective != Objective::xss) continue;
    if (s.meta.xss_label == "Yes") {
      ++positives;
    } else if (s.meta.xss_label == "No") {
      ++negatives;
      const auto& pair = *by_id.at(s.meta.pair_id);
      if (!s.meta.distractor_id || *s.meta.distractor_id == pair.id) return s.id + ": self distractor";
      const auto& distractor = *by_id.at(*s.meta.distractor_id);
      if (distractor.tgt_text == pair.tgt_text) return s.id + ": distractor repeats the true target";
    } else {
      return s.id + ": xss sample without a Yes/No label";
    }
  }
  if (positives != pairs.size() || negatives != positives) {
    return "xss " + std::to_string(positives) + " positive vs " + std::to_string(negatives) + " negative";
  }
  return std::nullopt;
}

// ---- 7: alignment text ---------------------------------------------------------

Outcome alignment_text() {
  const auto registry = LabelRegistry::load(source_dir() / "data" / "label_sets.json");
  const std::string expected = "In French, negative means négatif, neutral means neutre, and positive means positif";
  const auto got = build_label_alignment("sentiment", LanguageTag("eng"), LanguageTag("fra"), registry);
  if (got != expected) return "label alignment \"" + got + "\"";

  std::mt19937_64 gen(707);
  const std::vector<std::string> vocab{"halo", "dunia", "rumah", "makan", "world", "house", "eat", "été", "ሰላም"};
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1), len(1, 5), count(1, 6);
  for (int trial = 0; trial < 100; ++trial) {
    AlignmentPairs pairs;
    std::vector<std::pair<std::string, std::string>> items;
    for (std::size_t i = count(gen); i > 0; --i) {
      std::string t, s;
      for (std::size_t j = len(gen); j > 0; --j) t += (t.empty() ? "" : " ") + vocab[pick(gen)];
      for (std::size_t j = len(gen); j > 0; --j) s += (s.empty() ? "" : " ") + vocab[pick(gen)];
      items.emplace_back(t, s);
      pairs.pairs.push_back({"p" + std::to_string(i), s, t, LanguageTag("eng"), LanguageTag("ind")});
      pairs.scores.push_back(1.0);
    }
    const auto text = build_query_alignment(pairs);
    const auto parsed = oracle::parse_query_alignment(text);
    if (!parsed || *parsed != items) return "trial " + std::to_string(trial) + ": \"" + text + "\"";
  }
  return std::nullopt;
}

// ---- 8: synthetic cross-lingual ICL behaviour ---------------------------------

struct SyntheticTask {
  LabelRegistry registry;
  LabeledDataset d_src;
  LabeledDataset queries;
  FileEmbeddingProvider embeddings;
};

// Three latent classes with clustered embeddings. The lexicographically
// smallest source label is the least frequent query class, so a scorer that
// falls back to tie-breaking favours the minority.
SyntheticTask synthetic_task() {
  SyntheticTask t;
  const std::vector<std::string> src_labels{"amber", "cobalt", "jade"};
  const std::vector<std::string> tgt_labels{"ambar", "kobalt", "giok"};
  t.registry.add({"synthetic", LanguageTag("eng"), src_labels});
  t.registry.add({"synthetic", LanguageTag("ind"), tgt_labels});
  std::mt19937_64 gen(808);
  std::normal_distribution<double> g(0.0, 1.0);
  const std::size_t dim = 8;
  std::vector<std::vector<double>> centroid(3, std::vector<double>(dim));
  for (auto& c : centroid) {
    for (auto& x : c) x = 2.0 * g(gen);
  }
  auto sample = [&](std::size_t cls) {
    std::vector<double> v = centroid[cls];
    for (auto& x : v) x += 0.8 * g(gen);
    return DenseVector(v);
  };
  auto text = [&] { return random_texts(gen, 1, 200).front(); };
  for (std::size_t i = 0; i < 300; ++i) {
    const std::size_t cls = i % 3;
    const std::string id = "s" + std::to_string(1000 + i);
    t.d_src.push_back({id, text(), LanguageTag("eng"), src_labels[cls]});
    t.embeddings.insert(id, sample(cls));
  }
  for (std::size_t i = 0; i < 200; ++i) {
    const std::size_t cls = i % 5 == 0 ? 0 : 1 + i % 2;
    const std::string id = "q" + std::to_string(1000 + i);
    t.queries.push_back({id, text(), LanguageTag("ind"), tgt_labels[cls]});
    t.embeddings.insert(id, sample(cls));
  }
  return t;
}

// Rewards the label that holds a strict plurality among the in-context
// exemplars, read from their "? <label>\n" answer lines.
MockScoringClient majority_scorer(const std::vector<std::string>& labels) {
  MockScoringClient client(-10.0);
  client.add_rule(MockScoringClient::RuleFn(
      [labels](std::string_view prompt, std::string_view continuation) -> std::optional<double> {
        std::map<std::string, std::size_t> votes;
        for (const auto& l : labels) {
          const std::string needle = "? " + l + "\n";
          for (auto pos = prompt.find(needle); pos != std::string_view::npos;
               pos = prompt.find(needle, pos + 1)) {
            ++votes[l];
          }
        }
        std::string winner;
        std::size_t top = 0;
        bool unique = false;
        for (const auto& [label, n] : votes) {
          if (n > top) {
            winner = label;
            top = n;
            unique = true;
          } else if (n == top) {
            unique = false;
          }
        }
        if (unique && continuation == winner) return -1.0;
        return std::nullopt;
      }));
  return client;
}

double synthetic_accuracy(const SyntheticTask& t, std::optional<RetrievalStrategy> strategy) {
  TaskConfig config;
  config.task = "synthetic";
  config.templates = {0};
  config.strategy = std::move(strategy);
  auto client = majority_scorer(t.registry.at("synthetic", LanguageTag("eng")).labels);
  TaskResources resources;
  resources.registry = &t.registry;
  resources.d_src = &t.d_src;
  resources.embeddings = &t.embeddings;
  resources.client = &client;
  const auto run = run_task(t.queries, config, resources);
  std::vector<std::string> gold, pred;
  for (const auto& s : run.per_template.at(0).scored) {
    gold.push_back(s.gold);
    pred.push_back(s.predicted);
  }
  return accuracy(gold, pred);
}

Outcome synthetic_icl() {
  const auto task = synthetic_task();
  RetrievalStrategy semantic;
  semantic.kind = StrategyKind::semantic;
  semantic.similarity.method = Method::embedding;
  RetrievalStrategy random;
  random.kind = StrategyKind::random;
  random.seed = 7;
  const double zero = synthetic_accuracy(task, std::nullopt);
  const double rnd = synthetic_accuracy(task, random);
  const double sem = synthetic_accuracy(task, semantic);
  if (synthetic_accuracy(task, semantic) != sem) return "semantic run is not deterministic";
  std::cout << "    accuracy: semantic " << sem << ", random " << rnd << ", zero-shot " << zero << '\n';
  if (!(sem >= rnd + 0.10)) return "semantic " + str(sem) + " < random " + str(rnd) + " + 0.10";
  if (!(rnd >= zero)) return "random " + str(rnd) + " < zero-shot " + str(zero);
  return std::nullopt;
}

// ---- 9: alignment-quality metric ----------------------------------------------

Outcome alignment_quality() {
  const auto lexicon = load_lexicon(data_dir() / "lexicon_ind_eng.tsv");
  const auto identity = FileEmbeddingProvider::load(data_dir() / "lexicon_identity_vectors.jsonl");
  for (const std::size_t k : {1, 10}) {
    const auto r = word_retrieval_accuracy(lexicon, identity, k);
    if (r.accuracy_at_k != 1.0 || r.n_missing != 0) {
      return "identity vectors: accuracy@" + std::to_string(k) + " = " + str(r.accuracy_at_k);
    }
  }

  Lexicon random_lexicon{LanguageTag("ind"), LanguageTag("eng"), false, {}};
  FileEmbeddingProvider provider;
  std::map<std::string, std::vector<double>> src, tgt;
  std::mt19937_64 gen(909);
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t i = 0; i < 50; ++i) {
    const std::string s = "kata" + std::to_string(i), t = "word" + std::to_string(i);
    random_lexicon.entries.push_back({s, t, random_lexicon.src_lang, random_lexicon.tgt_lang});
    std::vector<double> a(6), b(6);
    for (auto& x : a) x = g(gen);
    for (std::size_t d = 0; d < b.size(); ++d) b[d] = 0.7 * a[d] + g(gen);
    src[s] = a;
    tgt[t] = b;
    provider.insert("ind:" + s, DenseVector(a));
    provider.insert("eng:" + t, DenseVector(b));
  }
  std::vector<std::string> targets;
  for (const auto& [w, v] : tgt) targets.push_back(w);
  for (const std::size_t k : {1, 3, 5, 10, 50}) {
    std::size_t hits = 0;
    for (const auto& e : random_lexicon.entries) {
      std::vector<double> scores;
      for (const auto& w : targets) scores.push_back(oracle::cosine(src[e.src_word], tgt[w]));
      const auto top = oracle::rank_ids(targets, scores, k);
      if (std::find(top.begin(), top.end(), e.tgt_word) != top.end()) ++hits;
    }
    const auto r = word_retrieval_accuracy(random_lexicon, provider, k);
    const double expected = static_cast<double>(hits) / 50.0;
    if (r.hits != hits || r.accuracy_at_k != expected) {
      return "random vectors k " + std::to_string(k) + ": " + std::to_string(r.hits) + " hits vs " +
             std::to_string(hits);
    }
  }
  return std::nullopt;
}

// ---- 10: end-to-end golden -----------------------------------------------------

Outcome end_to_end() {
  testing::TempDir dir;
  const std::string config = (data_dir() / "e2e" / "config.json").string();
  const std::string out = (dir / "report.json").string();
  const char* argv[] = {"xalign", "evaluate", "--config", config.c_str(), "--out", out.c_str()};
  std::ostringstream sink, err;
  if (const int code = run_cli(6, argv, sink, err); code != kExitOk) {
    return "evaluate exited " + std::to_string(code) + ": " + err.str();
  }
  const auto produced = testing::slurp(out);
  if (produced != testing::slurp(data_dir() / "golden" / "report_e2e.json")) {
    return "report differs from the golden";
  }
  const auto report = report_from_json(nlohmann::json::parse(produced));
  if (report.per_template.size() != 3) return "expected 3 templates";
  auto mean = [&](auto field) {
    double sum = 0.0;
    for (const auto& t : report.per_template) sum += t.metrics.*field;
    return sum / static_cast<double>(report.per_template.size());
  };
  if (report.averaged.accuracy != mean(&Metrics::accuracy) ||
      report.averaged.weighted_f1 != mean(&Metrics::weighted_f1) ||
      report.averaged.macro_f1 != mean(&Metrics::macro_f1)) {
    return "averaged metrics are not the mean over templates";
  }
  return std::nullopt;
}

}  // namespace
}  // namespace xalign::acceptance

int main() {
  using namespace xalign::acceptance;
  const std::vector<Criterion> criteria{
      {1, "template fidelity", 1000, template_fidelity},
      {2, "retrieval oracle equivalence", 30000, retrieval_equivalence},
      {3, "metric oracle", 5000, metric_oracle},
      {4, "continuation argmax equals joint argmax", 5000, continuation_argmax},
      {5, "replay interleaving", 1000, replay_interleaving},
      {6, "instruction data determinism", 5000, instruct_determinism},
      {7, "label and query alignment text", 1000, alignment_text},
      {8, "synthetic cross-lingual ICL ordering", 10000, synthetic_icl},
      {9, "alignment-quality metric", 2000, alignment_quality},
      {10, "end-to-end golden report", 10000, end_to_end},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = std::string("exception: ") + e.what();
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (!outcome && ms > c.budget_ms) {
      outcome = "took " + std::to_string(static_cast<long>(ms)) + " ms, budget " +
                std::to_string(static_cast<long>(c.budget_ms)) + " ms";
    }
    std::cout << (outcome ? "[FAIL] " : "[PASS] ") << c.number << ' ' << c.name << " ("
              << static_cast<long>(ms) << " ms)";
    if (outcome) std::cout << ": " << *outcome;
    std::cout << std::endl;
    if (outcome) ++failures;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << '/' << criteria.size()
            << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
