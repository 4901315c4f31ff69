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

#include "xalign/retrieval.hpp"

#include <algorithm>

#include "xalign/error.hpp"
#include "xalign/random.hpp"

namespace xalign {
namespace {

void require_k(std::size_t k) {
  if (k == 0) throw ValidationError("k must be ≥ 1");
}

std::vector<Candidate> pair_candidates(const std::vector<ParallelPair>& pairs) {
  std::vector<Candidate> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back({p.id, p.tgt_text, pair_key(p, false)});
  return out;
}

std::string lang_pair_name(const LanguageTag& src, const LanguageTag& tgt) {
  return src.code() + "->" + tgt.code();
}

}  // namespace

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::random: return "random";
    case StrategyKind::semantic: return "semantic";
    case StrategyKind::translation: return "translation";
    case StrategyKind::translate_test: return "translate_test";
  }
  return "?";
}

StrategyKind parse_strategy_kind(std::string_view name) {
  if (name == "random") return StrategyKind::random;
  if (name == "semantic") return StrategyKind::semantic;
  if (name == "translation") return StrategyKind::translation;
  if (name == "translate_test") return StrategyKind::translate_test;
  throw ConfigError("unknown retrieval strategy \"" + std::string(name) + "\"");
}

void RetrievalStrategy::validate() const {
  require_k(k);
  if (kind == StrategyKind::random && !seed) {
    throw ConfigError("random retrieval requires an explicit seed");
  }
  similarity.validate();
}

std::string pair_key(const ParallelPair& pair, bool source_side) {
  return pair.id + (source_side ? "/src" : "/tgt");
}

ExemplarRetriever::ExemplarRetriever(const LabeledDataset& d_src, RetrievalStrategy strategy,
                                     const EmbeddingProvider* embeddings,
                                     std::span<const ParallelPair> d_para, MtClient* mt)
    : strategy_(std::move(strategy)), embeddings_(embeddings), mt_(mt) {
  strategy_.validate();
  for (const auto& e : d_src) {
    if (e.label.empty()) continue;
    if (source_lang_.empty()) source_lang_ = e.lang;
    if (e.lang != source_lang_) {
      throw ValidationError("exemplar dataset mixes languages " + source_lang_.code() + " and " +
                            e.lang.code() + " (record " + e.id + ")");
    }
    if (!by_id_.emplace(e.id, exemplars_.size()).second) {
      throw ValidationError("duplicate exemplar id " + e.id);
    }
    exemplars_.push_back(e);
  }
  if (exemplars_.empty()) throw ValidationError("exemplar dataset has no labeled records");

  if (strategy_.kind == StrategyKind::translate_test && mt_ == nullptr) {
    throw ConfigError("translate_test retrieval requires an MT client");
  }
  if (strategy_.kind != StrategyKind::random) {
    std::vector<Candidate> candidates;
    candidates.reserve(exemplars_.size());
    for (const auto& e : exemplars_) candidates.push_back({e.id, e.text, e.id});
    src_pool_ = std::make_unique<CandidatePool>(std::move(candidates), strategy_.similarity,
                                                embeddings_);
  }
  if (strategy_.kind == StrategyKind::translation) {
    for (const auto& p : d_para) {
      if (p.src_lang == source_lang_) bridge_pairs_[p.tgt_lang].push_back(p);
    }
    for (const auto& [lang, pairs] : bridge_pairs_) {
      bridge_pools_.emplace(lang, std::make_unique<CandidatePool>(
                                      pair_candidates(pairs), strategy_.similarity, embeddings_));
    }
  }
}

ExemplarSet ExemplarRetriever::from_ranking(const std::vector<RankedCandidate>& ranking) const {
  ExemplarSet out;
  for (const auto& r : ranking) {
    out.exemplars.push_back(exemplars_[by_id_.at(r.candidate_id)]);
    out.provenance.push_back({strategy_.kind, r.score, r.rank});
  }
  return out;
}

const CandidatePool& ExemplarRetriever::bridge_pool(const LanguageTag& query_lang) const {
  const auto it = bridge_pools_.find(query_lang);
  if (it == bridge_pools_.end()) {
    throw ValidationError("no parallel pairs for " + lang_pair_name(source_lang_, query_lang));
  }
  return *it->second;
}

RetrievalResult ExemplarRetriever::retrieve(const LabeledExample& query) const {
  RetrievalResult result;
  switch (strategy_.kind) {
    case StrategyKind::random: {
      Rng rng(mix_seed(*strategy_.seed, query.id));
      const auto picks = sample_indices(exemplars_.size(), strategy_.k, rng);
      for (std::size_t i = 0; i < picks.size(); ++i) {
        result.exemplars.exemplars.push_back(exemplars_[picks[i]]);
        result.exemplars.provenance.push_back({StrategyKind::random, 0.0, i + 1});
      }
      break;
    }
    case StrategyKind::semantic:
      result.exemplars = from_ranking(src_pool_->top_k({query.text, query.id}, strategy_.k));
      break;
    case StrategyKind::translation: {
      const auto& pool = bridge_pool(query.lang);
      const auto best = pool.top_k({query.text, query.id}, 1).front();
      const auto& pairs = bridge_pairs_.at(query.lang);
      const auto& pair = *std::find_if(pairs.begin(), pairs.end(), [&](const ParallelPair& p) {
        return p.id == best.candidate_id;
      });
      result.exemplars =
          from_ranking(src_pool_->top_k({pair.src_text, pair_key(pair, true)}, strategy_.k));
      result.bridge_pair_id = pair.id;
      break;
    }
    case StrategyKind::translate_test: {
      std::string translation;
      try {
        translation = mt_->translate(query.text, query.lang, source_lang_);
      } catch (const ClientError&) {
        throw;
      } catch (const std::exception& e) {
        throw ClientError(std::string("machine translation failed: ") + e.what());
      }
      // An unchanged text keeps the query's own vector; otherwise the
      // translation is looked up under "<query id>/mt".
      const std::string key = translation == query.text ? query.id : query.id + "/mt";
      result.exemplars = from_ranking(src_pool_->top_k({translation, key}, strategy_.k));
      result.translated_query = std::move(translation);
      break;
    }
  }
  return result;
}

ExemplarSet retrieve_random(const LabeledExample& query, const LabeledDataset& d_src,
                            const RetrievalStrategy& strategy) {
  auto s = strategy;
  s.kind = StrategyKind::random;
  return ExemplarRetriever(d_src, std::move(s)).retrieve(query).exemplars;
}

ExemplarSet retrieve_semantic(const LabeledExample& query, const LabeledDataset& d_src,
                              const RetrievalStrategy& strategy,
                              const EmbeddingProvider* embeddings) {
  auto s = strategy;
  s.kind = StrategyKind::semantic;
  return ExemplarRetriever(d_src, std::move(s), embeddings).retrieve(query).exemplars;
}

ExemplarSet retrieve_translation(const LabeledExample& query, const LabeledDataset& d_src,
                                 std::span<const ParallelPair> d_para,
                                 const RetrievalStrategy& strategy,
                                 const EmbeddingProvider* embeddings) {
  auto s = strategy;
  s.kind = StrategyKind::translation;
  return ExemplarRetriever(d_src, std::move(s), embeddings, d_para).retrieve(query).exemplars;
}

TranslateTestResult retrieve_translate_test(const LabeledExample& query,
                                            const LabeledDataset& d_src, MtClient& mt,
                                            const RetrievalStrategy& strategy,
                                            const EmbeddingProvider* embeddings) {
  auto s = strategy;
  s.kind = StrategyKind::translate_test;
  auto result = ExemplarRetriever(d_src, std::move(s), embeddings, {}, &mt).retrieve(query);
  return {std::move(result.exemplars), std::move(*result.translated_query)};
}

AlignmentRetriever::AlignmentRetriever(std::span<const ParallelPair> d_para, std::size_t k,
                                       SimilarityConfig similarity,
                                       const EmbeddingProvider* embeddings)
    : k_(k) {
  require_k(k_);
  similarity.validate();
  for (const auto& p : d_para) pairs_[p.tgt_lang].push_back(p);
  for (const auto& [lang, pairs] : pairs_) {
    pools_.emplace(lang,
                   std::make_unique<CandidatePool>(pair_candidates(pairs), similarity, embeddings));
  }
}

AlignmentPairs AlignmentRetriever::retrieve(const LabeledExample& query) const {
  const auto it = pools_.find(query.lang);
  if (it == pools_.end()) {
    throw ValidationError("no parallel pairs with target language " + query.lang.code());
  }
  const auto& pairs = pairs_.at(query.lang);
  std::map<std::string_view, const ParallelPair*> by_id;
  for (const auto& p : pairs) by_id.emplace(p.id, &p);
  AlignmentPairs out;
  for (const auto& r : it->second->top_k({query.text, query.id}, k_)) {
    out.pairs.push_back(*by_id.at(r.candidate_id));
    out.scores.push_back(r.score);
  }
  return out;
}

AlignmentPairs retrieve_alignment_pairs(const LabeledExample& query,
                                        std::span<const ParallelPair> d_para, std::size_t k,
                                        const SimilarityConfig& similarity,
                                        const EmbeddingProvider* embeddings) {
  require_k(k);
  std::vector<ParallelPair> matching;
  for (const auto& p : d_para) {
    if (p.tgt_lang == query.lang) matching.push_back(p);
  }
  if (matching.empty()) {
    throw ValidationError("no parallel pairs with target language " + query.lang.code());
  }
  return AlignmentRetriever(matching, k, similarity, embeddings).retrieve(query);
}

}  // namespace xalign
