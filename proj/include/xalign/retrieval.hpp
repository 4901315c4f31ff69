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

// Exemplar retrieval for cross-lingual in-context learning.
//
//   random          k seeded samples of d_src (seed mixed with the query id)
//   semantic        top-k of d_src scored directly against the query text
//   translation     best d_para pair by query~tgt_text, then top-k of d_src
//                   against that pair's src_text
//   translate_test  query machine-translated into the d_src language, then
//                   top-k of d_src against the translation
//
// Exemplars without a label are dropped before retrieval. Result lists are in
// rank order (most similar first).

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xalign/clients.hpp"
#include "xalign/corpus.hpp"
#include "xalign/similarity.hpp"

namespace xalign {

enum class StrategyKind { random, semantic, translation, translate_test };

std::string_view to_string(StrategyKind kind);
StrategyKind parse_strategy_kind(std::string_view name);

struct RetrievalStrategy {
  StrategyKind kind = StrategyKind::semantic;
  SimilarityConfig similarity;
  std::size_t k = 3;
  std::optional<std::uint64_t> seed;  // required by random

  void validate() const;
};

struct Provenance {
  StrategyKind strategy = StrategyKind::semantic;
  double score = 0.0;
  std::size_t rank = 0;
};

struct ExemplarSet {
  std::vector<LabeledExample> exemplars;
  std::vector<Provenance> provenance;  // parallel to exemplars

  std::size_t size() const noexcept { return exemplars.size(); }
  bool empty() const noexcept { return exemplars.empty(); }
};

struct AlignmentPairs {
  std::vector<ParallelPair> pairs;
  std::vector<double> scores;  // parallel to pairs

  std::size_t size() const noexcept { return pairs.size(); }
};

struct RetrievalResult {
  ExemplarSet exemplars;
  std::optional<std::string> translated_query;  // translate_test only
  std::optional<std::string> bridge_pair_id;    // translation only
};

/// Retrieval over one immutable exemplar dataset. Candidate pools are built
/// once at construction; retrieve() is const and safe to call concurrently
/// (the MT client, if any, must be thread-safe).
class ExemplarRetriever {
 public:
  /// `d_src` must be monolingual. `d_para` is only needed for translation
  /// retrieval and `mt` only for translate_test.
  ExemplarRetriever(const LabeledDataset& d_src, RetrievalStrategy strategy,
                    const EmbeddingProvider* embeddings = nullptr,
                    std::span<const ParallelPair> d_para = {}, MtClient* mt = nullptr);

  const LanguageTag& source_lang() const noexcept { return source_lang_; }
  const RetrievalStrategy& strategy() const noexcept { return strategy_; }

  RetrievalResult retrieve(const LabeledExample& query) const;

 private:
  ExemplarSet from_ranking(const std::vector<RankedCandidate>& ranking) const;
  const CandidatePool& bridge_pool(const LanguageTag& query_lang) const;

  std::vector<LabeledExample> exemplars_;
  std::map<std::string, std::size_t> by_id_;
  RetrievalStrategy strategy_;
  LanguageTag source_lang_;
  const EmbeddingProvider* embeddings_;
  MtClient* mt_;
  std::unique_ptr<CandidatePool> src_pool_;
  // Translation retrieval: one pool of d_para target sides per query language.
  std::map<LanguageTag, std::vector<ParallelPair>> bridge_pairs_;
  std::map<LanguageTag, std::unique_ptr<CandidatePool>> bridge_pools_;
};

ExemplarSet retrieve_random(const LabeledExample& query, const LabeledDataset& d_src,
                            const RetrievalStrategy& strategy);

ExemplarSet retrieve_semantic(const LabeledExample& query, const LabeledDataset& d_src,
                              const RetrievalStrategy& strategy,
                              const EmbeddingProvider* embeddings = nullptr);

ExemplarSet retrieve_translation(const LabeledExample& query, const LabeledDataset& d_src,
                                 std::span<const ParallelPair> d_para,
                                 const RetrievalStrategy& strategy,
                                 const EmbeddingProvider* embeddings = nullptr);

struct TranslateTestResult {
  ExemplarSet exemplars;
  std::string translated_query;
};

/// Errors from the MT client are rethrown as ClientError; nothing partial is
/// returned.
TranslateTestResult retrieve_translate_test(const LabeledExample& query,
                                            const LabeledDataset& d_src, MtClient& mt,
                                            const RetrievalStrategy& strategy,
                                            const EmbeddingProvider* embeddings = nullptr);

/// Top-k pairs with tgt_lang == query.lang by monolingual similarity between
/// the query text and each pair's tgt_text.
AlignmentPairs retrieve_alignment_pairs(const LabeledExample& query,
                                        std::span<const ParallelPair> d_para, std::size_t k,
                                        const SimilarityConfig& similarity = {},
                                        const EmbeddingProvider* embeddings = nullptr);

/// Reusable form of retrieve_alignment_pairs with per-language pools.
class AlignmentRetriever {
 public:
  AlignmentRetriever(std::span<const ParallelPair> d_para, std::size_t k,
                     SimilarityConfig similarity = {},
                     const EmbeddingProvider* embeddings = nullptr);

  AlignmentPairs retrieve(const LabeledExample& query) const;

 private:
  std::size_t k_;
  std::map<LanguageTag, std::vector<ParallelPair>> pairs_;
  std::map<LanguageTag, std::unique_ptr<CandidatePool>> pools_;
};

std::string pair_key(const ParallelPair& pair, bool source_side);

}  // namespace xalign
