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

// Sparse (bag-of-words, TF-IDF) and dense (embedding) text similarity, the
// min-max ensemble of both, and exact top-k ranking.
//
// Ranking order everywhere: score descending, then candidate id ascending
// (byte-wise).

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xalign/embedding.hpp"

namespace xalign {

enum class Method { bow, tfidf, embedding, ensemble };

std::string_view to_string(Method method);
/// Throws ConfigError for unknown names.
Method parse_method(std::string_view name);

struct SimilarityConfig {
  Method method = Method::ensemble;
  /// Weights of the constituent methods when method == ensemble.
  std::map<Method, double> ensemble_weights{
      {Method::tfidf, 1.0}, {Method::bow, 1.0}, {Method::embedding, 1.0}};
  /// BoW uses presence indicators instead of raw counts.
  bool binary_bow = false;

  void validate() const;
  bool needs_embeddings() const;
};

/// Term-id -> weight, sorted by term id, no zero weights.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  bool empty() const noexcept { return entries.empty(); }
  double norm() const noexcept;
};

double dot(const SparseVector& a, const SparseVector& b) noexcept;
/// 0 when either vector has zero norm.
double cosine(const SparseVector& a, const SparseVector& b) noexcept;
/// Throws ValidationError on dimension mismatch; 0 when either norm is 0.
double cosine(const DenseVector& a, const DenseVector& b);

struct Document {
  std::string id;
  std::string text;
};

/// Index terms are the tokens of `tokenize` that contain an alphabetic code
/// point.
std::vector<std::string> index_terms(std::string_view text);

/// Shared term dictionary of a sparse index.
class Vocabulary {
 public:
  std::uint32_t intern(const std::string& term);
  std::optional<std::uint32_t> find(const std::string& term) const;
  std::size_t size() const noexcept { return terms_.size(); }
  const std::string& term(std::uint32_t id) const { return terms_.at(id); }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> terms_;
};

/// TF-IDF document vectors: tf = raw count, idf = ln((1 + N) / (1 + df)) + 1,
/// each document vector l2-normalized.
class TfidfIndex {
 public:
  /// Throws ValidationError on an empty corpus.
  static TfidfIndex build(std::span<const Document> corpus);

  std::size_t size() const noexcept { return vectors_.size(); }
  const std::string& id(std::size_t i) const { return ids_.at(i); }
  const SparseVector& vector(std::size_t i) const { return vectors_.at(i); }
  /// True when the document has no index terms (zero vector).
  bool degenerate(std::size_t i) const { return vectors_.at(i).empty(); }
  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  double idf(std::uint32_t term) const { return idf_.at(term); }
  std::optional<double> idf(const std::string& term) const;

  /// l2-normalized tf-idf vector of arbitrary text; unknown terms dropped.
  SparseVector vectorize(std::string_view text) const;

 private:
  Vocabulary vocab_;
  std::vector<double> idf_;
  std::vector<std::string> ids_;
  std::vector<SparseVector> vectors_;
};

/// Bag-of-words count (or binary) vectors compared by cosine.
class BowIndex {
 public:
  static BowIndex build(std::span<const Document> corpus, bool binary = false);

  std::size_t size() const noexcept { return vectors_.size(); }
  const SparseVector& vector(std::size_t i) const { return vectors_.at(i); }
  SparseVector vectorize(std::string_view text) const;

 private:
  Vocabulary vocab_;
  bool binary_ = false;
  std::vector<SparseVector> vectors_;
};

struct RankedCandidate {
  std::string candidate_id;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based

  bool operator==(const RankedCandidate&) const = default;
};

/// Maps the minimum to 0 and the maximum to 1. A constant vector maps to all
/// zeros.
std::vector<double> min_max_normalize(std::span<const double> scores);

/// The k best (score desc, id asc) entries, fewer when k exceeds the input.
/// Scores are compared after rounding to the nearest multiple of 2^-40, so
/// scores that differ only by floating-point rounding tie. Throws
/// ValidationError when k == 0.
std::vector<RankedCandidate> rank_top_k(std::span<const std::string> ids,
                                        std::span<const double> scores, std::size_t k);

struct Candidate {
  std::string id;
  std::string text;
  std::string embedding_key;  // empty -> id
};

struct SimilarityQuery {
  std::string text;
  std::string embedding_key;
};

/// Immutable scored candidate set. Sparse indexes and candidate embeddings are
/// built once; const member functions may be called concurrently.
class CandidatePool {
 public:
  /// Throws ValidationError on an empty or id-duplicated candidate list and
  /// MissingEmbeddingError naming the candidate id when a required vector is
  /// absent.
  CandidatePool(std::vector<Candidate> candidates, SimilarityConfig config,
                const EmbeddingProvider* embeddings = nullptr);

  std::size_t size() const noexcept { return candidates_.size(); }
  const Candidate& candidate(std::size_t i) const { return candidates_.at(i); }
  const SimilarityConfig& config() const noexcept { return config_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }

  /// Raw per-candidate similarity of one base method (cosine).
  std::vector<double> method_scores(Method method, const SimilarityQuery& query) const;
  /// Scores under the configured method. For ensemble: each constituent with
  /// positive weight is min-max normalized over the pool, then the weighted
  /// mean is taken.
  std::vector<double> scores(const SimilarityQuery& query) const;
  /// Throws ValidationError for an unknown candidate id.
  double score(const SimilarityQuery& query, std::string_view candidate_id) const;
  std::vector<RankedCandidate> top_k(const SimilarityQuery& query, std::size_t k) const;

 private:
  DenseVector query_vector(const SimilarityQuery& query) const;

  std::vector<Candidate> candidates_;
  std::vector<std::string> ids_;
  SimilarityConfig config_;
  const EmbeddingProvider* embeddings_ = nullptr;
  std::optional<TfidfIndex> tfidf_;
  std::optional<BowIndex> bow_;
  std::vector<DenseVector> dense_;
};

}  // namespace xalign
