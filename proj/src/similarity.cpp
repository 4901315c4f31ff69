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

#include "xalign/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "xalign/error.hpp"
#include "xalign/text.hpp"

namespace xalign {
namespace {

using TermCounts = std::map<std::uint32_t, double>;

void normalize_l2(SparseVector& v) {
  const double n = v.norm();
  if (n == 0.0) return;
  for (auto& [term, weight] : v.entries) weight /= n;
}

SparseVector to_sparse(const TermCounts& counts) {
  SparseVector v;
  v.entries.reserve(counts.size());
  for (const auto& [term, weight] : counts) {
    if (weight != 0.0) v.entries.emplace_back(term, weight);
  }
  return v;
}

// Scores on the same 2^-40 grid point tie.
double ranking_key(double score) { return std::nearbyint(std::ldexp(score, 40)); }

bool ranks_before(double score_a, const std::string& id_a, double score_b,
                  const std::string& id_b) {
  const double a = ranking_key(score_a);
  const double b = ranking_key(score_b);
  if (a != b) return a > b;
  return id_a < id_b;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::bow: return "bow";
    case Method::tfidf: return "tfidf";
    case Method::embedding: return "embedding";
    case Method::ensemble: return "ensemble";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "bow") return Method::bow;
  if (name == "tfidf") return Method::tfidf;
  if (name == "embedding") return Method::embedding;
  if (name == "ensemble") return Method::ensemble;
  throw ConfigError("unknown similarity method \"" + std::string(name) + "\"");
}

void SimilarityConfig::validate() const {
  if (method != Method::ensemble) return;
  double sum = 0.0;
  for (const auto& [m, w] : ensemble_weights) {
    if (m == Method::ensemble) throw ConfigError("ensemble cannot weight itself");
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ConfigError("ensemble weights must be finite and non-negative");
    }
    sum += w;
  }
  if (!(sum > 0.0)) throw ConfigError("ensemble weights must sum to a positive value");
}

bool SimilarityConfig::needs_embeddings() const {
  if (method == Method::embedding) return true;
  if (method != Method::ensemble) return false;
  const auto it = ensemble_weights.find(Method::embedding);
  return it != ensemble_weights.end() && it->second > 0.0;
}

double SparseVector::norm() const noexcept {
  double sum = 0.0;
  for (const auto& [term, weight] : entries) sum += weight * weight;
  return std::sqrt(sum);
}

double dot(const SparseVector& a, const SparseVector& b) noexcept {
  double sum = 0.0;
  auto ia = a.entries.begin();
  auto ib = b.entries.begin();
  while (ia != a.entries.end() && ib != b.entries.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      sum += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

double cosine(const SparseVector& a, const SparseVector& b) noexcept {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

double cosine(const DenseVector& a, const DenseVector& b) {
  if (a.dim() != b.dim()) {
    throw ValidationError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()));
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) sum += a.values()[i] * b.values()[i];
  return sum / (na * nb);
}

std::vector<std::string> index_terms(std::string_view text) {
  auto tokens = tokenize(text);
  std::erase_if(tokens, [](const std::string& t) { return !has_alphabetic(t); });
  return tokens;
}

std::uint32_t Vocabulary::intern(const std::string& term) {
  const auto [it, inserted] =
      ids_.emplace(term, static_cast<std::uint32_t>(terms_.size()));
  if (inserted) terms_.push_back(term);
  return it->second;
}

std::optional<std::uint32_t> Vocabulary::find(const std::string& term) const {
  const auto it = ids_.find(term);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

TfidfIndex TfidfIndex::build(std::span<const Document> corpus) {
  if (corpus.empty()) throw ValidationError("cannot build a TF-IDF index over an empty corpus");
  TfidfIndex index;
  std::vector<TermCounts> counts;
  counts.reserve(corpus.size());
  std::vector<double> df;
  for (const auto& doc : corpus) {
    TermCounts tf;
    for (const auto& term : index_terms(doc.text)) tf[index.vocab_.intern(term)] += 1.0;
    df.resize(index.vocab_.size(), 0.0);
    for (const auto& [term, count] : tf) df[term] += 1.0;
    counts.push_back(std::move(tf));
    index.ids_.push_back(doc.id);
  }
  const double n = static_cast<double>(corpus.size());
  index.idf_.resize(df.size());
  for (std::size_t t = 0; t < df.size(); ++t) {
    index.idf_[t] = std::log((1.0 + n) / (1.0 + df[t])) + 1.0;
  }
  index.vectors_.reserve(counts.size());
  for (auto& tf : counts) {
    for (auto& [term, weight] : tf) weight *= index.idf_[term];
    auto v = to_sparse(tf);
    normalize_l2(v);
    index.vectors_.push_back(std::move(v));
  }
  return index;
}

std::optional<double> TfidfIndex::idf(const std::string& term) const {
  const auto id = vocab_.find(term);
  if (!id) return std::nullopt;
  return idf_[*id];
}

SparseVector TfidfIndex::vectorize(std::string_view text) const {
  TermCounts tf;
  for (const auto& term : index_terms(text)) {
    if (const auto id = vocab_.find(term)) tf[*id] += 1.0;
  }
  for (auto& [term, weight] : tf) weight *= idf_[term];
  auto v = to_sparse(tf);
  normalize_l2(v);
  return v;
}

BowIndex BowIndex::build(std::span<const Document> corpus, bool binary) {
  if (corpus.empty()) throw ValidationError("cannot build a BoW index over an empty corpus");
  BowIndex index;
  index.binary_ = binary;
  for (const auto& doc : corpus) {
    TermCounts tf;
    for (const auto& term : index_terms(doc.text)) {
      auto& c = tf[index.vocab_.intern(term)];
      c = binary ? 1.0 : c + 1.0;
    }
    index.vectors_.push_back(to_sparse(tf));
  }
  return index;
}

SparseVector BowIndex::vectorize(std::string_view text) const {
  TermCounts tf;
  for (const auto& term : index_terms(text)) {
    if (const auto id = vocab_.find(term)) {
      auto& c = tf[*id];
      c = binary_ ? 1.0 : c + 1.0;
    }
  }
  return to_sparse(tf);
}

std::vector<double> min_max_normalize(std::span<const double> scores) {
  std::vector<double> out(scores.size(), 0.0);
  if (scores.empty()) return out;
  const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  const double min = *lo;
  const double range = *hi - min;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = (scores[i] - min) / range;
  return out;
}

std::vector<RankedCandidate> rank_top_k(std::span<const std::string> ids,
                                        std::span<const double> scores, std::size_t k) {
  if (k == 0) throw ValidationError("k must be ≥ 1");
  if (ids.size() != scores.size()) throw ValidationError("ids and scores differ in length");
  std::vector<std::size_t> order(ids.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t keep = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                    order.end(), [&](std::size_t a, std::size_t b) {
                      return ranks_before(scores[a], ids[a], scores[b], ids[b]);
                    });
  std::vector<RankedCandidate> out;
  out.reserve(keep);
  for (std::size_t r = 0; r < keep; ++r) {
    out.push_back({ids[order[r]], scores[order[r]], r + 1});
  }
  return out;
}

CandidatePool::CandidatePool(std::vector<Candidate> candidates, SimilarityConfig config,
                             const EmbeddingProvider* embeddings)
    : candidates_(std::move(candidates)), config_(std::move(config)), embeddings_(embeddings) {
  config_.validate();
  if (candidates_.empty()) throw ValidationError("empty candidate set");
  std::unordered_set<std::string> seen;
  std::vector<Document> docs;
  docs.reserve(candidates_.size());
  for (auto& c : candidates_) {
    if (!seen.insert(c.id).second) throw ValidationError("duplicate candidate id " + c.id);
    if (c.embedding_key.empty()) c.embedding_key = c.id;
    ids_.push_back(c.id);
    docs.push_back({c.id, c.text});
  }

  auto weight_of = [&](Method m) {
    if (config_.method == m) return 1.0;
    if (config_.method != Method::ensemble) return 0.0;
    const auto it = config_.ensemble_weights.find(m);
    return it == config_.ensemble_weights.end() ? 0.0 : it->second;
  };
  if (weight_of(Method::tfidf) > 0.0) tfidf_ = TfidfIndex::build(docs);
  if (weight_of(Method::bow) > 0.0) bow_ = BowIndex::build(docs, config_.binary_bow);
  if (weight_of(Method::embedding) > 0.0) {
    if (embeddings_ == nullptr) {
      throw ConfigError("similarity method requires an embedding provider");
    }
    dense_.reserve(candidates_.size());
    for (const auto& c : candidates_) {
      try {
        dense_.push_back(embeddings_->embed(c.embedding_key, c.text));
      } catch (const MissingEmbeddingError& e) {
        throw MissingEmbeddingError(c.id == e.key() ? c.id : c.id + " (key " + e.key() + ")");
      }
      if (dense_.back().dim() != dense_.front().dim()) {
        throw ValidationError("embedding for " + c.id + " has dim " +
                              std::to_string(dense_.back().dim()) + ", expected " +
                              std::to_string(dense_.front().dim()));
      }
    }
  }
}

DenseVector CandidatePool::query_vector(const SimilarityQuery& query) const {
  if (embeddings_ == nullptr) throw ConfigError("no embedding provider configured");
  return embeddings_->embed(query.embedding_key, query.text);
}

std::vector<double> CandidatePool::method_scores(Method method,
                                                 const SimilarityQuery& query) const {
  std::vector<double> out(candidates_.size(), 0.0);
  switch (method) {
    case Method::tfidf: {
      if (!tfidf_) throw ConfigError("tfidf index not built for this pool");
      const auto q = tfidf_->vectorize(query.text);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = cosine(q, tfidf_->vector(i));
      break;
    }
    case Method::bow: {
      if (!bow_) throw ConfigError("bow index not built for this pool");
      const auto q = bow_->vectorize(query.text);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = cosine(q, bow_->vector(i));
      break;
    }
    case Method::embedding: {
      if (dense_.empty()) throw ConfigError("embeddings not loaded for this pool");
      const auto q = query_vector(query);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = cosine(q, dense_[i]);
      break;
    }
    case Method::ensemble:
      throw ConfigError("method_scores expects a base method");
  }
  return out;
}

std::vector<double> CandidatePool::scores(const SimilarityQuery& query) const {
  if (config_.method != Method::ensemble) return method_scores(config_.method, query);
  std::vector<double> total(candidates_.size(), 0.0);
  double weight_sum = 0.0;
  for (const Method m : {Method::tfidf, Method::bow, Method::embedding}) {
    const auto it = config_.ensemble_weights.find(m);
    if (it == config_.ensemble_weights.end() || it->second <= 0.0) continue;
    const auto raw = method_scores(m, query);
    const auto normalized = min_max_normalize(raw);
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += it->second * normalized[i];
    weight_sum += it->second;
  }
  for (auto& s : total) s /= weight_sum;
  return total;
}

double CandidatePool::score(const SimilarityQuery& query,
                            std::string_view candidate_id) const {
  const auto it = std::find(ids_.begin(), ids_.end(), candidate_id);
  if (it == ids_.end()) {
    throw ValidationError("unknown candidate id " + std::string(candidate_id));
  }
  return scores(query)[static_cast<std::size_t>(it - ids_.begin())];
}

std::vector<RankedCandidate> CandidatePool::top_k(const SimilarityQuery& query,
                                                  std::size_t k) const {
  const auto s = scores(query);
  return rank_top_k(ids_, s, k);
}

}  // namespace xalign
