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

#include <cmath>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "xalign/error.hpp"
#include "xalign/similarity.hpp"

namespace xalign {
namespace {

std::vector<Candidate> make_candidates(const std::vector<std::string>& texts) {
  std::vector<Candidate> out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    out.push_back({"c" + std::to_string(100 + i), texts[i], {}});
  }
  return out;
}

std::vector<std::string> random_texts(std::mt19937_64& gen, std::size_t n, std::size_t vocab) {
  std::uniform_int_distribution<std::size_t> word(0, vocab - 1);
  std::uniform_int_distribution<std::size_t> len(1, 8);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    for (std::size_t j = len(gen); j > 0; --j) {
      if (!text.empty()) text += ' ';
      text += "w" + std::string(1, static_cast<char>('a' + word(gen) % 26)) +
              std::string(1, static_cast<char>('a' + word(gen) / 26 % 26));
    }
    out.push_back(text);
  }
  return out;
}

FileEmbeddingProvider random_vectors(std::mt19937_64& gen, const std::vector<std::string>& keys,
                                     std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  FileEmbeddingProvider provider;
  for (const auto& k : keys) {
    std::vector<double> v(dim);
    for (auto& x : v) x = g(gen);
    provider.insert(k, DenseVector(v));
  }
  return provider;
}

SimilarityConfig only(Method m) {
  SimilarityConfig c;
  c.method = m;
  return c;
}

TEST(Tfidf, SingleDocumentIdfIsOne) {
  const std::vector<Document> docs{{"d", "halo dunia halo"}};
  const auto index = TfidfIndex::build(docs);
  EXPECT_DOUBLE_EQ(*index.idf("halo"), 1.0);
  EXPECT_DOUBLE_EQ(*index.idf("dunia"), 1.0);
}

TEST(Tfidf, ToyCorpusMatchesBruteForce) {
  const std::vector<std::string> texts = {"the cat sat on the mat", "the dog sat", "a cat and a dog",
                                          "mat mat mat", "quiet evening"};
  std::vector<Document> docs;
  for (std::size_t i = 0; i < texts.size(); ++i) docs.push_back({"d" + std::to_string(i), texts[i]});
  const auto index = TfidfIndex::build(docs);
  const oracle::BruteTfidf brute(texts);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto expected = brute.weights(texts[i]);
    double norm = 0.0;
    for (const auto& [t, w] : expected) norm += w * w;
    norm = std::sqrt(norm);
    const auto& got = index.vector(i);
    ASSERT_EQ(got.entries.size(), expected.size());
    for (const auto& [term, weight] : got.entries) {
      const auto& name = index.vocabulary().term(term);
      EXPECT_NEAR(weight, expected.at(name) / norm, 1e-9) << name;
    }
  }
}

TEST(Tfidf, NonAlphabeticDocumentIsDegenerate) {
  const std::vector<Document> docs{{"a", "123 456 !!"}, {"b", "halo"}};
  const auto index = TfidfIndex::build(docs);
  EXPECT_TRUE(index.degenerate(0));
  EXPECT_FALSE(index.degenerate(1));
  EXPECT_THROW(TfidfIndex::build(std::vector<Document>{}), ValidationError);
}

TEST(Cosine, SelfOrthogonalAndRandom) {
  const DenseVector v({0.3, -1.2, 4.0});
  EXPECT_NEAR(cosine(v, v), 1.0, 1e-15);
  EXPECT_EQ(cosine(DenseVector({1.0, 0.0}), DenseVector({0.0, 1.0})), 0.0);
  EXPECT_THROW(cosine(DenseVector({1.0}), DenseVector({1.0, 2.0})), ValidationError);
  std::mt19937_64 gen(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(10), b(10);
    for (auto& x : a) x = g(gen);
    for (auto& x : b) x = g(gen);
    EXPECT_NEAR(cosine(DenseVector(a), DenseVector(b)), oracle::cosine(a, b), 1e-12);
  }
}

TEST(Score, IdenticalCandidateHasMethodMaximum) {
  const std::vector<std::string> texts = {"red apple pie", "green apple", "blue sky today",
                                          "apple pie recipe"};
  std::mt19937_64 gen(5);
  auto provider = random_vectors(gen, {"c100", "c101", "c102", "c103"}, 6);
  for (const Method m : {Method::bow, Method::tfidf, Method::embedding}) {
    const CandidatePool pool(make_candidates(texts), only(m), &provider);
    const SimilarityQuery query{texts[0], "c100"};
    const auto s = pool.scores(query);
    EXPECT_EQ(*std::max_element(s.begin(), s.end()), s[0]) << to_string(m);
    EXPECT_EQ(pool.top_k(query, 1).front().candidate_id, "c100");
  }
}

TEST(Score, DegenerateEnsembleWeightsEqualNormalizedTfidf) {
  const std::vector<std::string> texts = {"one two three", "two three four", "five six",
                                          "one one two"};
  SimilarityConfig config;
  config.ensemble_weights = {{Method::tfidf, 1.0}, {Method::bow, 0.0}, {Method::embedding, 0.0}};
  const CandidatePool ensemble(make_candidates(texts), config);
  const CandidatePool tfidf(make_candidates(texts), only(Method::tfidf));
  const SimilarityQuery q{"one two", ""};
  const auto raw = tfidf.scores(q);
  EXPECT_EQ(ensemble.scores(q), min_max_normalize(raw));
}

TEST(Score, UniformEnsembleMatchesHandComputedMean) {
  std::mt19937_64 gen(21);
  const auto texts = random_texts(gen, 20, 30);
  std::vector<std::string> keys;
  for (std::size_t i = 0; i < texts.size(); ++i) keys.push_back("c" + std::to_string(100 + i));
  keys.push_back("query");
  auto provider = random_vectors(gen, keys, 8);
  const CandidatePool pool(make_candidates(texts), SimilarityConfig{}, &provider);
  const std::string query_text = texts[3] + " " + texts[7];
  const auto qv = provider.embed("query", "").values();
  std::vector<double> emb;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    emb.push_back(oracle::cosine(qv, provider.embed(keys[i], "").values()));
  }
  const auto expected = oracle::ensemble({{1.0, oracle::tfidf_scores(texts, query_text)},
                                          {1.0, oracle::bow_scores(texts, query_text)},
                                          {1.0, emb}});
  const auto got = pool.scores({query_text, "query"});
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expected[i], 1e-9);
  EXPECT_NEAR(pool.score({query_text, "query"}, "c105"), expected[5], 1e-9);
}

TEST(Score, MissingEmbeddingNamesCandidate) {
  FileEmbeddingProvider provider;
  provider.insert("c100", DenseVector({1.0, 0.0}));
  try {
    CandidatePool pool(make_candidates({"a b", "c d"}), only(Method::embedding), &provider);
    FAIL() << "expected MissingEmbeddingError";
  } catch (const MissingEmbeddingError& e) {
    EXPECT_NE(std::string(e.what()).find("c101"), std::string::npos);
  }
}

TEST(MinMax, EndpointsAndConstant) {
  const std::vector<double> v{0.2, 0.8, 0.5};
  const auto n = min_max_normalize(v);
  ASSERT_EQ(n.size(), 3u);
  EXPECT_EQ(n[0], 0.0);
  EXPECT_EQ(n[1], 1.0);
  EXPECT_NEAR(n[2], 0.5, 1e-15);
  const std::vector<double> c{0.4, 0.4};
  EXPECT_EQ(min_max_normalize(c), (std::vector<double>{0.0, 0.0}));
}

TEST(TopK, ExactQueryTextRanksFirst) {
  const std::vector<std::string> texts = {"alpha beta", "gamma delta epsilon", "beta gamma"};
  const CandidatePool pool(make_candidates(texts), only(Method::tfidf));
  const auto top = pool.top_k({"gamma delta epsilon", ""}, 1);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(top[0].candidate_id, "c101");
  EXPECT_EQ(top[0].rank, 1u);
}

TEST(TopK, KLargerThanPoolReturnsAll) {
  const CandidatePool pool(make_candidates({"a b", "b c", "c d"}), only(Method::bow));
  EXPECT_EQ(pool.top_k({"b", ""}, 10).size(), 3u);
  EXPECT_THROW(pool.top_k({"b", ""}, 0), ValidationError);
}

TEST(TopK, TiesBreakByAscendingId) {
  const std::vector<std::string> ids{"b", "a", "c"};
  const std::vector<double> scores{0.5, 0.5, 0.5};
  const auto top = rank_top_k(ids, scores, 3);
  EXPECT_EQ(top[0].candidate_id, "a");
  EXPECT_EQ(top[1].candidate_id, "b");
  EXPECT_EQ(top[2].candidate_id, "c");
}

TEST(TopK, RoundingNoiseTies) {
  const std::vector<std::string> ids{"b", "a"};
  const std::vector<double> scores{0.1 + 0.2, 0.3};
  ASSERT_NE(scores[0], scores[1]);
  EXPECT_EQ(rank_top_k(ids, scores, 1)[0].candidate_id, "a");
  const std::vector<double> apart{0.3 + 1e-9, 0.3};
  EXPECT_EQ(rank_top_k(ids, apart, 1)[0].candidate_id, "b");
}

TEST(TopK, ThousandCandidatesMatchBruteForce) {
  std::mt19937_64 gen(99);
  const auto texts = random_texts(gen, 1000, 40);
  const CandidatePool pool(make_candidates(texts), only(Method::tfidf));
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < texts.size(); ++i) ids.push_back("c" + std::to_string(100 + i));
  for (int q = 0; q < 5; ++q) {
    const std::string query = random_texts(gen, 1, 40).front();
    const auto expected = oracle::rank_ids(ids, oracle::tfidf_scores(texts, query), 3);
    std::vector<std::string> got;
    for (const auto& r : pool.top_k({query, ""}, 3)) got.push_back(r.candidate_id);
    EXPECT_EQ(got, expected) << query;
  }
}

TEST(TopK, DeterministicAcrossThreads) {
  std::mt19937_64 gen(3);
  const auto texts = random_texts(gen, 300, 20);
  const CandidatePool pool(make_candidates(texts), only(Method::bow));
  const SimilarityQuery query{texts[10], ""};
  const auto reference = pool.top_k(query, 10);
  std::vector<std::vector<RankedCandidate>> results(8);
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < results.size(); ++t) {
    threads.emplace_back([&, t] { results[t] = pool.top_k(query, 10); });
  }
  for (auto& th : threads) th.join();
  for (const auto& r : results) EXPECT_EQ(r, reference);
}

TEST(TopK, EnsembleRespectsDominance) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto texts = random_texts(gen, 40, 15);
    std::vector<std::string> keys;
    for (std::size_t i = 0; i < texts.size(); ++i) keys.push_back("c" + std::to_string(100 + i));
    keys.push_back("q");
    auto provider = random_vectors(gen, keys, 4);
    const CandidatePool pool(make_candidates(texts), SimilarityConfig{}, &provider);
    const SimilarityQuery query{texts[0], "q"};
    const auto a = pool.method_scores(Method::tfidf, query);
    const auto b = pool.method_scores(Method::bow, query);
    const auto c = pool.method_scores(Method::embedding, query);
    const auto total = pool.scores(query);
    for (std::size_t i = 0; i < texts.size(); ++i) {
      for (std::size_t j = 0; j < texts.size(); ++j) {
        if (a[i] >= a[j] && b[i] >= b[j] && c[i] >= c[j]) {
          EXPECT_GE(total[i], total[j]);
        }
      }
    }
  }
}

TEST(SimilarityConfig, RejectsBadWeights) {
  SimilarityConfig config;
  config.ensemble_weights = {{Method::tfidf, 0.0}, {Method::bow, 0.0}};
  EXPECT_THROW(config.validate(), ConfigError);
  EXPECT_THROW(parse_method("cosine"), ConfigError);
  EXPECT_EQ(parse_method("tfidf"), Method::tfidf);
}

}  // namespace
}  // namespace xalign
