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

// Model clients: language-model scoring/generation, machine translation and
// remote embeddings. Every implementation here is safe for concurrent calls.
//
// HTTP protocols (JSON bodies, POST):
//   <scorer>/score      {"prompt", "continuation"}   -> {"logprob"}
//   <scorer>/generate   {"prompt"}                   -> {"text"}
//   <mt>/translate      {"text", "src", "tgt"}       -> {"text"}
//   <embedder>/embed    {"texts": [str]}             -> {"vectors": [[float]]}

#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "xalign/embedding.hpp"
#include "xalign/language.hpp"

namespace xalign {

inline constexpr const char* kScorerUrlEnv = "XALIGN_SCORER_URL";
inline constexpr const char* kMtUrlEnv = "XALIGN_MT_URL";
inline constexpr const char* kEmbedUrlEnv = "XALIGN_EMBED_URL";

class ScoringClient {
 public:
  virtual ~ScoringClient() = default;
  /// Log-probability of `continuation` conditioned on `prompt`.
  virtual double score(const std::string& prompt, const std::string& continuation) = 0;
  virtual std::string generate(const std::string& prompt) = 0;
};

// Rule-table mock. Rules are tried in insertion order; the first match wins and
// unmatched inputs score `floor`. generate() substitutes "{prompt}" in the
// generation template.
class MockScoringClient : public ScoringClient {
 public:
  struct Rule {
    std::vector<std::string> prompt_contains;  // all must occur in the prompt
    std::optional<std::string> continuation;   // exact match when set
    double score = 0.0;
  };
  using RuleFn =
      std::function<std::optional<double>(std::string_view prompt, std::string_view continuation)>;

  explicit MockScoringClient(double floor = -100.0) : floor_(floor) {}

  /// {"floor": num, "generate": str, "rules": [{"prompt_contains": [str],
  ///  "continuation": str, "score": num}]}
  static MockScoringClient from_json(const nlohmann::json& spec);
  static MockScoringClient load(const std::filesystem::path& path);

  MockScoringClient& add_rule(Rule rule);
  MockScoringClient& add_rule(RuleFn rule);
  MockScoringClient& set_generate_template(std::string tmpl);

  double floor() const noexcept { return floor_; }

  double score(const std::string& prompt, const std::string& continuation) override;
  std::string generate(const std::string& prompt) override;

 private:
  double floor_;
  std::string generate_template_ = "{prompt}";
  std::vector<RuleFn> rules_;
};

/// Replays recorded scores from JSONL {"prompt_sha256", "continuation",
/// "logprob"}. Unknown inputs raise ClientError.
class FixtureScoringClient : public ScoringClient {
 public:
  static FixtureScoringClient load(const std::filesystem::path& path);
  static FixtureScoringClient parse(std::istream& in, std::string_view source_name);

  std::size_t size() const noexcept { return scores_.size(); }
  double score(const std::string& prompt, const std::string& continuation) override;
  std::string generate(const std::string& prompt) override;

 private:
  std::map<std::pair<std::string, std::string>, double> scores_;
};

/// Forwards to another client and records every score in fixture format.
class RecordingScoringClient : public ScoringClient {
 public:
  explicit RecordingScoringClient(ScoringClient& inner) : inner_(inner) {}

  double score(const std::string& prompt, const std::string& continuation) override;
  std::string generate(const std::string& prompt) override { return inner_.generate(prompt); }

  /// Fixture JSONL sorted by (prompt_sha256, continuation).
  void write(std::ostream& out) const;

 private:
  ScoringClient& inner_;
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, double> recorded_;
};

/// Base URL split into "scheme://host:port" and a path prefix.
struct HttpEndpoint {
  std::string origin;
  std::string base_path;

  /// Throws ConfigError for URLs without scheme or host.
  static HttpEndpoint parse(std::string_view url);
};

/// POSTs JSON to `endpoint.base_path + path`; throws ClientError carrying the
/// transport error or the HTTP status on failure.
nlohmann::json post_json(const HttpEndpoint& endpoint, const std::string& path,
                         const nlohmann::json& body, double timeout_seconds);

class HttpScoringClient : public ScoringClient {
 public:
  explicit HttpScoringClient(std::string_view url, double timeout_seconds = 60.0)
      : endpoint_(HttpEndpoint::parse(url)), timeout_(timeout_seconds) {}

  double score(const std::string& prompt, const std::string& continuation) override;
  std::string generate(const std::string& prompt) override;

 private:
  HttpEndpoint endpoint_;
  double timeout_;
};

class MtClient {
 public:
  virtual ~MtClient() = default;
  virtual std::string translate(const std::string& text, const LanguageTag& src,
                                const LanguageTag& tgt) = 0;
};

class IdentityMtClient : public MtClient {
 public:
  std::string translate(const std::string& text, const LanguageTag&,
                        const LanguageTag&) override {
    return text;
  }
};

/// JSONL {"text", "src", "tgt", "translation"}; unknown inputs raise
/// ClientError.
class FixtureMtClient : public MtClient {
 public:
  static FixtureMtClient load(const std::filesystem::path& path);
  static FixtureMtClient parse(std::istream& in, std::string_view source_name);

  void insert(const std::string& text, const LanguageTag& src, const LanguageTag& tgt,
              std::string translation);
  std::string translate(const std::string& text, const LanguageTag& src,
                        const LanguageTag& tgt) override;

 private:
  std::map<std::tuple<std::string, std::string, std::string>, std::string> table_;
};

class HttpMtClient : public MtClient {
 public:
  explicit HttpMtClient(std::string_view url, double timeout_seconds = 60.0)
      : endpoint_(HttpEndpoint::parse(url)), timeout_(timeout_seconds) {}

  std::string translate(const std::string& text, const LanguageTag& src,
                        const LanguageTag& tgt) override;

 private:
  HttpEndpoint endpoint_;
  double timeout_;
};

/// Per-run memoization of another MT client.
class MemoizingMtClient : public MtClient {
 public:
  explicit MemoizingMtClient(MtClient& inner) : inner_(inner) {}
  std::string translate(const std::string& text, const LanguageTag& src,
                        const LanguageTag& tgt) override;

 private:
  MtClient& inner_;
  std::mutex mutex_;
  std::map<std::tuple<std::string, std::string, std::string>, std::string> cache_;
};

class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(std::string_view url, double timeout_seconds = 60.0)
      : endpoint_(HttpEndpoint::parse(url)), timeout_(timeout_seconds) {}

  std::vector<DenseVector> embed_batch(const std::vector<std::string>& texts) const;
  DenseVector embed(const std::string& key, const std::string& text) const override;

 private:
  HttpEndpoint endpoint_;
  double timeout_;
};

}  // namespace xalign
