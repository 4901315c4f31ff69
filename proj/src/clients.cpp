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

#include "xalign/clients.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <httplib.h>

#include "xalign/error.hpp"
#include "xalign/hash.hpp"

namespace xalign {
namespace {

using nlohmann::json;

template <typename Fn>
void for_each_jsonl(std::istream& in, const std::string& source, Fn fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(source, number, std::string("invalid JSON: ") + e.what());
    }
    try {
      fn(record);
    } catch (const json::exception& e) {
      throw ParseError(source, number, e.what());
    }
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace

MockScoringClient MockScoringClient::from_json(const json& spec) {
  MockScoringClient client(spec.value("floor", -100.0));
  if (spec.contains("generate")) {
    client.set_generate_template(spec.at("generate").get<std::string>());
  }
  for (const auto& r : spec.value("rules", json::array())) {
    Rule rule;
    if (r.contains("prompt_contains")) {
      rule.prompt_contains = r.at("prompt_contains").get<std::vector<std::string>>();
    }
    if (r.contains("continuation")) rule.continuation = r.at("continuation").get<std::string>();
    rule.score = r.at("score").get<double>();
    client.add_rule(std::move(rule));
  }
  return client;
}

MockScoringClient MockScoringClient::load(const std::filesystem::path& path) {
  try {
    return from_json(json::parse(read_file(path)));
  } catch (const json::exception& e) {
    throw ParseError(path.string(), 1, e.what());
  }
}

MockScoringClient& MockScoringClient::add_rule(Rule rule) {
  return add_rule([rule = std::move(rule)](std::string_view prompt,
                                           std::string_view continuation) -> std::optional<double> {
    if (rule.continuation && *rule.continuation != continuation) return std::nullopt;
    for (const auto& needle : rule.prompt_contains) {
      if (prompt.find(needle) == std::string_view::npos) return std::nullopt;
    }
    return rule.score;
  });
}

MockScoringClient& MockScoringClient::add_rule(RuleFn rule) {
  rules_.push_back(std::move(rule));
  return *this;
}

MockScoringClient& MockScoringClient::set_generate_template(std::string tmpl) {
  generate_template_ = std::move(tmpl);
  return *this;
}

double MockScoringClient::score(const std::string& prompt, const std::string& continuation) {
  for (const auto& rule : rules_) {
    if (auto s = rule(prompt, continuation)) return *s;
  }
  return floor_;
}

std::string MockScoringClient::generate(const std::string& prompt) {
  std::string out = generate_template_;
  static constexpr std::string_view kSlot = "{prompt}";
  for (auto pos = out.find(kSlot); pos != std::string::npos;
       pos = out.find(kSlot, pos + prompt.size())) {
    out.replace(pos, kSlot.size(), prompt);
  }
  return out;
}

FixtureScoringClient FixtureScoringClient::parse(std::istream& in,
                                                 std::string_view source_name) {
  FixtureScoringClient client;
  for_each_jsonl(in, std::string(source_name), [&](const json& r) {
    client.scores_.insert_or_assign(
        std::pair{r.at("prompt_sha256").get<std::string>(), r.at("continuation").get<std::string>()},
        r.at("logprob").get<double>());
  });
  return client;
}

FixtureScoringClient FixtureScoringClient::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse(in, path.string());
}

double FixtureScoringClient::score(const std::string& prompt, const std::string& continuation) {
  const auto sha = sha256_hex(prompt);
  const auto it = scores_.find({sha, continuation});
  if (it == scores_.end()) {
    throw ClientError("fixture has no score for prompt sha256 " + sha + ", continuation \"" +
                      continuation + "\"");
  }
  return it->second;
}

std::string FixtureScoringClient::generate(const std::string&) {
  throw ClientError("fixture scoring client does not support generation");
}

double RecordingScoringClient::score(const std::string& prompt, const std::string& continuation) {
  const double s = inner_.score(prompt, continuation);
  const auto sha = sha256_hex(prompt);
  std::lock_guard lock(mutex_);
  recorded_.insert_or_assign({sha, continuation}, s);
  return s;
}

void RecordingScoringClient::write(std::ostream& out) const {
  std::lock_guard lock(mutex_);
  for (const auto& [key, logprob] : recorded_) {
    nlohmann::ordered_json record;
    record["prompt_sha256"] = key.first;
    record["continuation"] = key.second;
    record["logprob"] = logprob;
    out << record.dump() << '\n';
  }
}

HttpEndpoint HttpEndpoint::parse(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0) {
    throw ConfigError("invalid URL \"" + std::string(url) + "\" (expected scheme://host[:port])");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  HttpEndpoint endpoint;
  endpoint.origin = std::string(url.substr(0, path_start));
  if (endpoint.origin.size() <= scheme_end + 3) {
    throw ConfigError("invalid URL \"" + std::string(url) + "\" (missing host)");
  }
  if (path_start != std::string_view::npos) {
    endpoint.base_path = std::string(url.substr(path_start));
    while (!endpoint.base_path.empty() && endpoint.base_path.back() == '/') {
      endpoint.base_path.pop_back();
    }
  }
  return endpoint;
}

json post_json(const HttpEndpoint& endpoint, const std::string& path, const json& body,
               double timeout_seconds) {
  httplib::Client client(endpoint.origin);
  const auto seconds = static_cast<time_t>(timeout_seconds);
  const auto micros = static_cast<time_t>((timeout_seconds - static_cast<double>(seconds)) * 1e6);
  client.set_connection_timeout(seconds, micros);
  client.set_read_timeout(seconds, micros);
  client.set_write_timeout(seconds, micros);
  const std::string target = endpoint.base_path + path;
  auto res = client.Post(target, body.dump(), "application/json");
  if (!res) {
    throw ClientError("POST " + endpoint.origin + target + " failed: " +
                      httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw ClientError("POST " + endpoint.origin + target + " returned HTTP " +
                      std::to_string(res->status) + ": " + res->body);
  }
  try {
    return json::parse(res->body);
  } catch (const json::exception& e) {
    throw ClientError("POST " + endpoint.origin + target + " returned invalid JSON: " + e.what());
  }
}

double HttpScoringClient::score(const std::string& prompt, const std::string& continuation) {
  const auto response = post_json(endpoint_, "/score",
                                  {{"prompt", prompt}, {"continuation", continuation}}, timeout_);
  if (!response.contains("logprob") || !response["logprob"].is_number()) {
    throw ClientError("scoring response lacks a numeric \"logprob\"");
  }
  return response["logprob"].get<double>();
}

std::string HttpScoringClient::generate(const std::string& prompt) {
  const auto response = post_json(endpoint_, "/generate", {{"prompt", prompt}}, timeout_);
  if (!response.contains("text") || !response["text"].is_string()) {
    throw ClientError("generation response lacks \"text\"");
  }
  return response["text"].get<std::string>();
}

FixtureMtClient FixtureMtClient::parse(std::istream& in, std::string_view source_name) {
  FixtureMtClient client;
  for_each_jsonl(in, std::string(source_name), [&](const json& r) {
    client.insert(r.at("text").get<std::string>(), LanguageTag(r.at("src").get<std::string>()),
                  LanguageTag(r.at("tgt").get<std::string>()),
                  r.at("translation").get<std::string>());
  });
  return client;
}

FixtureMtClient FixtureMtClient::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse(in, path.string());
}

void FixtureMtClient::insert(const std::string& text, const LanguageTag& src,
                             const LanguageTag& tgt, std::string translation) {
  table_.insert_or_assign({text, src.code(), tgt.code()}, std::move(translation));
}

std::string FixtureMtClient::translate(const std::string& text, const LanguageTag& src,
                                       const LanguageTag& tgt) {
  const auto it = table_.find({text, src.code(), tgt.code()});
  if (it == table_.end()) {
    throw ClientError("MT fixture has no translation " + src.code() + "->" + tgt.code() +
                      " for \"" + text + "\"");
  }
  return it->second;
}

std::string HttpMtClient::translate(const std::string& text, const LanguageTag& src,
                                    const LanguageTag& tgt) {
  const auto response = post_json(
      endpoint_, "/translate", {{"text", text}, {"src", src.code()}, {"tgt", tgt.code()}}, timeout_);
  if (!response.contains("text") || !response["text"].is_string()) {
    throw ClientError("translation response lacks \"text\"");
  }
  return response["text"].get<std::string>();
}

std::string MemoizingMtClient::translate(const std::string& text, const LanguageTag& src,
                                         const LanguageTag& tgt) {
  const auto key = std::tuple{text, src.code(), tgt.code()};
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto translation = inner_.translate(text, src, tgt);
  std::lock_guard lock(mutex_);
  return cache_.emplace(key, std::move(translation)).first->second;
}

std::vector<DenseVector> HttpEmbeddingProvider::embed_batch(
    const std::vector<std::string>& texts) const {
  const auto response = post_json(endpoint_, "/embed", {{"texts", texts}}, timeout_);
  if (!response.contains("vectors") || !response["vectors"].is_array() ||
      response["vectors"].size() != texts.size()) {
    throw ClientError("embedding response must hold one vector per text");
  }
  std::vector<DenseVector> out;
  for (const auto& v : response["vectors"]) {
    try {
      out.emplace_back(v.get<std::vector<double>>());
    } catch (const json::exception& e) {
      throw ClientError(std::string("malformed embedding vector: ") + e.what());
    } catch (const ValidationError& e) {
      throw ClientError(std::string("malformed embedding vector: ") + e.what());
    }
  }
  return out;
}

DenseVector HttpEmbeddingProvider::embed(const std::string&, const std::string& text) const {
  return embed_batch({text}).front();
}

}  // namespace xalign
