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

// The `xalign` command line: gen-instruct, plan-replay, retrieve, evaluate,
// align-quality and report.
//
// Exit codes: 0 success, 1 runtime error, 2 usage or configuration error.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "xalign/scoring.hpp"

namespace xalign {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Client selection: {"type": "mock"|"fixture"|"http"|"identity", "path": str,
/// "url": str, "timeout": num}. An absent block falls back to the matching
/// XALIGN_*_URL environment variable.
struct ClientSpec {
  std::string type;
  std::filesystem::path path;
  std::string url;
  double timeout = 60.0;
};

/// Declarative evaluation run. Relative paths resolve against the config
/// file's directory.
struct RunConfig {
  std::string task;
  TaskKind template_kind = TaskKind::sentiment;
  std::vector<std::size_t> templates{0, 1, 2};
  std::filesystem::path queries;
  std::optional<std::filesystem::path> d_src;
  std::optional<std::filesystem::path> d_para;
  std::filesystem::path label_sets;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::string> embeddings_url;
  std::optional<StrategyKind> strategy;  // nullopt: zero-shot
  std::size_t k = 3;
  std::optional<std::uint64_t> seed;
  SimilarityConfig similarity;
  AlignmentMode alignment_mode = AlignmentMode::none;
  std::size_t alignment_k = 3;
  SimilarityConfig alignment_similarity;
  LabelLanguageMode label_mode = LabelLanguageMode::source_only;
  std::optional<LanguageTag> source_lang;
  std::optional<ClientSpec> scorer;
  std::optional<ClientSpec> mt;
  std::size_t max_inflight = 8;
  bool length_norm = false;
  std::optional<std::filesystem::path> output;

  /// sha256 of the config document without "output".
  std::string config_hash;
};

/// Throws ConfigError on unknown keys, bad values or missing files.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xalign
