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

// Instruction data for cross-lingual alignment: bilingual denoising (tlm),
// translation (mt), cross-lingual semantic similarity (xss) and monolingual
// denoising (mlm) samples built from a parallel corpus, plus replay batch
// planning.
//
// Prompts leave the answer slot ([LABEL_TEXT], [TARGET_TEXT], [LABEL]) empty;
// the answer is the sample's target. A sample's prompt can be re-rendered from
// its pair, its meta record and the template table alone.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "xalign/corpus.hpp"

namespace xalign {

enum class Objective { tlm, mt, xss, mlm };

std::string_view to_string(Objective objective);
/// Throws ConfigError for unknown names.
Objective parse_objective(std::string_view name);
/// Comma-separated list, e.g. "tlm,xss".
std::set<Objective> parse_objectives(std::string_view list);

struct PerturbationConfig {
  double mask_ratio = 0.15;
  std::string mask_token = "<mask>";
  std::uint64_t seed = 0;

  void validate() const;
};

/// min(ceil(ratio * n), n - 1) for n >= 1.
std::size_t mask_count(std::size_t n, double ratio);

/// Masks mask_count(n) positions drawn by sample_indices with Rng(seed).
/// Throws ValidationError on an empty list.
std::vector<std::string> perturb(const std::vector<std::string>& tokens,
                                 const PerturbationConfig& config);
/// Whitespace-tokenizes, perturbs and joins with single spaces.
std::string perturb_text(std::string_view text, const PerturbationConfig& config);

/// forward: the pair's src side is the source/context side.
enum class Direction { forward, backward };

std::string_view to_string(Direction direction);

struct SampleMeta {
  std::string pair_id;
  std::size_t template_index = 0;
  std::optional<Direction> direction;        // tlm, mt
  std::optional<std::string> side;           // mlm: "src" or "tgt"
  std::optional<std::uint64_t> mask_seed;    // tlm, mlm
  std::optional<std::string> xss_label;      // xss: "Yes" or "No"
  std::optional<std::string> distractor_id;  // xss negatives
  std::optional<std::size_t> repeat;         // tlm with repeats > 1
};

struct InstructSample {
  std::string id;
  Objective objective = Objective::tlm;
  std::string prompt;
  std::string target;
  LanguageTag src_lang;
  std::optional<LanguageTag> tgt_lang;  // absent for mlm
  SampleMeta meta;
};

InstructSample make_tlm(const ParallelPair& pair, std::size_t template_index,
                        const PerturbationConfig& config,
                        Direction direction = Direction::forward);

InstructSample make_mt(const ParallelPair& pair, std::size_t template_index,
                       Direction direction = Direction::forward);

struct XssSamples {
  InstructSample positive;
  InstructSample negative;
};

/// The negative pairs pair.src_text with the tgt_text of another corpus pair
/// of the same language pair whose tgt_text differs from pair.tgt_text, drawn
/// uniformly with Rng(seed). Throws ValidationError when no such pair exists.
XssSamples make_xss(const ParallelPair& pair, std::span<const ParallelPair> corpus,
                    std::size_t template_index, std::uint64_t seed);

InstructSample make_mlm(std::string_view text, const LanguageTag& lang,
                        std::size_t template_index, const PerturbationConfig& config);

struct GenerateOptions {
  std::set<Objective> objectives;
  std::optional<std::size_t> fixed_template;  // otherwise cycles per pair
  std::uint64_t seed = 0;
  double mask_ratio = 0.15;
  std::string mask_token = "<mask>";
  std::size_t tlm_repeats = 1;
};

/// Pairs are processed in id order. Per pair: tlm 2 * tlm_repeats (both
/// directions), mt 2, xss 2 (positive, negative), mlm 2 (one per side).
/// Sample ids are "<pair id>:<objective>:<variant>".
std::vector<InstructSample> generate_dataset(std::span<const ParallelPair> d_para,
                                             const GenerateOptions& options);

nlohmann::ordered_json to_json(const InstructSample& sample);
/// One compact JSON object per line.
void write_instruct_jsonl(std::ostream& out, std::span<const InstructSample> samples);

struct ReplayPlan {
  std::size_t r = 0;
  std::uint64_t seed = 0;
};

enum class ReplayMode { replay, none };

struct BatchItem {
  bool from_old = false;
  std::size_t index = 0;  // into the old or the new data
};

struct Batch {
  std::size_t epoch = 0;  // epoch of the batch's first new item
  std::vector<BatchItem> items;
};

/// Replay mode: r old records are drawn without replacement, then every
/// batch is [old, new, old, new, ...] with batch_size / 2 of each. The new data
/// is consumed as the concatenation of per-epoch shuffles (epoch e uses seed + e)
/// and the old sample cycles, reshuffling with seed + c on its c-th pass.
/// There are ceil(epochs * new_size / (batch_size / 2)) batches. Mode none
/// emits batches of batch_size new items only.
std::vector<Batch> interleave_replay(std::size_t old_size, std::size_t new_size,
                                     const ReplayPlan& plan, std::size_t batch_size,
                                     std::size_t epochs = 1, ReplayMode mode = ReplayMode::replay);

}  // namespace xalign
