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

#include "xalign/instructgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "xalign/error.hpp"
#include "xalign/language.hpp"
#include "xalign/prompting.hpp"
#include "xalign/random.hpp"
#include "xalign/text.hpp"

namespace xalign {
namespace {

constexpr std::size_t kObjectiveTemplates = 6;

const PromptTemplate& objective_template(TaskKind kind, std::size_t index) {
  if (index >= kObjectiveTemplates) {
    throw ValidationError("template out of range: " + std::string(to_string(kind)) +
                          " index " + std::to_string(index) + " (expected 0-5)");
  }
  return get_template(kind, index);
}

struct Sides {
  const std::string* src_text;
  const std::string* tgt_text;
  LanguageTag src_lang;
  LanguageTag tgt_lang;
};

Sides oriented(const ParallelPair& pair, Direction direction) {
  if (direction == Direction::forward) {
    return {&pair.src_text, &pair.tgt_text, pair.src_lang, pair.tgt_lang};
  }
  return {&pair.tgt_text, &pair.src_text, pair.tgt_lang, pair.src_lang};
}

std::string direction_tag(Direction d) { return d == Direction::forward ? "fwd" : "bwd"; }

InstructSample xss_sample(const ParallelPair& pair, const std::string& tgt_text,
                          std::size_t template_index, const char* answer) {
  const auto& tmpl = objective_template(TaskKind::xss, template_index);
  InstructSample s;
  s.objective = Objective::xss;
  s.prompt = render(tmpl, {{"SOURCE_LANG", display_name(pair.src_lang)},
                           {"TARGET_LANG", display_name(pair.tgt_lang)},
                           {"SOURCE_TEXT", pair.src_text},
                           {"TARGET_TEXT", tgt_text},
                           {"LABEL", ""}});
  s.target = answer;
  s.src_lang = pair.src_lang;
  s.tgt_lang = pair.tgt_lang;
  s.meta.pair_id = pair.id;
  s.meta.template_index = template_index;
  s.meta.xss_label = answer;
  return s;
}

}  // namespace

std::string_view to_string(Objective objective) {
  switch (objective) {
    case Objective::tlm: return "tlm";
    case Objective::mt: return "mt";
    case Objective::xss: return "xss";
    case Objective::mlm: return "mlm";
  }
  return "?";
}

Objective parse_objective(std::string_view name) {
  for (auto o : {Objective::tlm, Objective::mt, Objective::xss, Objective::mlm}) {
    if (to_string(o) == name) return o;
  }
  throw ConfigError("unknown objective \"" + std::string(name) + "\" (expected tlm, mt, xss, mlm)");
}

std::set<Objective> parse_objectives(std::string_view list) {
  std::set<Objective> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto end = std::min(list.find(',', start), list.size());
    const auto name = list.substr(start, end - start);
    if (!name.empty()) out.insert(parse_objective(name));
    start = end + 1;
  }
  if (out.empty()) throw ConfigError("no objectives selected");
  return out;
}

std::string_view to_string(Direction direction) {
  return direction == Direction::forward ? "forward" : "backward";
}

void PerturbationConfig::validate() const {
  if (!(mask_ratio > 0.0 && mask_ratio < 1.0)) {
    throw ConfigError("mask_ratio must lie in (0, 1)");
  }
  if (mask_token.empty()) throw ConfigError("mask_token must be non-empty");
}

std::size_t mask_count(std::size_t n, double ratio) {
  if (n == 0) return 0;
  // The epsilon keeps exact products such as 0.15 * 20 from rounding up.
  const auto wanted = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(n) - 1e-9));
  return std::min(wanted, n - 1);
}

std::vector<std::string> perturb(const std::vector<std::string>& tokens,
                                 const PerturbationConfig& config) {
  config.validate();
  if (tokens.empty()) throw ValidationError("cannot perturb an empty token list");
  Rng rng(config.seed);
  auto out = tokens;
  for (std::size_t pos : sample_indices(tokens.size(), mask_count(tokens.size(), config.mask_ratio), rng)) {
    out[pos] = config.mask_token;
  }
  return out;
}

std::string perturb_text(std::string_view text, const PerturbationConfig& config) {
  return join(perturb(split_whitespace(text), config), " ");
}

InstructSample make_tlm(const ParallelPair& pair, std::size_t template_index,
                        const PerturbationConfig& config, Direction direction) {
  const auto& tmpl = objective_template(TaskKind::tlm, template_index);
  const auto sides = oriented(pair, direction);
  InstructSample s;
  s.id = pair.id + ":tlm:" + direction_tag(direction);
  s.objective = Objective::tlm;
  s.prompt = render(tmpl, {{"CONTEXT", *sides.src_text},
                           {"CONTEXT_LANG", display_name(sides.src_lang)},
                           {"INPUT_TEXT", perturb_text(*sides.tgt_text, config)},
                           {"INPUT_LANG", display_name(sides.tgt_lang)},
                           {"LABEL_TEXT", ""}});
  s.target = *sides.tgt_text;
  s.src_lang = sides.src_lang;
  s.tgt_lang = sides.tgt_lang;
  s.meta.pair_id = pair.id;
  s.meta.template_index = template_index;
  s.meta.direction = direction;
  s.meta.mask_seed = config.seed;
  return s;
}

InstructSample make_mt(const ParallelPair& pair, std::size_t template_index,
                       Direction direction) {
  const auto& tmpl = objective_template(TaskKind::mt, template_index);
  const auto sides = oriented(pair, direction);
  InstructSample s;
  s.id = pair.id + ":mt:" + direction_tag(direction);
  s.objective = Objective::mt;
  s.prompt = render(tmpl, {{"SOURCE_LANG", display_name(sides.src_lang)},
                           {"TARGET_LANG", display_name(sides.tgt_lang)},
                           {"SOURCE_TEXT", *sides.src_text},
                           {"TARGET_TEXT", ""}});
  s.target = *sides.tgt_text;
  s.src_lang = sides.src_lang;
  s.tgt_lang = sides.tgt_lang;
  s.meta.pair_id = pair.id;
  s.meta.template_index = template_index;
  s.meta.direction = direction;
  return s;
}

XssSamples make_xss(const ParallelPair& pair, std::span<const ParallelPair> corpus,
                    std::size_t template_index, std::uint64_t seed) {
  std::vector<const ParallelPair*> distractors;
  for (const auto& other : corpus) {
    if (other.id != pair.id && other.src_lang == pair.src_lang &&
        other.tgt_lang == pair.tgt_lang && other.tgt_text != pair.tgt_text) {
      distractors.push_back(&other);
    }
  }
  if (distractors.empty()) {
    throw ValidationError("pair " + pair.id + ": no other pair with a different " +
                          pair.tgt_lang.code() + " sentence to use as an xss negative");
  }
  Rng rng(seed);
  const ParallelPair& distractor = *distractors[rng.below(distractors.size())];
  XssSamples out{xss_sample(pair, pair.tgt_text, template_index, "Yes"),
                 xss_sample(pair, distractor.tgt_text, template_index, "No")};
  out.positive.id = pair.id + ":xss:pos";
  out.negative.id = pair.id + ":xss:neg";
  out.negative.meta.distractor_id = distractor.id;
  return out;
}

InstructSample make_mlm(std::string_view text, const LanguageTag& lang,
                        std::size_t template_index, const PerturbationConfig& config) {
  const auto& tmpl = objective_template(TaskKind::mlm, template_index);
  if (split_whitespace(text).empty()) throw ValidationError("mlm sample needs non-empty text");
  InstructSample s;
  s.objective = Objective::mlm;
  s.prompt = render(tmpl, {{"SOURCE_LANG", display_name(lang)},
                           {"SOURCE_TEXT", perturb_text(text, config)},
                           {"TARGET_TEXT", ""}});
  s.target = std::string(text);
  s.src_lang = lang;
  s.meta.template_index = template_index;
  s.meta.mask_seed = config.seed;
  return s;
}

std::vector<InstructSample> generate_dataset(std::span<const ParallelPair> d_para,
                                             const GenerateOptions& options) {
  if (options.objectives.empty()) throw ConfigError("no objectives selected");
  if (options.tlm_repeats == 0) throw ConfigError("tlm_repeats must be ≥ 1");
  if (options.fixed_template && *options.fixed_template >= kObjectiveTemplates) {
    throw ConfigError("template out of range: " + std::to_string(*options.fixed_template) +
                      " (expected 0-5)");
  }
  PerturbationConfig base{options.mask_ratio, options.mask_token, 0};
  base.validate();

  std::vector<ParallelPair> pairs(d_para.begin(), d_para.end());
  std::sort(pairs.begin(), pairs.end(),
            [](const ParallelPair& a, const ParallelPair& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].id == pairs[i - 1].id) throw ValidationError("duplicate pair id " + pairs[i].id);
  }

  auto template_for = [&](std::size_t pair_index, std::size_t offset) {
    return options.fixed_template.value_or((pair_index + offset) % kObjectiveTemplates);
  };
  auto masked = [&](const std::string& sample_id) {
    auto config = base;
    config.seed = mix_seed(options.seed, sample_id);
    return config;
  };
  const bool repeats = options.tlm_repeats > 1;

  std::vector<InstructSample> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& pair = pairs[i];
    for (Objective objective : options.objectives) {
      switch (objective) {
        case Objective::tlm:
          for (auto dir : {Direction::forward, Direction::backward}) {
            for (std::size_t rep = 0; rep < options.tlm_repeats; ++rep) {
              std::string id = pair.id + ":tlm:" + direction_tag(dir);
              if (repeats) id += ":r" + std::to_string(rep);
              const std::size_t offset = (dir == Direction::forward ? 0 : 1) + rep;
              auto s = make_tlm(pair, template_for(i, offset), masked(id), dir);
              s.id = std::move(id);
              if (repeats) s.meta.repeat = rep;
              out.push_back(std::move(s));
            }
          }
          break;
        case Objective::mt:
          out.push_back(make_mt(pair, template_for(i, 0), Direction::forward));
          out.push_back(make_mt(pair, template_for(i, 1), Direction::backward));
          break;
        case Objective::xss: {
          auto xss = make_xss(pair, pairs, template_for(i, 0),
                              mix_seed(options.seed, pair.id + ":xss"));
          out.push_back(std::move(xss.positive));
          out.push_back(std::move(xss.negative));
          break;
        }
        case Objective::mlm: {
          const std::string src_id = pair.id + ":mlm:src";
          const std::string tgt_id = pair.id + ":mlm:tgt";
          auto src = make_mlm(pair.src_text, pair.src_lang, template_for(i, 0), masked(src_id));
          auto tgt = make_mlm(pair.tgt_text, pair.tgt_lang, template_for(i, 1), masked(tgt_id));
          src.id = src_id;
          src.meta.pair_id = pair.id;
          src.meta.side = "src";
          tgt.id = tgt_id;
          tgt.meta.pair_id = pair.id;
          tgt.meta.side = "tgt";
          out.push_back(std::move(src));
          out.push_back(std::move(tgt));
          break;
        }
      }
    }
  }
  return out;
}

nlohmann::ordered_json to_json(const InstructSample& sample) {
  nlohmann::ordered_json j;
  j["id"] = sample.id;
  j["objective"] = to_string(sample.objective);
  j["prompt"] = sample.prompt;
  j["target"] = sample.target;
  j["src_lang"] = sample.src_lang.code();
  if (sample.tgt_lang) j["tgt_lang"] = sample.tgt_lang->code();
  nlohmann::ordered_json meta;
  const auto& m = sample.meta;
  meta["pair_id"] = m.pair_id;
  meta["template"] = m.template_index;
  if (m.direction) meta["direction"] = to_string(*m.direction);
  if (m.side) meta["side"] = *m.side;
  if (m.repeat) meta["repeat"] = *m.repeat;
  if (m.mask_seed) meta["mask_seed"] = *m.mask_seed;
  if (m.xss_label) meta["xss_label"] = *m.xss_label;
  if (m.distractor_id) meta["distractor_id"] = *m.distractor_id;
  j["meta"] = std::move(meta);
  return j;
}

void write_instruct_jsonl(std::ostream& out, std::span<const InstructSample> samples) {
  for (const auto& s : samples) out << to_json(s).dump() << '\n';
}

std::vector<Batch> interleave_replay(std::size_t old_size, std::size_t new_size,
                                     const ReplayPlan& plan, std::size_t batch_size,
                                     std::size_t epochs, ReplayMode mode) {
  if (batch_size == 0) throw ConfigError("batch size must be ≥ 1");
  if (epochs == 0) throw ConfigError("epochs must be ≥ 1");
  if (new_size == 0) throw ValidationError("new dataset is empty");

  const bool replay = mode == ReplayMode::replay;
  if (replay) {
    if (batch_size % 2 != 0) {
      throw ConfigError("batch size must be even in replay mode, got " +
                        std::to_string(batch_size));
    }
    if (plan.r == 0) throw ConfigError("replay disabled needs r ≥ 1");
    if (plan.r > old_size) {
      throw ConfigError("r = " + std::to_string(plan.r) + " exceeds the old data size " +
                        std::to_string(old_size));
    }
  }
  const std::size_t per_batch = replay ? batch_size / 2 : batch_size;

  std::vector<std::size_t> old_pool;
  if (replay) {
    Rng rng(mix_seed(plan.seed, "old"));
    old_pool = sample_indices(old_size, plan.r, rng);
  }

  // Streams are lazily extended one pass (epoch or cycle) at a time.
  std::vector<std::size_t> new_stream;
  std::vector<std::size_t> new_epoch_of;
  std::size_t new_passes = 0;
  auto extend_new = [&] {
    std::vector<std::size_t> order(new_size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(mix_seed(plan.seed + new_passes, "new"));
    shuffle(order, rng);
    for (auto i : order) {
      new_stream.push_back(i);
      new_epoch_of.push_back(new_passes);
    }
    ++new_passes;
  };
  std::vector<std::size_t> old_stream;
  std::size_t old_passes = 0;
  auto extend_old = [&] {
    auto order = old_pool;
    Rng rng(mix_seed(plan.seed + old_passes, "old-cycle"));
    shuffle(order, rng);
    old_stream.insert(old_stream.end(), order.begin(), order.end());
    ++old_passes;
  };

  const std::size_t total_new = epochs * new_size;
  const std::size_t batches = (total_new + per_batch - 1) / per_batch;
  std::vector<Batch> out;
  out.reserve(batches);
  std::size_t new_pos = 0;
  std::size_t old_pos = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    Batch batch;
    for (std::size_t slot = 0; slot < per_batch; ++slot) {
      if (replay) {
        if (old_pos == old_stream.size()) extend_old();
        batch.items.push_back({true, old_stream[old_pos++]});
      }
      if (new_pos == new_stream.size()) extend_new();
      if (slot == 0) batch.epoch = new_epoch_of[new_pos];
      batch.items.push_back({false, new_stream[new_pos++]});
    }
    out.push_back(std::move(batch));
  }
  return out;
}

}  // namespace xalign
