// Copyright 2026 The Transent Authors.
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

#include "transent/synth.h"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace transent {
namespace {

using Json = nlohmann::json;

void check_source(const SynthSpec& spec, TokenId t, const char* what) {
  if (to_index(t) >= spec.source_vocab_size) {
    throw std::invalid_argument(std::string(what) + " references token " +
                                std::to_string(to_index(t)) +
                                " outside the source vocab");
  }
}

}  // namespace

void SynthSpec::validate() const {
  if (source_vocab_size == 0) {
    throw std::invalid_argument("synth spec has an empty source vocab");
  }
  if (group_of.size() != source_vocab_size) {
    throw std::invalid_argument("synth spec maps " +
                                std::to_string(group_of.size()) +
                                " tokens to groups; source vocab has " +
                                std::to_string(source_vocab_size));
  }
  for (std::size_t t = 0; t < group_of.size(); ++t) {
    if (group_of[t] >= emission.size()) {
      throw std::invalid_argument("token " + std::to_string(t) +
                                  " is in group " +
                                  std::to_string(group_of[t]) +
                                  " which has no emission");
    }
  }
  for (std::size_t g = 0; g < emission.size(); ++g) {
    if (to_index(emission[g]) >= target_vocab_size) {
      throw std::invalid_argument("group " + std::to_string(g) +
                                  " emits a token outside the target vocab");
    }
  }
  for (TokenId t : drop) check_source(*this, t, "drop set");
  for (TokenId t : ignore_after) check_source(*this, t, "ignore_after");
  for (TokenId t : special) check_source(*this, t, "special list");
  for (const ContextRule& r : context_rules) {
    check_source(*this, r.token, "context rule");
    check_source(*this, r.neighbor, "context rule");
    if (r.group >= emission.size()) {
      throw std::invalid_argument("context rule overrides to unknown group " +
                                  std::to_string(r.group));
    }
  }
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open synth spec " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw std::invalid_argument("synth spec " + path.string() + ": " + e.what());
  }
  SynthSpec spec;
  try {
    spec.source_vocab_size = j.at("source_vocab_size").get<std::uint32_t>();
    spec.target_vocab_size = j.at("target_vocab_size").get<std::uint32_t>();
    spec.group_of = j.at("groups").get<std::vector<std::uint32_t>>();
    spec.emission = to_tokens(j.at("emission").get<std::vector<std::uint32_t>>());
    spec.drop = to_tokens(j.value("drop", std::vector<std::uint32_t>{}));
    spec.ignore_after =
        to_tokens(j.value("ignore_after", std::vector<std::uint32_t>{}));
    spec.special = to_tokens(j.value("special", std::vector<std::uint32_t>{}));
    for (const Json& r : j.value("context_rules", Json::array())) {
      spec.context_rules.push_back({token(r.at("token").get<std::uint32_t>()),
                                    token(r.at("neighbor").get<std::uint32_t>()),
                                    r.at("group").get<std::uint32_t>()});
    }
  } catch (const Json::exception& e) {
    throw std::invalid_argument("synth spec " + path.string() + ": " + e.what());
  }
  spec.validate();
  return spec;
}

void save_synth_spec(const SynthSpec& spec, const std::filesystem::path& path) {
  Json rules = Json::array();
  for (const ContextRule& r : spec.context_rules) {
    rules.push_back({{"token", to_index(r.token)},
                     {"neighbor", to_index(r.neighbor)},
                     {"group", r.group}});
  }
  Json j = {{"source_vocab_size", spec.source_vocab_size},
            {"target_vocab_size", spec.target_vocab_size},
            {"groups", spec.group_of},
            {"emission", to_indices(spec.emission)},
            {"drop", to_indices(spec.drop)},
            {"ignore_after", to_indices(spec.ignore_after)},
            {"special", to_indices(spec.special)},
            {"context_rules", rules}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump() << '\n';
}

SynthModel::SynthModel(SynthSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  const std::size_t n = spec_.source_vocab_size;
  dropped_.assign(n, 0);
  ignores_next_.assign(n, 0);
  for (TokenId t : spec_.drop) dropped_[to_index(t)] = 1;
  for (TokenId t : spec_.ignore_after) ignores_next_[to_index(t)] = 1;

  rules_ = spec_.context_rules;
  std::stable_sort(rules_.begin(), rules_.end(),
                   [](const ContextRule& a, const ContextRule& b) {
                     return a.token < b.token;
                   });
  rule_begin_.assign(n + 1, 0);
  for (const ContextRule& r : rules_) ++rule_begin_[to_index(r.token) + 1];
  for (std::size_t t = 0; t < n; ++t) rule_begin_[t + 1] += rule_begin_[t];
}

std::uint32_t SynthModel::group_at(TokenId tok, const TokenId* left) const {
  const auto t = to_index(tok);
  if (left != nullptr) {
    for (auto i = rule_begin_[t]; i < rule_begin_[t + 1]; ++i) {
      if (rules_[i].neighbor == *left) return rules_[i].group;
    }
  }
  return spec_.group_of[t];
}

void SynthModel::translate_into(std::span<const TokenId> input,
                                std::uint32_t max_output_len,
                                TokenSeq& out) const {
  out.clear();
  for (std::size_t j = 0; j < input.size(); ++j) {
    const auto t = to_index(input[j]);
    if (t >= spec_.source_vocab_size) {
      throw std::invalid_argument("token " + std::to_string(t) +
                                  " outside the synthetic source vocab");
    }
    if (dropped_[t]) continue;
    if (j > 0 && ignores_next_[to_index(input[j - 1])]) continue;
    if (out.size() >= max_output_len) break;
    out.push_back(spec_.emission[group_at(input[j], j > 0 ? &input[j - 1] : nullptr)]);
  }
}

Translation SynthModel::translate(std::span<const TokenId> input,
                                  std::uint32_t max_output_len) const {
  Translation t;
  translate_into(input, max_output_len, t.output);
  return t;
}

Translation synth_translate(const SynthSpec& spec,
                            std::span<const TokenId> input) {
  return SynthModel(spec).translate(input);
}

SynthTranslator::SynthTranslator(SynthSpec spec)
    : model_(std::move(spec)),
      source_vocab_(Vocab::synthetic(model_.spec().source_vocab_size, "s",
                                     model_.spec().special)),
      target_vocab_(Vocab::synthetic(model_.spec().target_vocab_size, "t")) {}

std::vector<Translation> SynthTranslator::translate_batch(
    std::span<const TokenSeq> inputs, const DecodeParams& params) {
  validate_inputs(inputs, source_vocab_);
  std::vector<Translation> out(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    model_.translate_into(inputs[i], params.max_output_len, out[i].output);
  }
  return out;
}

}  // namespace transent
