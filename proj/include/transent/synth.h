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

#ifndef TRANSENT_SYNTH_H_
#define TRANSENT_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "transent/translator.h"
#include "transent/types.h"
#include "transent/vocab.h"

namespace transent {

// When `token` appears directly after `neighbor`, it is translated as if it
// belonged to `group`.
struct ContextRule {
  TokenId token{};
  TokenId neighbor{};
  std::uint32_t group = 0;

  bool operator==(const ContextRule&) const = default;
};

// A token-wise translator whose degeneracy structure is known in closed form.
//
// For each source position, in order of precedence:
//   - a token in `drop` emits nothing;
//   - a token directly after a token in `ignore_after` emits nothing;
//   - otherwise it emits emission[group], where group is taken from the first
//     context rule matching (token, left neighbour), else from group_of.
// The output is the concatenation, truncated to max_output_len.
struct SynthSpec {
  std::uint32_t source_vocab_size = 0;
  std::uint32_t target_vocab_size = 0;
  std::vector<std::uint32_t> group_of;   // one entry per source token
  std::vector<TokenId> emission;         // one target token per group
  std::vector<TokenId> drop;
  std::vector<ContextRule> context_rules;
  std::vector<TokenId> ignore_after;
  std::vector<TokenId> special;          // source ids flagged special

  std::size_t group_count() const { return emission.size(); }

  // Throws std::invalid_argument describing the first violated invariant.
  void validate() const;

  bool operator==(const SynthSpec&) const = default;
};

SynthSpec load_synth_spec(const std::filesystem::path& path);
void save_synth_spec(const SynthSpec& spec, const std::filesystem::path& path);

// A validated spec compiled into flat lookup tables.
class SynthModel {
 public:
  explicit SynthModel(SynthSpec spec);

  const SynthSpec& spec() const { return spec_; }

  // Appends the translation of `input` to `out` (cleared first).
  void translate_into(std::span<const TokenId> input,
                      std::uint32_t max_output_len, TokenSeq& out) const;
  Translation translate(std::span<const TokenId> input,
                        std::uint32_t max_output_len = UINT32_MAX) const;

 private:
  std::uint32_t group_at(TokenId tok, const TokenId* left) const;

  SynthSpec spec_;
  std::vector<std::uint8_t> dropped_;
  std::vector<std::uint8_t> ignores_next_;
  // Rules grouped by token: rule_begin_[t]..rule_begin_[t+1] index rules_.
  std::vector<std::uint32_t> rule_begin_;
  std::vector<ContextRule> rules_;
};

Translation synth_translate(const SynthSpec& spec,
                            std::span<const TokenId> input);

// In-process backend over a SynthModel. Stateless apart from call counters.
class SynthTranslator : public Translator {
 public:
  explicit SynthTranslator(SynthSpec spec);

  std::vector<Translation> translate_batch(std::span<const TokenSeq> inputs,
                                           const DecodeParams& params) override;
  const Vocab& source_vocab() const override { return source_vocab_; }
  const Vocab& target_vocab() const override { return target_vocab_; }

  const SynthModel& model() const { return model_; }

 private:
  SynthModel model_;
  Vocab source_vocab_;
  Vocab target_vocab_;
};

}  // namespace transent

#endif  // TRANSENT_SYNTH_H_
