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

#ifndef TRANSENT_DEGENERACY_H_
#define TRANSENT_DEGENERACY_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "transent/corpus.h"
#include "transent/translator.h"
#include "transent/types.h"
#include "transent/vocab.h"

namespace transent {

// Replacement tokens at one pivot position that leave the generated
// translation unchanged. Never contains the pivot or a special token.
struct Subgroup {
  TokenId pivot{};
  SentenceId sentence_id = 0;
  std::uint32_t position = 0;
  std::vector<TokenId> members;  // ascending
  TokenSeq reference_output;     // translation of the unmodified sentence

  std::size_t size() const { return members.size(); }
  bool operator==(const Subgroup&) const = default;
};

struct SubgroupEnsemble {
  TokenId pivot{};
  std::vector<Subgroup> subgroups;

  std::uint64_t total_size() const;
  double avg_size() const;
};

struct SweepOptions {
  // Substituted sentences per translate_batch call.
  std::size_t batch_size = 2048;
};

// Translates the sentence with every non-special token t != pivot at
// `position` and keeps the t whose translation equals the reference exactly.
// Either the whole sweep succeeds or the translator's exception propagates.
Subgroup substitution_sweep(const PivotSentence& pivot_sentence,
                            const Vocab& vocab, Translator& translator,
                            const DecodeParams& params,
                            const SweepOptions& options = {});

// One sweep per sentence, in the given order.
SubgroupEnsemble sweep_ensemble(TokenId pivot,
                                std::span<const PivotSentence> sentences,
                                const Vocab& vocab, Translator& translator,
                                const DecodeParams& params,
                                const SweepOptions& options = {});

struct PairDegeneracy {
  SentenceId sentence_id = 0;
  std::uint32_t position_a = 0;
  std::uint32_t position_b = 0;
  TokenId token_a{};
  TokenId token_b{};
  std::uint64_t sg_a = 0;
  std::uint64_t sg_b = 0;
  // Combinations (t_a, t_b) from members_a x members_b that keep the pivot
  // translation.
  std::uint64_t pair_count = 0;
  // pair_count / (sg_a * sg_b); empty when either subgroup is empty.
  std::optional<double> ratio;

  bool operator==(const PairDegeneracy&) const = default;
};

// Both subgroups must come from `sentence` at positions a and b. Throws
// std::invalid_argument otherwise.
PairDegeneracy pair_sweep(const SentencePair& sentence, const Subgroup& sg_a,
                          const Subgroup& sg_b, Translator& translator,
                          const DecodeParams& params,
                          const SweepOptions& options = {});

}  // namespace transent

#endif  // TRANSENT_DEGENERACY_H_
