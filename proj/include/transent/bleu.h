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

#ifndef TRANSENT_BLEU_H_
#define TRANSENT_BLEU_H_

#include <array>
#include <cstdint>
#include <span>

#include "transent/types.h"

namespace transent {

inline constexpr int kBleuOrder = 4;

struct BleuScore {
  double score = 0;  // 0..100
  std::array<double, kBleuOrder> precisions{};
  std::array<std::uint64_t, kBleuOrder> matches{};
  std::array<std::uint64_t, kBleuOrder> totals{};
  double brevity_penalty = 0;
  std::uint64_t hypothesis_length = 0;
  std::uint64_t reference_length = 0;
};

// Corpus BLEU over token ids with a single reference per hypothesis: clipped
// n-gram matches pooled over the corpus for n = 1..4, geometric mean, and
// brevity penalty exp(1 - r/c) when c <= r. No smoothing: if any pooled
// precision is zero the score is 0, with precisions still reported.
// Throws std::invalid_argument on empty input or mismatched lengths.
BleuScore bleu_corpus(std::span<const TokenSeq> hypotheses,
                      std::span<const TokenSeq> references);

}  // namespace transent

#endif  // TRANSENT_BLEU_H_
