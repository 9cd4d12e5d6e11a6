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

#include "transent/bleu.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace transent {
namespace {

using NgramCounts = std::map<std::vector<TokenId>, std::uint64_t>;

NgramCounts count_ngrams(const TokenSeq& seq, std::size_t n) {
  NgramCounts counts;
  if (seq.size() < n) return counts;
  for (std::size_t i = 0; i + n <= seq.size(); ++i) {
    ++counts[std::vector<TokenId>(seq.begin() + static_cast<std::ptrdiff_t>(i),
                                  seq.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

}  // namespace

BleuScore bleu_corpus(std::span<const TokenSeq> hypotheses,
                      std::span<const TokenSeq> references) {
  if (hypotheses.empty()) throw std::invalid_argument("BLEU needs hypotheses");
  if (hypotheses.size() != references.size()) {
    throw std::invalid_argument("BLEU: " + std::to_string(hypotheses.size()) +
                                " hypotheses vs " +
                                std::to_string(references.size()) + " references");
  }
  BleuScore b;
  for (std::size_t s = 0; s < hypotheses.size(); ++s) {
    const TokenSeq& hyp = hypotheses[s];
    const TokenSeq& ref = references[s];
    b.hypothesis_length += hyp.size();
    b.reference_length += ref.size();
    for (int n = 1; n <= kBleuOrder; ++n) {
      const auto h = count_ngrams(hyp, n);
      const auto r = count_ngrams(ref, n);
      for (const auto& [gram, c] : h) {
        auto it = r.find(gram);
        if (it != r.end()) b.matches[n - 1] += std::min(c, it->second);
      }
      if (hyp.size() >= static_cast<std::size_t>(n)) {
        b.totals[n - 1] += hyp.size() - n + 1;
      }
    }
  }

  bool any_zero = false;
  double log_sum = 0.0;
  for (int n = 0; n < kBleuOrder; ++n) {
    b.precisions[n] = b.totals[n] == 0 ? 0.0
                                       : static_cast<double>(b.matches[n]) /
                                             static_cast<double>(b.totals[n]);
    if (b.matches[n] == 0) {
      any_zero = true;
    } else {
      log_sum += std::log(b.precisions[n]);
    }
  }

  const double c = static_cast<double>(b.hypothesis_length);
  const double r = static_cast<double>(b.reference_length);
  if (c == 0) {
    b.brevity_penalty = 0.0;
  } else {
    b.brevity_penalty = c > r ? 1.0 : std::exp(1.0 - r / c);
  }
  b.score = any_zero ? 0.0
                     : 100.0 * b.brevity_penalty * std::exp(log_sum / kBleuOrder);
  return b;
}

}  // namespace transent
