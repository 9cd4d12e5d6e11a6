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

#include <gtest/gtest.h>

#include "transent/bleu.h"

namespace transent {
namespace {

// Reference values computed with sacrebleu 2.x, tokenize='none',
// smooth_method='none', on the same id strings.

std::vector<TokenSeq> seqs(const std::vector<std::vector<std::uint32_t>>& v) {
  std::vector<TokenSeq> out;
  for (const auto& s : v) out.push_back(to_tokens(s));
  return out;
}

TEST(Bleu, MatchesReferenceImplementation) {
  auto hyp = seqs({{1, 2, 3, 4, 5, 6}, {8, 9, 10, 11}, {13, 14, 15, 16, 17}});
  auto ref = seqs({{1, 2, 3, 4, 7, 6}, {8, 9, 10, 11, 12}, {13, 14, 15, 18, 17, 19}});
  BleuScore b = bleu_corpus(hyp, ref);
  EXPECT_NEAR(b.score, 50.05365981801864, 1e-9);
  EXPECT_EQ(b.matches, (std::array<std::uint64_t, 4>{13, 8, 5, 2}));
  EXPECT_EQ(b.totals, (std::array<std::uint64_t, 4>{15, 12, 9, 6}));
  EXPECT_NEAR(b.brevity_penalty, 0.8751733190429475, 1e-12);
  EXPECT_EQ(b.hypothesis_length, 15u);
  EXPECT_EQ(b.reference_length, 17u);
}

TEST(Bleu, ClipsRepeatedNgrams) {
  auto hyp = seqs({{5, 5, 5, 5, 6, 7, 8}, {1, 2, 3, 4}});
  auto ref = seqs({{5, 6, 7, 8, 9, 10}, {1, 2, 3, 4, 1, 2, 3}});
  BleuScore b = bleu_corpus(hyp, ref);
  EXPECT_NEAR(b.score, 48.105459048848395, 1e-9);
  EXPECT_EQ(b.matches, (std::array<std::uint64_t, 4>{8, 6, 4, 2}));
  EXPECT_EQ(b.totals, (std::array<std::uint64_t, 4>{11, 9, 7, 5}));
  EXPECT_NEAR(b.brevity_penalty, 0.8337529180751805, 1e-12);
}

TEST(Bleu, PerfectMatchIsHundred) {
  auto s = seqs({{1, 2, 3, 4, 5}, {6, 7, 8, 9}});
  BleuScore b = bleu_corpus(s, s);
  EXPECT_NEAR(b.score, 100.0, 1e-12);
  EXPECT_EQ(b.brevity_penalty, 1.0);
}

TEST(Bleu, NoBrevityPenaltyWhenLonger) {
  auto hyp = seqs({{1, 2, 3, 4, 5, 6}});
  auto ref = seqs({{1, 2, 3, 4, 5}});
  EXPECT_EQ(bleu_corpus(hyp, ref).brevity_penalty, 1.0);
}

TEST(Bleu, ZeroWhenAnOrderHasNoMatch) {
  auto hyp = seqs({{1, 3, 5, 7}});
  auto ref = seqs({{1, 2, 3, 4}});
  EXPECT_EQ(bleu_corpus(hyp, ref).score, 0.0);
}

TEST(Bleu, RejectsBadInput) {
  auto a = seqs({{1}});
  auto b = seqs({{1}, {2}});
  EXPECT_THROW(bleu_corpus(a, b), std::invalid_argument);
  EXPECT_THROW(bleu_corpus({}, {}), std::invalid_argument);
}

}  // namespace
}  // namespace transent
