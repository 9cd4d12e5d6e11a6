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

#include <numeric>
#include <random>

#include "oracle/brute_force.h"
#include "test_util.h"
#include "transent/synth.h"

namespace transent {
namespace {

using testutil::grouped_spec;

std::vector<std::uint32_t> run(const SynthSpec& s, std::vector<std::uint32_t> in,
                               std::uint32_t max_len = 128) {
  SynthTranslator t(s);
  DecodeParams p;
  p.max_output_len = max_len;
  return to_indices(translate_one(t, to_tokens(in), p).output);
}

SynthSpec two_group_spec() {
  // {0,1} -> g0 emitting 7, {2} -> g1 emitting 8, {3} -> g2 emitting 9.
  SynthSpec s;
  s.source_vocab_size = 4;
  s.target_vocab_size = 10;
  s.group_of = {0, 0, 1, 2};
  s.emission = {TokenId{7}, TokenId{8}, TokenId{9}};
  return s;
}

TEST(Synth, GroupEmission) {
  EXPECT_EQ(run(two_group_spec(), {0, 2}), (std::vector<std::uint32_t>{7, 8}));
  EXPECT_EQ(run(two_group_spec(), {1, 2}), (std::vector<std::uint32_t>{7, 8}));
}

TEST(Synth, DropSetEmitsNothing) {
  SynthSpec s = two_group_spec();
  s.drop = {TokenId{3}};
  EXPECT_EQ(run(s, {0, 3, 2}), (std::vector<std::uint32_t>{7, 8}));
}

TEST(Synth, SharedGroupSameOutput) {
  std::vector<std::uint32_t> groups(20);
  std::iota(groups.begin(), groups.end(), 0u);
  SynthSpec s = grouped_spec(groups);
  s.group_of[9] = s.group_of[13] = 5;
  s.emission[5] = TokenId{19};
  EXPECT_EQ(run(s, {5}), run(s, {9}));
  EXPECT_EQ(run(s, {9}), run(s, {13}));
  EXPECT_EQ(run(s, {9}), (std::vector<std::uint32_t>{19}));
}

TEST(Synth, ContextRuleOverridesGroup) {
  SynthSpec s = two_group_spec();
  s.context_rules = {{TokenId{1}, TokenId{2}, 2}};
  EXPECT_EQ(run(s, {2, 1}), (std::vector<std::uint32_t>{8, 9}));
  EXPECT_EQ(run(s, {1, 2}), (std::vector<std::uint32_t>{7, 8}));
  // Only the left neighbour counts, and the first rule wins.
  s.context_rules.push_back({TokenId{1}, TokenId{2}, 1});
  EXPECT_EQ(run(s, {2, 1}), (std::vector<std::uint32_t>{8, 9}));
}

TEST(Synth, IgnoreAfterSilencesRightNeighbour) {
  SynthSpec s = two_group_spec();
  s.ignore_after = {TokenId{3}};
  EXPECT_EQ(run(s, {3, 0, 2}), (std::vector<std::uint32_t>{9, 8}));
  EXPECT_EQ(run(s, {3, 1, 2}), (std::vector<std::uint32_t>{9, 8}));
}

TEST(Synth, TruncatesToMaxOutputLen) {
  EXPECT_EQ(run(two_group_spec(), {0, 2, 3, 1}, 2), (std::vector<std::uint32_t>{7, 8}));
}

TEST(Synth, ValidateRejectsBadSpecs) {
  SynthSpec s = two_group_spec();
  s.group_of.pop_back();
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = two_group_spec();
  s.group_of[0] = 5;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = two_group_spec();
  s.emission[0] = TokenId{10};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = two_group_spec();
  s.context_rules = {{TokenId{4}, TokenId{0}, 0}};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = two_group_spec();
  s.drop = {TokenId{4}};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  EXPECT_NO_THROW(two_group_spec().validate());
}

TEST(Synth, RejectsOutOfVocabInput) {
  SynthTranslator t(two_group_spec());
  std::vector<TokenSeq> in = {to_tokens({0, 4})};
  EXPECT_THROW(t.translate_batch(in, {}), std::invalid_argument);
  in = {TokenSeq{}};
  EXPECT_THROW(t.translate_batch(in, {}), std::invalid_argument);
}

TEST(Synth, JsonRoundTrip) {
  testutil::TempDir dir("synth_json");
  SynthSpec s = two_group_spec();
  s.drop = {TokenId{3}};
  s.ignore_after = {TokenId{1}};
  s.special = {TokenId{0}};
  s.context_rules = {{TokenId{1}, TokenId{2}, 2}};
  save_synth_spec(s, dir / "spec.json");
  EXPECT_EQ(load_synth_spec(dir / "spec.json"), s);
}

TEST(Synth, VocabsReflectSpec) {
  SynthSpec s = grouped_spec(std::vector<std::uint32_t>(1000, 0));
  s.special = {TokenId{0}, TokenId{1}, TokenId{2}, TokenId{3}};
  SynthTranslator t(s);
  EXPECT_EQ(t.source_vocab().size(), 1000u);
  EXPECT_EQ(t.source_vocab().substitution_universe().size(), 996u);
  s.special.clear();
  EXPECT_EQ(SynthTranslator(s).source_vocab().special_count(), 0u);
}

TEST(Synth, MatchesOracleOnRandomSpecs) {
  std::mt19937_64 gen(17);
  for (int round = 0; round < 40; ++round) {
    SynthSpec s = testutil::random_spec(gen, 30, true);
    oracle::Evaluator ev(s);
    SynthModel m(s);
    std::uniform_int_distribution<std::uint32_t> tok(0, 29);
    std::uniform_int_distribution<int> len(1, 12);
    for (int i = 0; i < 50; ++i) {
      std::vector<std::uint32_t> in(len(gen));
      for (auto& x : in) x = tok(gen);
      ASSERT_EQ(oracle::ids(m.translate(to_tokens(in)).output), ev.translate(in));
    }
  }
}

// Without rules or drops, a single-position change preserves the output iff
// the two tokens share a group.
TEST(Synth, SoundnessOnSmallVocabs) {
  std::mt19937_64 gen(5);
  for (int round = 0; round < 10; ++round) {
    SynthSpec s = testutil::random_spec(gen, 12, false);
    SynthModel m(s);
    std::vector<std::uint32_t> base = {1, 4, 7};
    for (std::uint32_t j = 0; j < base.size(); ++j) {
      for (std::uint32_t t = 0; t < 12; ++t) {
        auto in = base;
        in[j] = t;
        const bool same = m.translate(to_tokens(in)).output ==
                          m.translate(to_tokens(base)).output;
        EXPECT_EQ(same, s.group_of[t] == s.group_of[base[j]]);
      }
    }
  }
}

TEST(Synth, BatchInvariance) {
  std::mt19937_64 gen(9);
  SynthSpec s = testutil::random_spec(gen, 50, true);
  SynthTranslator t(s);
  std::vector<TokenSeq> inputs;
  std::uniform_int_distribution<std::uint32_t> tok(0, 49);
  for (int i = 0; i < 40; ++i) {
    TokenSeq in;
    for (int j = 0; j < 6; ++j) in.push_back(TokenId{tok(gen)});
    inputs.push_back(in);
  }
  auto whole = t.translate_batch(inputs, {});
  std::vector<TokenSeq> reversed(inputs.rbegin(), inputs.rend());
  auto rev = t.translate_batch(reversed, {});
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    EXPECT_EQ(whole[i].output, rev[inputs.size() - 1 - i].output);
    EXPECT_EQ(whole[i].output, translate_one(t, inputs[i], {}).output);
  }
}

}  // namespace
}  // namespace transent
