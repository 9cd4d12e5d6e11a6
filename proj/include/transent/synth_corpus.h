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

#ifndef TRANSENT_SYNTH_CORPUS_H_
#define TRANSENT_SYNTH_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "transent/corpus.h"
#include "transent/synth.h"

namespace transent {

// Generator for a synthetic spec together with a parallel corpus in which a
// set of planted pivot tokens each occur exactly once in
// `sentences_per_pivot` sentences and nowhere else.
//
// Source id layout: specials, planted pivots, context pool, ignore marker
// (when ignored sentences are requested), background.
struct SynthCorpusOptions {
  std::uint32_t vocab_size = 1000;
  std::uint32_t special_count = 3;  // <pad> </s> <unk>
  std::uint32_t pivots = 20;
  std::uint32_t sentences_per_pivot = 36;
  std::uint32_t min_length = 6;
  std::uint32_t max_length = 14;

  // Tokens placed directly before the pivot; context rules key on them.
  std::uint32_t context_pool = 4;
  double context_prob = 0.9;

  // Size range of each pivot's synonym group (pivot included).
  std::uint32_t pivot_group_min = 1;
  std::uint32_t pivot_group_max = 6;
  std::uint32_t background_group_max = 4;

  // Per pivot: tokens joining the pivot's group after `partial_contexts`
  // of the context-pool tokens.
  std::uint32_t partial_synonyms = 0;
  std::uint32_t partial_contexts = 2;
  // Per pivot: synonyms that leave the group after one context token.
  std::uint32_t breaking_rules = 0;
  // Unstructured rules over background tokens.
  std::uint32_t random_rules = 0;
  std::uint32_t drops = 0;
  // Per pivot: sentences where the pivot directly follows the ignore marker,
  // so the translator ignores it.
  std::uint32_t ignored_sentences_per_pivot = 0;

  std::uint64_t seed = 1;
};

struct SynthBundle {
  SynthSpec spec;
  ParallelCorpus corpus;
  std::vector<TokenId> planted_pivots;
};

// Throws std::invalid_argument when the vocabulary is too small for the
// requested layout.
SynthBundle make_synth_bundle(const SynthCorpusOptions& options);

struct SynthBundleFiles {
  CorpusFiles corpus;
  std::filesystem::path spec;
};

// Writes source.txt, target.txt, source.vocab, target.vocab and spec.json
// into `dir`.
SynthBundleFiles write_synth_bundle(const SynthBundle& bundle,
                                    const std::filesystem::path& dir);

}  // namespace transent

#endif  // TRANSENT_SYNTH_CORPUS_H_
