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

#ifndef TRANSENT_CORPUS_H_
#define TRANSENT_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "transent/types.h"
#include "transent/vocab.h"

namespace transent {

inline constexpr std::size_t kDefaultMaxLen = 128;

struct SentencePair {
  SentenceId id = 0;
  TokenSeq source;
  TokenSeq target;
};

struct CorpusStats {
  std::size_t lines = 0;
  std::size_t dropped_too_long = 0;
  std::size_t dropped_empty = 0;
  std::size_t unknown_source = 0;
  std::size_t unknown_target = 0;
};

// Pairs are kept in ascending id order; ids are 0-based input line numbers,
// so dropped lines leave gaps.
struct ParallelCorpus {
  std::vector<SentencePair> pairs;
  Vocab source_vocab;
  Vocab target_vocab;
  std::string direction;
  CorpusStats stats;

  // nullptr if the id was dropped or never existed.
  const SentencePair* find(SentenceId id) const;
};

struct CorpusFiles {
  std::filesystem::path source;
  std::filesystem::path target;
  std::filesystem::path source_vocab;
  std::filesystem::path target_vocab;
};

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Whitespace-separated surface tokens, one sentence per line. Throws
// CorpusError on mismatched line counts or unreadable files.
ParallelCorpus load_parallel_corpus(const CorpusFiles& files,
                                    std::size_t max_len = kDefaultMaxLen,
                                    std::string direction = {});

// Builds a corpus from already-tokenized pairs, applying the same length
// filter. Used by generators and tests.
ParallelCorpus make_corpus(std::vector<SentencePair> pairs, Vocab source_vocab,
                           Vocab target_vocab, std::string direction = {},
                           std::size_t max_len = kDefaultMaxLen);

struct Occurrence {
  SentenceId sentence = 0;
  std::uint32_t position = 0;

  bool operator==(const Occurrence&) const = default;
};

// Source-side occurrence counts and postings. Postings are ordered by
// (sentence, position).
class FrequencyIndex {
 public:
  static FrequencyIndex build(const ParallelCorpus& corpus);

  std::size_t vocab_size() const { return postings_.size(); }
  std::uint64_t count(TokenId id) const;
  std::span<const Occurrence> postings(TokenId id) const;
  std::uint64_t total_tokens() const { return total_; }

  // Occurrences in sentences that contain the token exactly once.
  std::vector<Occurrence> single_occurrences(TokenId id) const;
  std::size_t single_occurrence_count(TokenId id) const;

 private:
  std::vector<std::vector<Occurrence>> postings_;
  std::uint64_t total_ = 0;
};

struct PivotSelection {
  std::uint64_t min_freq = 500;
  std::uint64_t max_freq = 1500;
  std::size_t count = 100;
  std::size_t sentences_per_token = 30;
};

class SelectionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tokens eligible as pivots: not special, frequency within
// [min_freq, max_freq], and at least sentences_per_token single-occurrence
// sentences. Ascending.
std::vector<TokenId> eligible_pivots(const FrequencyIndex& index,
                                     const Vocab& vocab,
                                     const PivotSelection& selection);

// Uniform seeded draw of selection.count eligible tokens, returned sorted by
// id. Throws SelectionError when too few tokens are eligible.
std::vector<TokenId> select_pivot_tokens(const FrequencyIndex& index,
                                         const Vocab& vocab,
                                         const PivotSelection& selection,
                                         std::uint64_t seed);

struct PivotSentence {
  SentencePair sentence;
  std::uint32_t position = 0;
  TokenId pivot{};
};

// Seeded uniform draw of `count` sentences containing the pivot exactly once,
// ordered by sentence id. The draw for each pivot uses its own sub-stream of
// `seed`, so adding or removing other pivots does not perturb it.
std::vector<PivotSentence> sample_pivot_sentences(const ParallelCorpus& corpus,
                                                  const FrequencyIndex& index,
                                                  TokenId pivot,
                                                  std::size_t count,
                                                  std::uint64_t seed);

// One pivot token with the sentences drawn for it.
struct PivotRecord {
  TokenId token{};
  std::string surface;
  std::uint64_t frequency = 0;
  std::vector<Occurrence> sentences;
};

std::vector<PivotSentence> materialize(const ParallelCorpus& corpus,
                                       const PivotRecord& record);

}  // namespace transent

#endif  // TRANSENT_CORPUS_H_
