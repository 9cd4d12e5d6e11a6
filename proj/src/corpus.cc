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

#include "transent/corpus.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "transent/rng.h"

namespace transent {
namespace {

constexpr std::uint64_t kPivotStream = 0x7069766f74ULL;      // "pivot"
constexpr std::uint64_t kSentenceStream = 0x73656e74ULL;     // "sent"

// Maps whitespace-separated surfaces to ids; unknown surfaces become <unk>.
TokenSeq encode_line(const std::string& line, const Vocab& vocab,
                     std::size_t& unknown, const std::string& where) {
  TokenSeq out;
  std::istringstream is(line);
  std::string surface;
  while (is >> surface) {
    if (auto id = vocab.find(surface)) {
      out.push_back(*id);
    } else if (auto unk = vocab.unknown()) {
      out.push_back(*unk);
      ++unknown;
    } else {
      throw CorpusError(where + ": unknown surface '" + surface +
                        "' and the vocab has no <unk> entry");
    }
  }
  return out;
}

}  // namespace

const SentencePair* ParallelCorpus::find(SentenceId id) const {
  auto it = std::lower_bound(
      pairs.begin(), pairs.end(), id,
      [](const SentencePair& p, SentenceId v) { return p.id < v; });
  if (it == pairs.end() || it->id != id) return nullptr;
  return &*it;
}

ParallelCorpus load_parallel_corpus(const CorpusFiles& files,
                                    std::size_t max_len,
                                    std::string direction) {
  ParallelCorpus corpus;
  corpus.source_vocab = load_vocab(files.source_vocab);
  corpus.target_vocab = load_vocab(files.target_vocab);
  corpus.direction = std::move(direction);

  std::ifstream src(files.source);
  std::ifstream tgt(files.target);
  if (!src) throw CorpusError("cannot open " + files.source.string());
  if (!tgt) throw CorpusError("cannot open " + files.target.string());

  std::string s_line;
  std::string t_line;
  SentenceId line_no = 0;
  for (;;) {
    const bool has_s = static_cast<bool>(std::getline(src, s_line));
    const bool has_t = static_cast<bool>(std::getline(tgt, t_line));
    if (!has_s && !has_t) break;
    if (has_s != has_t) {
      throw CorpusError("line counts differ: " + files.source.string() +
                        " and " + files.target.string() + " diverge at line " +
                        std::to_string(line_no + 1));
    }
    const std::string where = files.source.filename().string() + ":" +
                              std::to_string(line_no + 1);
    SentencePair pair;
    pair.id = line_no++;
    pair.source = encode_line(s_line, corpus.source_vocab,
                              corpus.stats.unknown_source, where);
    pair.target = encode_line(t_line, corpus.target_vocab,
                              corpus.stats.unknown_target, where);
    ++corpus.stats.lines;
    if (pair.source.empty() || pair.target.empty()) {
      ++corpus.stats.dropped_empty;
    } else if (pair.source.size() > max_len) {
      ++corpus.stats.dropped_too_long;
    } else {
      corpus.pairs.push_back(std::move(pair));
    }
  }
  return corpus;
}

ParallelCorpus make_corpus(std::vector<SentencePair> pairs, Vocab source_vocab,
                           Vocab target_vocab, std::string direction,
                           std::size_t max_len) {
  ParallelCorpus corpus;
  corpus.source_vocab = std::move(source_vocab);
  corpus.target_vocab = std::move(target_vocab);
  corpus.direction = std::move(direction);
  std::sort(pairs.begin(), pairs.end(),
            [](const SentencePair& a, const SentencePair& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].id == pairs[i - 1].id) {
      throw CorpusError("duplicate sentence id " + std::to_string(pairs[i].id));
    }
  }
  for (SentencePair& p : pairs) {
    for (TokenId t : p.source) (void)corpus.source_vocab.at(t);
    for (TokenId t : p.target) (void)corpus.target_vocab.at(t);
    ++corpus.stats.lines;
    if (p.source.empty() || p.target.empty()) {
      ++corpus.stats.dropped_empty;
    } else if (p.source.size() > max_len) {
      ++corpus.stats.dropped_too_long;
    } else {
      corpus.pairs.push_back(std::move(p));
    }
  }
  return corpus;
}

FrequencyIndex FrequencyIndex::build(const ParallelCorpus& corpus) {
  FrequencyIndex index;
  index.postings_.resize(corpus.source_vocab.size());
  for (const SentencePair& pair : corpus.pairs) {
    for (std::uint32_t j = 0; j < pair.source.size(); ++j) {
      const auto t = to_index(pair.source[j]);
      if (t >= index.postings_.size()) index.postings_.resize(t + 1);
      index.postings_[t].push_back({pair.id, j});
      ++index.total_;
    }
  }
  return index;
}

std::uint64_t FrequencyIndex::count(TokenId id) const {
  return to_index(id) < postings_.size() ? postings_[to_index(id)].size() : 0;
}

std::span<const Occurrence> FrequencyIndex::postings(TokenId id) const {
  if (to_index(id) >= postings_.size()) return {};
  return postings_[to_index(id)];
}

std::vector<Occurrence> FrequencyIndex::single_occurrences(TokenId id) const {
  std::vector<Occurrence> out;
  const auto occ = postings(id);
  for (std::size_t i = 0; i < occ.size();) {
    std::size_t j = i + 1;
    while (j < occ.size() && occ[j].sentence == occ[i].sentence) ++j;
    if (j == i + 1) out.push_back(occ[i]);
    i = j;
  }
  return out;
}

std::size_t FrequencyIndex::single_occurrence_count(TokenId id) const {
  std::size_t n = 0;
  const auto occ = postings(id);
  for (std::size_t i = 0; i < occ.size();) {
    std::size_t j = i + 1;
    while (j < occ.size() && occ[j].sentence == occ[i].sentence) ++j;
    if (j == i + 1) ++n;
    i = j;
  }
  return n;
}

std::vector<TokenId> eligible_pivots(const FrequencyIndex& index,
                                     const Vocab& vocab,
                                     const PivotSelection& selection) {
  std::vector<TokenId> out;
  for (const VocabEntry& e : vocab.entries()) {
    if (e.special) continue;
    const auto c = index.count(e.id);
    if (c < selection.min_freq || c > selection.max_freq) continue;
    if (index.single_occurrence_count(e.id) < selection.sentences_per_token) {
      continue;
    }
    out.push_back(e.id);
  }
  return out;
}

std::vector<TokenId> select_pivot_tokens(const FrequencyIndex& index,
                                         const Vocab& vocab,
                                         const PivotSelection& selection,
                                         std::uint64_t seed) {
  if (selection.count == 0) {
    throw std::invalid_argument("pivot count must be at least 1");
  }
  if (selection.min_freq > selection.max_freq) {
    throw std::invalid_argument("min_freq exceeds max_freq");
  }
  const auto eligible = eligible_pivots(index, vocab, selection);
  if (eligible.size() < selection.count) {
    throw SelectionError(
        "only " + std::to_string(eligible.size()) +
        " eligible pivot tokens (frequency in [" +
        std::to_string(selection.min_freq) + ", " +
        std::to_string(selection.max_freq) + "], >= " +
        std::to_string(selection.sentences_per_token) +
        " single-occurrence sentences); " + std::to_string(selection.count) +
        " requested");
  }
  Rng rng(derive_seed(seed, kPivotStream));
  auto picked = sample_without_replacement(std::span<const TokenId>(eligible),
                                           selection.count, rng);
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::vector<PivotSentence> sample_pivot_sentences(const ParallelCorpus& corpus,
                                                  const FrequencyIndex& index,
                                                  TokenId pivot,
                                                  std::size_t count,
                                                  std::uint64_t seed) {
  const auto pool = index.single_occurrences(pivot);
  if (pool.size() < count) {
    throw SelectionError("token " + std::to_string(to_index(pivot)) +
                         " has " + std::to_string(pool.size()) +
                         " single-occurrence sentences; " +
                         std::to_string(count) + " requested");
  }
  Rng rng(derive_seed(derive_seed(seed, kSentenceStream), to_index(pivot)));
  auto picked =
      sample_without_replacement(std::span<const Occurrence>(pool), count, rng);
  std::sort(picked.begin(), picked.end(),
            [](const Occurrence& a, const Occurrence& b) {
              return a.sentence < b.sentence;
            });
  PivotRecord record{pivot, {}, index.count(pivot), std::move(picked)};
  return materialize(corpus, record);
}

std::vector<PivotSentence> materialize(const ParallelCorpus& corpus,
                                       const PivotRecord& record) {
  std::vector<PivotSentence> out;
  out.reserve(record.sentences.size());
  for (const Occurrence& occ : record.sentences) {
    const SentencePair* pair = corpus.find(occ.sentence);
    if (pair == nullptr) {
      throw CorpusError("sentence " + std::to_string(occ.sentence) +
                        " not in corpus");
    }
    if (occ.position >= pair->source.size() ||
        pair->source[occ.position] != record.token) {
      throw CorpusError("sentence " + std::to_string(occ.sentence) +
                        " does not hold token " +
                        std::to_string(to_index(record.token)) +
                        " at position " + std::to_string(occ.position));
    }
    out.push_back({*pair, occ.position, record.token});
  }
  return out;
}

}  // namespace transent
