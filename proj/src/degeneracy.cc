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

#include "transent/degeneracy.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace transent {
namespace {

void check_position(const SentencePair& s, std::uint32_t position, TokenId expected) {
  if (position >= s.source.size()) {
    throw std::invalid_argument("position " + std::to_string(position) +
                                " outside sentence " + std::to_string(s.id) +
                                " of length " + std::to_string(s.source.size()));
  }
  if (s.source[position] != expected) {
    throw std::invalid_argument("sentence " + std::to_string(s.id) +
                                " holds token " +
                                std::to_string(to_index(s.source[position])) +
                                " at position " + std::to_string(position) +
                                ", not " + std::to_string(to_index(expected)));
  }
}

}  // namespace

std::uint64_t SubgroupEnsemble::total_size() const {
  std::uint64_t total = 0;
  for (const Subgroup& s : subgroups) total += s.size();
  return total;
}

double SubgroupEnsemble::avg_size() const {
  if (subgroups.empty()) return 0.0;
  return static_cast<double>(total_size()) / static_cast<double>(subgroups.size());
}

Subgroup substitution_sweep(const PivotSentence& ps, const Vocab& vocab,
                            Translator& translator, const DecodeParams& params,
                            const SweepOptions& options) {
  check_position(ps.sentence, ps.position, ps.pivot);
  const std::size_t batch_size = std::max<std::size_t>(options.batch_size, 1);

  Subgroup sg;
  sg.pivot = ps.pivot;
  sg.sentence_id = ps.sentence.id;
  sg.position = ps.position;
  sg.reference_output = translate_one(translator, ps.sentence.source, params).output;

  std::vector<TokenId> universe = vocab.substitution_universe();
  std::erase(universe, ps.pivot);

  std::vector<TokenSeq> batch;
  for (std::size_t begin = 0; begin < universe.size(); begin += batch_size) {
    const std::size_t end = std::min(universe.size(), begin + batch_size);
    batch.assign(end - begin, ps.sentence.source);
    for (std::size_t i = begin; i < end; ++i) {
      batch[i - begin][ps.position] = universe[i];
    }
    const auto out = translator.translate_batch(batch, params);
    if (out.size() != batch.size()) {
      throw ProtocolError("translator returned " + std::to_string(out.size()) +
                          " outputs for " + std::to_string(batch.size()) +
                          " inputs");
    }
    for (std::size_t i = begin; i < end; ++i) {
      if (out[i - begin].output == sg.reference_output) {
        sg.members.push_back(universe[i]);
      }
    }
  }
  return sg;
}

SubgroupEnsemble sweep_ensemble(TokenId pivot,
                                std::span<const PivotSentence> sentences,
                                const Vocab& vocab, Translator& translator,
                                const DecodeParams& params,
                                const SweepOptions& options) {
  SubgroupEnsemble ensemble;
  ensemble.pivot = pivot;
  ensemble.subgroups.reserve(sentences.size());
  for (const PivotSentence& ps : sentences) {
    if (ps.pivot != pivot) {
      throw std::invalid_argument("ensemble for token " +
                                  std::to_string(to_index(pivot)) +
                                  " given a sentence for token " +
                                  std::to_string(to_index(ps.pivot)));
    }
    ensemble.subgroups.push_back(
        substitution_sweep(ps, vocab, translator, params, options));
  }
  return ensemble;
}

PairDegeneracy pair_sweep(const SentencePair& sentence, const Subgroup& sg_a,
                          const Subgroup& sg_b, Translator& translator,
                          const DecodeParams& params,
                          const SweepOptions& options) {
  if (sg_a.sentence_id != sentence.id || sg_b.sentence_id != sentence.id) {
    throw std::invalid_argument("pair sweep subgroups come from another sentence");
  }
  if (sg_a.position == sg_b.position) {
    throw std::invalid_argument("pair sweep needs two distinct positions");
  }
  check_position(sentence, sg_a.position, sg_a.pivot);
  check_position(sentence, sg_b.position, sg_b.pivot);
  if (sg_a.reference_output != sg_b.reference_output) {
    throw std::invalid_argument(
        "pair sweep subgroups disagree on the reference translation");
  }

  PairDegeneracy pd;
  pd.sentence_id = sentence.id;
  pd.position_a = sg_a.position;
  pd.position_b = sg_b.position;
  pd.token_a = sg_a.pivot;
  pd.token_b = sg_b.pivot;
  pd.sg_a = sg_a.size();
  pd.sg_b = sg_b.size();
  if (pd.sg_a == 0 || pd.sg_b == 0) return pd;

  const std::size_t batch_size = std::max<std::size_t>(options.batch_size, 1);
  const std::uint64_t total = pd.sg_a * pd.sg_b;
  std::vector<TokenSeq> batch;
  for (std::uint64_t begin = 0; begin < total; begin += batch_size) {
    const std::uint64_t end = std::min<std::uint64_t>(total, begin + batch_size);
    batch.assign(end - begin, sentence.source);
    for (std::uint64_t k = begin; k < end; ++k) {
      TokenSeq& s = batch[k - begin];
      s[pd.position_a] = sg_a.members[k / pd.sg_b];
      s[pd.position_b] = sg_b.members[k % pd.sg_b];
    }
    const auto out = translator.translate_batch(batch, params);
    if (out.size() != batch.size()) {
      throw ProtocolError("translator returned " + std::to_string(out.size()) +
                          " outputs for " + std::to_string(batch.size()) +
                          " inputs");
    }
    for (const Translation& t : out) {
      if (t.output == sg_a.reference_output) ++pd.pair_count;
    }
  }
  pd.ratio = static_cast<double>(pd.pair_count) / static_cast<double>(total);
  return pd;
}

}  // namespace transent
