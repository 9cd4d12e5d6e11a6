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

#include "transent/synth_corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include "transent/rng.h"

namespace transent {
namespace {

Vocab corpus_source_vocab(std::uint32_t size, std::uint32_t specials) {
  static const char* kNames[] = {"<pad>", "</s>", "<unk>"};
  std::vector<VocabEntry> entries(size);
  for (std::uint32_t i = 0; i < size; ++i) {
    entries[i].id = token(i);
    if (i < specials) {
      entries[i].special = true;
      entries[i].surface = i < 3 ? kNames[i] : "<special" + std::to_string(i) + ">";
    } else {
      entries[i].surface = "s" + std::to_string(i);
    }
  }
  return Vocab(std::move(entries));
}

std::uint32_t pick(Rng& rng, std::uint32_t lo, std::uint32_t hi) {
  return lo + static_cast<std::uint32_t>(rng.below(std::uint64_t{hi} - lo + 1));
}

}  // namespace

SynthBundle make_synth_bundle(const SynthCorpusOptions& o) {
  if (o.min_length < 2 || o.max_length < o.min_length) {
    throw std::invalid_argument("sentence length range must start at 2 or more");
  }
  if (o.pivot_group_min < 1 || o.pivot_group_max < o.pivot_group_min) {
    throw std::invalid_argument("bad pivot group size range");
  }
  Rng rng(derive_seed(o.seed, 0x62756e646c65ULL));

  std::uint32_t next = o.special_count;
  const std::uint32_t first_pivot = next;
  next += o.pivots;
  const std::uint32_t first_pool = next;
  next += o.context_pool;
  const bool has_marker = o.ignored_sentences_per_pivot > 0;
  const std::uint32_t marker = next;
  if (has_marker) ++next;
  const std::uint32_t first_background = next;

  const std::uint64_t reserved =
      std::uint64_t{o.pivots} * (o.pivot_group_max - 1 + o.partial_synonyms);
  if (o.vocab_size <= first_background ||
      o.vocab_size - first_background < reserved + 8) {
    throw std::invalid_argument("vocab of " + std::to_string(o.vocab_size) +
                                " is too small for the requested layout");
  }

  SynthSpec spec;
  spec.source_vocab_size = o.vocab_size;
  spec.group_of.assign(o.vocab_size, 0);
  std::uint32_t groups = 0;
  auto new_group = [&] { return groups++; };
  for (std::uint32_t i = 0; i < o.special_count; ++i) {
    spec.special.push_back(token(i));
    spec.group_of[i] = new_group();
  }

  std::vector<std::uint32_t> background(o.vocab_size - first_background);
  for (std::uint32_t i = 0; i < background.size(); ++i) {
    background[i] = first_background + i;
  }
  std::vector<std::uint32_t> shuffled;
  for (std::size_t i : sample_indices(background.size(), background.size(), rng)) {
    shuffled.push_back(background[i]);
  }
  std::size_t cursor = 0;

  std::vector<std::vector<std::uint32_t>> synonyms(o.pivots);
  for (std::uint32_t p = 0; p < o.pivots; ++p) {
    const std::uint32_t g = new_group();
    spec.group_of[first_pivot + p] = g;
    const std::uint32_t size = pick(rng, o.pivot_group_min, o.pivot_group_max);
    for (std::uint32_t s = 1; s < size; ++s) {
      const std::uint32_t t = shuffled[cursor++];
      spec.group_of[t] = g;
      synonyms[p].push_back(t);
    }
  }
  for (std::uint32_t c = 0; c < o.context_pool; ++c) {
    spec.group_of[first_pool + c] = new_group();
  }
  if (has_marker) {
    spec.group_of[marker] = new_group();
    spec.ignore_after.push_back(token(marker));
  }

  for (std::uint32_t p = 0; p < o.pivots && o.context_pool > 0; ++p) {
    const std::uint32_t contexts = std::min(o.partial_contexts, o.context_pool);
    for (std::uint32_t s = 0; s < o.partial_synonyms; ++s) {
      const std::uint32_t t = shuffled[cursor++];
      spec.group_of[t] = new_group();
      for (std::size_t k : sample_indices(o.context_pool, contexts, rng)) {
        spec.context_rules.push_back({token(t),
                                      token(first_pool + static_cast<std::uint32_t>(k)),
                                      spec.group_of[first_pivot + p]});
      }
    }
  }

  // Remaining background tokens: random small groups.
  while (cursor < shuffled.size()) {
    const std::uint32_t g = new_group();
    const std::uint32_t size = pick(rng, 1, std::max<std::uint32_t>(1, o.background_group_max));
    for (std::uint32_t s = 0; s < size && cursor < shuffled.size(); ++s) {
      spec.group_of[shuffled[cursor++]] = g;
    }
  }

  auto random_background = [&] {
    return background[rng.below(background.size())];
  };
  for (std::uint32_t p = 0; p < o.pivots && o.context_pool > 0; ++p) {
    if (synonyms[p].empty()) continue;
    for (std::uint32_t b = 0; b < o.breaking_rules; ++b) {
      const std::uint32_t s = synonyms[p][rng.below(synonyms[p].size())];
      const std::uint32_t n = first_pool + static_cast<std::uint32_t>(rng.below(o.context_pool));
      spec.context_rules.push_back({token(s), token(n), spec.group_of[random_background()]});
    }
  }
  for (std::uint32_t r = 0; r < o.random_rules; ++r) {
    const std::uint32_t t = random_background();
    const std::uint32_t n =
        o.context_pool > 0 && rng.chance(0.5)
            ? first_pool + static_cast<std::uint32_t>(rng.below(o.context_pool))
            : random_background();
    spec.context_rules.push_back(
        {token(t), token(n), static_cast<std::uint32_t>(rng.below(groups))});
  }
  std::set<std::uint32_t> drops;
  while (drops.size() < std::min<std::size_t>(o.drops, background.size())) {
    drops.insert(random_background());
  }
  for (auto d : drops) spec.drop.push_back(token(d));

  spec.emission.resize(groups);
  for (std::uint32_t g = 0; g < groups; ++g) spec.emission[g] = token(g);
  spec.target_vocab_size = groups;
  spec.validate();

  SynthBundle bundle;
  for (std::uint32_t p = 0; p < o.pivots; ++p) {
    bundle.planted_pivots.push_back(token(first_pivot + p));
  }

  std::vector<TokenSeq> sources;
  for (std::uint32_t p = 0; p < o.pivots; ++p) {
    for (std::uint32_t i = 0; i < o.sentences_per_pivot; ++i) {
      const std::uint32_t len = pick(rng, o.min_length, o.max_length);
      TokenSeq src(len);
      for (auto& t : src) t = token(random_background());
      const std::uint32_t j = pick(rng, 1, len - 1);
      src[j] = token(first_pivot + p);
      if (i < o.ignored_sentences_per_pivot) {
        src[j - 1] = token(marker);
      } else if (o.context_pool > 0 && rng.chance(o.context_prob)) {
        src[j - 1] = token(first_pool + static_cast<std::uint32_t>(rng.below(o.context_pool)));
      }
      sources.push_back(std::move(src));
    }
  }

  const SynthModel model(spec);
  std::vector<SentencePair> pairs;
  const auto order = sample_indices(sources.size(), sources.size(), rng);
  for (std::size_t id = 0; id < order.size(); ++id) {
    SentencePair pair;
    pair.id = id;
    pair.source = std::move(sources[order[id]]);
    pair.target = model.translate(pair.source).output;
    if (pair.target.empty()) pair.target.push_back(token(0));
    pairs.push_back(std::move(pair));
  }

  bundle.corpus = make_corpus(std::move(pairs),
                              corpus_source_vocab(o.vocab_size, o.special_count),
                              Vocab::synthetic(groups, "t"), "synthetic",
                              std::max<std::size_t>(o.max_length, kDefaultMaxLen));
  bundle.spec = std::move(spec);
  return bundle;
}

SynthBundleFiles write_synth_bundle(const SynthBundle& bundle,
                                    const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  SynthBundleFiles files;
  files.corpus = {dir / "source.txt", dir / "target.txt", dir / "source.vocab",
                  dir / "target.vocab"};
  files.spec = dir / "spec.json";

  const ParallelCorpus& c = bundle.corpus;
  std::ofstream src(files.corpus.source);
  std::ofstream tgt(files.corpus.target);
  auto write_line = [](std::ofstream& out, const TokenSeq& seq, const Vocab& v) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (i) out << ' ';
      out << v.at(seq[i]).surface;
    }
    out << '\n';
  };
  for (const SentencePair& p : c.pairs) {
    write_line(src, p.source, c.source_vocab);
    write_line(tgt, p.target, c.target_vocab);
  }
  if (!src || !tgt) throw std::runtime_error("cannot write corpus into " + dir.string());
  write_vocab(c.source_vocab, files.corpus.source_vocab);
  write_vocab(c.target_vocab, files.corpus.target_vocab);
  save_synth_spec(bundle.spec, files.spec);
  return files;
}

}  // namespace transent
