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

// Brute-force reference implementations used as test oracles. Everything here
// is written directly from the definitions, favouring obviousness over speed,
// and shares no code with the library beyond plain data types.

#ifndef TRANSENT_TESTS_ORACLE_BRUTE_FORCE_H_
#define TRANSENT_TESTS_ORACLE_BRUTE_FORCE_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "transent/synth.h"

namespace oracle {

using Seq = std::vector<std::uint32_t>;

inline Seq ids(const transent::TokenSeq& s) {
  Seq out;
  for (auto t : s) out.push_back(static_cast<std::uint32_t>(t));
  return out;
}

// Direct evaluation of a synthetic spec.
class Evaluator {
 public:
  explicit Evaluator(const transent::SynthSpec& spec) : spec_(spec) {
    for (auto t : spec.drop) drop_.insert(static_cast<std::uint32_t>(t));
    for (auto t : spec.ignore_after) ignore_.insert(static_cast<std::uint32_t>(t));
    for (auto t : spec.special) special_.insert(static_cast<std::uint32_t>(t));
    for (const auto& r : spec.context_rules) {
      auto key = std::make_pair(static_cast<std::uint32_t>(r.token),
                                static_cast<std::uint32_t>(r.neighbor));
      rules_.emplace(key, r.group);  // emplace keeps the first rule
    }
  }

  Seq translate(const Seq& in, std::uint32_t max_len = UINT32_MAX) const {
    Seq out;
    for (std::size_t j = 0; j < in.size(); ++j) {
      if (drop_.count(in[j])) continue;
      if (j > 0 && ignore_.count(in[j - 1])) continue;
      std::uint32_t g = spec_.group_of[in[j]];
      if (j > 0) {
        auto it = rules_.find({in[j], in[j - 1]});
        if (it != rules_.end()) g = it->second;
      }
      out.push_back(static_cast<std::uint32_t>(spec_.emission[g]));
    }
    if (out.size() > max_len) out.resize(max_len);
    return out;
  }

  bool special(std::uint32_t t) const { return special_.count(t) > 0; }
  std::uint32_t vocab_size() const { return spec_.source_vocab_size; }

  // Members of the substitution subgroup at position j.
  std::vector<std::uint32_t> subgroup(const Seq& sentence, std::size_t j) const {
    const Seq ref = translate(sentence);
    std::vector<std::uint32_t> members;
    for (std::uint32_t t = 0; t < vocab_size(); ++t) {
      if (t == sentence[j] || special(t)) continue;
      Seq s = sentence;
      s[j] = t;
      if (translate(s) == ref) members.push_back(t);
    }
    return members;
  }

  std::uint64_t pair_count(const Seq& sentence, std::size_t ja, std::size_t jb) const {
    const Seq ref = translate(sentence);
    std::uint64_t n = 0;
    for (auto a : subgroup(sentence, ja)) {
      for (auto b : subgroup(sentence, jb)) {
        Seq s = sentence;
        s[ja] = a;
        s[jb] = b;
        if (translate(s) == ref) ++n;
      }
    }
    return n;
  }

 private:
  const transent::SynthSpec& spec_;
  std::set<std::uint32_t> drop_;
  std::set<std::uint32_t> ignore_;
  std::set<std::uint32_t> special_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> rules_;
};

struct SentenceResult {
  std::uint64_t sentence_id;
  std::vector<std::uint32_t> members;
};

struct TokenStats {
  std::map<std::uint32_t, std::uint32_t> counts;  // c_i
  std::uint64_t n_av = 0;
  double avg_size = 0;
  double entropy = 0;
  double entropy_raw = 0;
};

// Statistics for one pivot from its per-sentence subgroups.
inline TokenStats token_stats(std::vector<SentenceResult> results, std::size_t keep,
                              double beta_c) {
  TokenStats st;
  double total = 0;
  for (const auto& r : results) total += static_cast<double>(r.members.size());
  st.avg_size = total / static_cast<double>(results.size());

  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
    return std::make_tuple(a.members.size(), a.sentence_id) <
           std::make_tuple(b.members.size(), b.sentence_id);
  });
  results.resize(keep);
  for (const auto& r : results) {
    for (auto t : r.members) st.counts[t] += 1;
  }
  for (const auto& [t, c] : st.counts) {
    st.n_av += c;
    const double p = static_cast<double>(c) / static_cast<double>(keep);
    const double term = -p * std::log2(p);
    st.entropy_raw += term;
    if (static_cast<double>(c) > beta_c) st.entropy += term;
  }
  return st;
}

// Mean of the k smallest values.
inline double lowest_k_mean(std::vector<double> v, std::size_t k) {
  std::sort(v.begin(), v.end());
  double s = 0;
  for (std::size_t i = 0; i < k; ++i) s += v[i];
  return s / static_cast<double>(k);
}

}  // namespace oracle

#endif  // TRANSENT_TESTS_ORACLE_BRUTE_FORCE_H_
