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

#ifndef TRANSENT_ENTROPY_H_
#define TRANSENT_ENTROPY_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "transent/degeneracy.h"
#include "transent/types.h"

namespace transent {

inline constexpr std::size_t kDefaultKeep = 24;
inline constexpr double kDefaultBetaC = 5.0;
inline constexpr std::size_t kDefaultK = 95;

// The `keep` subgroups with the smallest sizes, ordered by (size, sentence
// id). Larger subgroups are mostly sentences where the translator ignores the
// pivot outright. Throws std::invalid_argument if the ensemble is smaller
// than `keep`.
std::vector<Subgroup> select_smallest(const SubgroupEnsemble& ensemble,
                                      std::size_t keep = kDefaultKeep);

// counts[t] = number of kept subgroups containing t. Tokens never seen are
// absent. Probabilities are counts / kept and do not sum to one.
struct ReplacementDistribution {
  TokenId pivot{};
  std::uint32_t kept = 0;
  std::map<TokenId, std::uint32_t> counts;

  double probability(TokenId t) const;
};

ReplacementDistribution replacement_distribution(
    std::span<const Subgroup> kept);

// kept * sum(P_i), i.e. the exact integer sum of counts. Never thresholded.
std::uint64_t n_av(const ReplacementDistribution& dist);

// -p log2 p for p = count / kept; 0 when count is 0.
double entropy_term(std::uint32_t count, std::uint32_t kept);

// True when count / kept > beta_c / kept, i.e. count > beta_c.
bool passes_threshold(std::uint32_t count, double beta_c);

// Sum of -P_i log2 P_i over tokens with P_i > beta_c / kept. beta_c = 0
// includes every observed token.
double token_entropy(const ReplacementDistribution& dist, double beta_c);
std::size_t surviving_tokens(const ReplacementDistribution& dist,
                             double beta_c);

struct EntropyParams {
  std::size_t keep = kDefaultKeep;
  double beta_c = kDefaultBetaC;
  std::size_t k = kDefaultK;
};

struct TokenEntropyRecord {
  TokenId pivot{};
  std::string surface;
  std::size_t sentences = 0;
  double avg_subgroup_size = 0;       // over all measured sentences
  double kept_avg_subgroup_size = 0;  // over the kept subgroups only
  std::uint64_t n_av = 0;
  std::size_t distinct_replacements = 0;
  double entropy_raw = 0;
  double entropy_thresholded = 0;
  double beta_c = kDefaultBetaC;
  std::size_t surviving = 0;
};

TokenEntropyRecord token_record(const SubgroupEnsemble& ensemble,
                                const EntropyParams& params,
                                std::string surface = {});

// Pairwise summation.
double pairwise_sum(std::span<const double> values);

struct EntropyAggregate {
  std::size_t n = 0;
  std::size_t k = 0;
  double s = 0;    // mean over all records
  double s_k = 0;  // mean over the k lowest
};

// Uses entropy_thresholded. Throws std::invalid_argument unless
// 1 <= k <= records.size().
EntropyAggregate aggregate(std::span<const TokenEntropyRecord> records,
                           std::size_t k);
EntropyAggregate aggregate_values(std::span<const double> entropies,
                                  std::size_t k);

struct ModelEntropyReport {
  std::string model_id;
  std::string direction;
  EntropyParams params;
  std::vector<TokenEntropyRecord> records;  // ascending by entropy
  EntropyAggregate thresholded;
  EntropyAggregate raw;  // the same statistics at beta_c = 0
};

// Sorts records by (entropy_thresholded, pivot id). k is clamped to the
// record count.
ModelEntropyReport build_report(std::string model_id, std::string direction,
                                std::vector<TokenEntropyRecord> records,
                                const EntropyParams& params);

// Half-open bins [i*w, (i+1)*w).
struct EntropyHistogram {
  double bin_width = 1;
  std::vector<double> ordered;
  std::map<std::int64_t, std::size_t> bins;
};

EntropyHistogram histogram(std::span<const TokenEntropyRecord> records,
                           double bin_width);

}  // namespace transent

#endif  // TRANSENT_ENTROPY_H_
