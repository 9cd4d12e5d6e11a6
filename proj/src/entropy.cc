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

#include "transent/entropy.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace transent {

std::vector<Subgroup> select_smallest(const SubgroupEnsemble& ensemble,
                                      std::size_t keep) {
  if (keep == 0) throw std::invalid_argument("keep must be at least 1");
  if (ensemble.subgroups.size() < keep) {
    throw std::invalid_argument(
        "token " + std::to_string(to_index(ensemble.pivot)) + " has " +
        std::to_string(ensemble.subgroups.size()) + " subgroups; " +
        std::to_string(keep) + " must be kept");
  }
  std::vector<Subgroup> sorted = ensemble.subgroups;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Subgroup& a, const Subgroup& b) {
                     if (a.size() != b.size()) return a.size() < b.size();
                     return a.sentence_id < b.sentence_id;
                   });
  sorted.resize(keep);
  return sorted;
}

double ReplacementDistribution::probability(TokenId t) const {
  auto it = counts.find(t);
  if (it == counts.end() || kept == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(kept);
}

ReplacementDistribution replacement_distribution(
    std::span<const Subgroup> kept) {
  if (kept.empty()) {
    throw std::invalid_argument("replacement distribution needs subgroups");
  }
  ReplacementDistribution dist;
  dist.pivot = kept.front().pivot;
  dist.kept = static_cast<std::uint32_t>(kept.size());
  std::vector<TokenId> members;
  for (const Subgroup& sg : kept) {
    if (sg.pivot != dist.pivot) {
      throw std::invalid_argument("subgroups mix pivots " +
                                  std::to_string(to_index(dist.pivot)) + " and " +
                                  std::to_string(to_index(sg.pivot)));
    }
    members = sg.members;
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (TokenId t : members) ++dist.counts[t];
  }
  return dist;
}

std::uint64_t n_av(const ReplacementDistribution& dist) {
  std::uint64_t total = 0;
  for (const auto& [t, c] : dist.counts) total += c;
  return total;
}

double entropy_term(std::uint32_t count, std::uint32_t kept) {
  if (count == 0 || kept == 0) return 0.0;
  const double p = static_cast<double>(count) / static_cast<double>(kept);
  return -p * std::log2(p);
}

bool passes_threshold(std::uint32_t count, double beta_c) {
  return static_cast<double>(count) > beta_c;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double token_entropy(const ReplacementDistribution& dist, double beta_c) {
  if (!(beta_c >= 0.0)) throw std::invalid_argument("beta_c must be >= 0");
  std::vector<double> terms;
  terms.reserve(dist.counts.size());
  for (const auto& [t, c] : dist.counts) {
    if (passes_threshold(c, beta_c)) terms.push_back(entropy_term(c, dist.kept));
  }
  return pairwise_sum(terms);
}

std::size_t surviving_tokens(const ReplacementDistribution& dist,
                             double beta_c) {
  std::size_t n = 0;
  for (const auto& [t, c] : dist.counts) n += passes_threshold(c, beta_c);
  return n;
}

TokenEntropyRecord token_record(const SubgroupEnsemble& ensemble,
                                const EntropyParams& params,
                                std::string surface) {
  const auto kept = select_smallest(ensemble, params.keep);
  const auto dist = replacement_distribution(kept);

  TokenEntropyRecord r;
  r.pivot = ensemble.pivot;
  r.surface = std::move(surface);
  r.sentences = ensemble.subgroups.size();
  r.avg_subgroup_size = ensemble.avg_size();
  std::uint64_t kept_total = 0;
  for (const Subgroup& sg : kept) kept_total += sg.size();
  r.kept_avg_subgroup_size =
      static_cast<double>(kept_total) / static_cast<double>(kept.size());
  r.n_av = n_av(dist);
  r.distinct_replacements = dist.counts.size();
  r.entropy_raw = token_entropy(dist, 0.0);
  r.entropy_thresholded = token_entropy(dist, params.beta_c);
  r.beta_c = params.beta_c;
  r.surviving = surviving_tokens(dist, params.beta_c);
  return r;
}

EntropyAggregate aggregate_values(std::span<const double> entropies,
                                  std::size_t k) {
  if (k < 1 || k > entropies.size()) {
    throw std::invalid_argument("K = " + std::to_string(k) +
                                " outside [1, " +
                                std::to_string(entropies.size()) + "]");
  }
  std::vector<double> sorted(entropies.begin(), entropies.end());
  std::sort(sorted.begin(), sorted.end());
  EntropyAggregate a;
  a.n = sorted.size();
  a.k = k;
  a.s = pairwise_sum(sorted) / static_cast<double>(a.n);
  a.s_k = pairwise_sum(std::span<const double>(sorted).first(k)) /
          static_cast<double>(k);
  return a;
}

EntropyAggregate aggregate(std::span<const TokenEntropyRecord> records,
                           std::size_t k) {
  std::vector<double> e;
  e.reserve(records.size());
  for (const auto& r : records) e.push_back(r.entropy_thresholded);
  return aggregate_values(e, k);
}

ModelEntropyReport build_report(std::string model_id, std::string direction,
                                std::vector<TokenEntropyRecord> records,
                                const EntropyParams& params) {
  if (records.empty()) throw std::invalid_argument("report has no records");
  std::sort(records.begin(), records.end(),
            [](const TokenEntropyRecord& a, const TokenEntropyRecord& b) {
              if (a.entropy_thresholded != b.entropy_thresholded) {
                return a.entropy_thresholded < b.entropy_thresholded;
              }
              return a.pivot < b.pivot;
            });
  ModelEntropyReport report;
  report.model_id = std::move(model_id);
  report.direction = std::move(direction);
  report.params = params;
  const std::size_t k = std::min(params.k, records.size());
  report.thresholded = aggregate(records, k);
  std::vector<double> raw;
  for (const auto& r : records) raw.push_back(r.entropy_raw);
  report.raw = aggregate_values(raw, k);
  report.records = std::move(records);
  return report;
}

EntropyHistogram histogram(std::span<const TokenEntropyRecord> records,
                           double bin_width) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw std::invalid_argument("histogram bin width must be positive");
  }
  EntropyHistogram h;
  h.bin_width = bin_width;
  for (const auto& r : records) h.ordered.push_back(r.entropy_thresholded);
  std::sort(h.ordered.begin(), h.ordered.end());
  for (double e : h.ordered) {
    ++h.bins[static_cast<std::int64_t>(std::floor(e / bin_width))];
  }
  return h;
}

}  // namespace transent
