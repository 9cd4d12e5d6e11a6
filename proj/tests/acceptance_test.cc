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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Tolerances and budgets are fixed below.

#include <fcntl.h>
#include <signal.h>
#include <spdlog/spdlog.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracle/brute_force.h"
#include "test_util.h"
#include "transent/cache.h"
#include "transent/pipeline.h"
#include "transent/synth_corpus.h"

extern char** environ;

namespace {

using namespace transent;
using Clock = std::chrono::steady_clock;

constexpr double kEntropyTolerance = 1e-12;
constexpr double kOracleBudgetSeconds = 60.0;
constexpr double kSweepBudgetSeconds = 10.0;
constexpr int kOracleSpecs = 20;
constexpr std::size_t kPivots = 20;
constexpr std::size_t kSentences = 30;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail.str("");
    if (!pass) detail << "; ";
    pass = false;
    detail << why;
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void quiet() {
  spdlog::set_level(spdlog::level::warn);
}

RunConfig config_for(const SynthBundleFiles& files, const std::filesystem::path& out,
                     std::size_t pivots, std::size_t sentences) {
  RunConfig c;
  c.corpus = files.corpus;
  c.synth_spec = files.spec.string();
  c.direction = "synthetic";
  c.model_id = "synth";
  c.selection = {sentences, sentences, pivots, sentences};
  c.seed = 7;
  c.output_dir = out;
  return c;
}

std::vector<Subgroup> read_sweeps(const RunConfig& c) {
  std::vector<Subgroup> out;
  for (const Json& j : read_jsonl(c.output_dir / "sweeps.jsonl").records) {
    out.push_back(j.get<Subgroup>());
  }
  return out;
}

// 1. Pipeline statistics equal a brute-force enumeration on random specs.
Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 gen(2024);
  double pipeline_seconds = 0;
  std::size_t tokens_checked = 0;
  std::size_t tokens_nonzero = 0;
  std::size_t subgroups_checked = 0;
  double worst_entropy_error = 0;
  const auto t_all = Clock::now();
  for (int spec_index = 0; spec_index < kOracleSpecs; ++spec_index) {
    SynthCorpusOptions opt;
    opt.vocab_size = std::uniform_int_distribution<std::uint32_t>(400, 1000)(gen);
    opt.pivots = kPivots;
    opt.sentences_per_pivot = kSentences;
    opt.pivot_group_max = std::uniform_int_distribution<std::uint32_t>(1, 6)(gen);
    opt.partial_synonyms = std::uniform_int_distribution<std::uint32_t>(0, 4)(gen);
    opt.breaking_rules = std::uniform_int_distribution<std::uint32_t>(0, 3)(gen);
    opt.random_rules = std::uniform_int_distribution<std::uint32_t>(0, 40)(gen);
    opt.drops = std::uniform_int_distribution<std::uint32_t>(0, 6)(gen);
    opt.ignored_sentences_per_pivot = std::uniform_int_distribution<std::uint32_t>(0, 8)(gen);
    opt.seed = gen();
    const SynthBundle bundle = make_synth_bundle(opt);
    testutil::TempDir dir("acc_oracle");
    const auto files = write_synth_bundle(bundle, dir / "data");
    RunConfig c = config_for(files, dir / "run", kPivots, kSentences);

    const auto t0 = Clock::now();
    cmd_select_pivots(c);
    cmd_sweep(c);
    const ModelEntropyReport report = cmd_entropy(c);
    pipeline_seconds += seconds_since(t0);

    // Oracle side.
    oracle::Evaluator ev(bundle.spec);
    std::map<std::uint32_t, std::vector<Subgroup>> swept;
    for (Subgroup& sg : read_sweeps(c)) swept[to_index(sg.pivot)].push_back(std::move(sg));
    std::map<std::uint32_t, TokenEntropyRecord> records;
    for (const auto& r : report.records) records[to_index(r.pivot)] = r;
    std::vector<double> oracle_entropies;

    for (const Json& j : read_jsonl(c.pivots_file()).records) {
      const PivotRecord p = j.get<PivotRecord>();
      const std::uint32_t pivot = to_index(p.token);
      std::vector<oracle::SentenceResult> results;
      const auto& sgs = swept[pivot];
      if (sgs.size() != p.sentences.size()) {
        o.fail("spec " + std::to_string(spec_index) + ": sweep count mismatch");
        continue;
      }
      for (std::size_t m = 0; m < p.sentences.size(); ++m) {
        const auto seq = oracle::ids(bundle.corpus.find(p.sentences[m].sentence)->source);
        if (seq[p.sentences[m].position] != pivot) o.fail("pivot not at recorded position");
        auto members = ev.subgroup(seq, p.sentences[m].position);
        if (oracle::ids(sgs[m].members) != members) {
          o.fail("spec " + std::to_string(spec_index) + " pivot " + std::to_string(pivot) +
                 ": subgroup differs from enumeration");
        }
        ++subgroups_checked;
        results.push_back({p.sentences[m].sentence, std::move(members)});
      }
      const auto want = oracle::token_stats(results, kDefaultKeep, kDefaultBetaC);
      oracle_entropies.push_back(want.entropy);

      // c_i and P_i from the pipeline's own selection of kept subgroups.
      SubgroupEnsemble e{p.token, sgs};
      const auto dist = replacement_distribution(select_smallest(e, kDefaultKeep));
      std::map<std::uint32_t, std::uint32_t> got_counts;
      for (const auto& [t, cnt] : dist.counts) got_counts[to_index(t)] = cnt;
      if (got_counts != want.counts) o.fail("c_i differ for pivot " + std::to_string(pivot));
      for (const auto& [t, cnt] : want.counts) {
        if (dist.probability(TokenId{t}) != static_cast<double>(cnt) / kDefaultKeep) {
          o.fail("P_i differs for pivot " + std::to_string(pivot));
        }
      }
      const auto& rec = records.at(pivot);
      if (rec.n_av != want.n_av) o.fail("N_Av differs for pivot " + std::to_string(pivot));
      if (rec.avg_subgroup_size != want.avg_size) o.fail("|SG(T)| differs");
      const double err = std::abs(rec.entropy_thresholded - want.entropy);
      worst_entropy_error = std::max(worst_entropy_error, err);
      if (err > kEntropyTolerance) o.fail("S(T) differs by " + std::to_string(err));
      ++tokens_checked;
      tokens_nonzero += want.entropy > 0 ? 1 : 0;
    }
    const double s_oracle = oracle::lowest_k_mean(oracle_entropies, oracle_entropies.size());
    if (std::abs(report.thresholded.s - s_oracle) > kEntropyTolerance) o.fail("aggregate S differs");
  }
  const double total = seconds_since(t_all);
  if (pipeline_seconds >= kOracleBudgetSeconds) {
    o.fail("pipeline took " + std::to_string(pipeline_seconds) + " s");
  }
  if (o.pass) {
    o.detail << kOracleSpecs << " specs, " << tokens_checked << " tokens (" << tokens_nonzero
             << " with S > 0), " << subgroups_checked
             << " subgroups exact; max |dS| = " << worst_entropy_error << "; pipeline "
             << pipeline_seconds << " s, with oracle " << total << " s (budget "
             << kOracleBudgetSeconds << " s)";
  }
  return o;
}

// Kept subgroups in which token 100+i appears counts[i] times.
ReplacementDistribution dist_of(const std::vector<std::uint32_t>& counts) {
  std::vector<Subgroup> kept(kDefaultKeep);
  for (std::uint32_t m = 0; m < kept.size(); ++m) {
    kept[m].pivot = TokenId{1};
    kept[m].sentence_id = m;
  }
  for (std::uint32_t i = 0; i < counts.size(); ++i) {
    for (std::uint32_t m = 0; m < counts[i]; ++m) kept[m].members.push_back(TokenId{100 + i});
  }
  return replacement_distribution(kept);
}

// 2. Hand-computed values, compared exactly.
Outcome hand_entropy() {
  Outcome o;
  if (token_entropy(dist_of({24}), 5) != 0.0) o.fail("{24} != 0");
  if (token_entropy(dist_of({12, 6}), 5) != 1.0) o.fail("{12,6} != 1");
  if (token_entropy(dist_of({12, 5}), 5) != 0.5) o.fail("{12,5} at beta 5 != 0.5");
  if (n_av(dist_of({12, 6})) != 18) o.fail("N_Av({12,6}) != 18");
  if (!passes_threshold(6, 5)) o.fail("c = 6 should pass");
  if (passes_threshold(5, 5)) o.fail("c = 5 should fail");
  if (o.pass) o.detail << "{24} -> 0, {12,6} -> 1, {12,5} -> 0.5, N_Av = 18, c=6 in / c=5 out";
  return o;
}

// 3. Structural properties over random distributions and reports.
Outcome structural_invariants() {
  Outcome o;
  std::mt19937_64 gen(33);
  std::size_t cases = 0;
  for (int round = 0; round < 2000; ++round) {
    std::vector<std::uint32_t> counts(std::uniform_int_distribution<int>(0, 40)(gen));
    for (auto& c : counts) c = std::uniform_int_distribution<std::uint32_t>(1, 24)(gen);
    const auto d = dist_of(counts);
    const double raw = token_entropy(d, 0);
    double prev = raw;
    for (double beta = 0; beta <= 24; beta += 0.5) {
      const double h = token_entropy(d, beta);
      if (h > prev) o.fail("entropy increased with beta_c");
      if (h > raw) o.fail("thresholded above raw");
      if (h < 0) o.fail("negative entropy");
      prev = h;
    }
    std::uint64_t sum = 0;
    double sum_p = 0;
    for (auto c : counts) sum += c;
    for (const auto& [t, c] : d.counts) sum_p += d.probability(t);
    if (n_av(d) != sum) o.fail("N_Av is not the integer count sum");
    if (std::abs(kDefaultKeep * sum_p - static_cast<double>(n_av(d))) > 1e-9) {
      o.fail("N_Av != kept * sum P");
    }
    ++cases;
  }
  for (int round = 0; round < 200; ++round) {
    std::vector<double> v(100);
    for (auto& x : v) x = std::uniform_real_distribution<double>(0, 40)(gen);
    double prev = -1;
    for (std::size_t k = 1; k <= v.size(); ++k) {
      const double sk = aggregate_values(v, k).s_k;
      if (sk < prev) o.fail("S^K decreased in K");
      prev = sk;
    }
    if (aggregate_values(v, 95).s_k > aggregate_values(v, 100).s_k) o.fail("S^95 > S^100");
  }
  std::uint32_t best = 1;
  for (std::uint32_t c = 1; c <= 24; ++c) {
    if (entropy_term(c, 24) > entropy_term(best, 24)) best = c;
  }
  if (best != 9) o.fail("per-term maximum at c = " + std::to_string(best));
  if (o.pass) {
    o.detail << cases << " distributions x 49 beta_c values, 200 reports x 100 K values; "
             << "term maximum at c = 9 of 24";
  }
  return o;
}

// 4. Perfect synonym groups have zero entropy whatever their size.
Outcome perfect_synonyms() {
  Outcome o;
  std::set<std::size_t> sizes_seen;
  for (std::uint32_t max_group = 1; max_group <= 8; ++max_group) {
    SynthCorpusOptions opt;
    opt.vocab_size = 600;
    opt.pivots = 10;
    opt.sentences_per_pivot = 30;
    opt.pivot_group_min = 1;
    opt.pivot_group_max = max_group;
    opt.seed = 100 + max_group;
    const SynthBundle bundle = make_synth_bundle(opt);
    testutil::TempDir dir("acc_syn");
    const auto files = write_synth_bundle(bundle, dir / "data");
    RunConfig c = config_for(files, dir / "run", 10, 30);
    cmd_select_pivots(c);
    cmd_sweep(c);
    const auto report = cmd_entropy(c);
    for (const auto& r : report.records) {
      const std::uint32_t g = bundle.spec.group_of[to_index(r.pivot)];
      const auto group_size = static_cast<std::size_t>(
          std::count(bundle.spec.group_of.begin(), bundle.spec.group_of.end(), g));
      sizes_seen.insert(group_size);
      if (r.entropy_thresholded != 0.0 || r.entropy_raw != 0.0) o.fail("nonzero entropy");
      if (r.avg_subgroup_size != static_cast<double>(group_size - 1)) {
        o.fail("|SG| != group size - 1 for group size " + std::to_string(group_size));
      }
    }
    for (const auto& sg : read_sweeps(c)) {
      const std::uint32_t g = bundle.spec.group_of[to_index(sg.pivot)];
      for (TokenId m : sg.members) {
        if (bundle.spec.group_of[to_index(m)] != g) o.fail("member outside the synonym group");
      }
    }
    if (report.thresholded.s != 0.0) o.fail("S(T) != 0");
  }
  if (o.pass) {
    o.detail << "S = 0 and |SG| = size - 1 for group sizes";
    for (auto s : sizes_seen) o.detail << ' ' << s;
  }
  return o;
}

// 5. Pair degeneracy ratios.
Outcome pair_degeneracy() {
  Outcome o;
  std::mt19937_64 gen(55);
  std::size_t context_free_pairs = 0;

  // Context-free specs: ratio exactly 1.
  for (int round = 0; round < 5; ++round) {
    SynthCorpusOptions opt;
    opt.vocab_size = 500;
    opt.pivots = 5;
    opt.pivot_group_max = 6;
    opt.background_group_max = 5;
    opt.seed = 500 + round;
    SynthBundle bundle = make_synth_bundle(opt);
    SynthTranslator t(bundle.spec);
    for (int s = 0; s < 10; ++s) {
      const SentencePair& sp = bundle.corpus.pairs[gen() % bundle.corpus.pairs.size()];
      const std::uint32_t a = static_cast<std::uint32_t>(gen() % sp.source.size());
      std::uint32_t b = static_cast<std::uint32_t>(gen() % sp.source.size());
      if (a == b) b = (a + 1) % static_cast<std::uint32_t>(sp.source.size());
      auto sga = substitution_sweep({sp, a, sp.source[a]}, t.source_vocab(), t, {});
      auto sgb = substitution_sweep({sp, b, sp.source[b]}, t.source_vocab(), t, {});
      auto pd = pair_sweep(sp, sga, sgb, t, {});
      if (pd.pair_count != pd.sg_a * pd.sg_b) o.fail("context-free pair_count != product");
      if (pd.sg_a * pd.sg_b > 0) {
        if (!pd.ratio || *pd.ratio != 1.0) o.fail("context-free ratio != 1");
        ++context_free_pairs;
      } else if (pd.ratio) {
        o.fail("ratio defined for an empty subgroup");
      }
    }
  }

  // Engineered coupling: position b directly precedes position a; breaking
  // k of the 16 (a', b') combinations gives ratio (16 - k) / 16.
  std::vector<double> engineered;
  for (std::uint32_t k = 1; k <= 7; ++k) {
    std::vector<std::uint32_t> groups(40);
    for (std::uint32_t i = 0; i < 40; ++i) groups[i] = i / 5;
    SynthSpec spec = testutil::grouped_spec(groups);
    // Sentence [2, 10, 20, 33]: b = 10 (group {10..14}), a = 20 ({20..24}).
    std::uint32_t broken = 0;
    for (std::uint32_t ai = 21; ai <= 24 && broken < k; ++ai) {
      for (std::uint32_t bi = 11; bi <= 14 && broken < k; ++bi, ++broken) {
        spec.context_rules.push_back({TokenId{ai}, TokenId{bi}, 7});
      }
    }
    SynthTranslator t(spec);
    oracle::Evaluator ev(spec);
    const std::vector<std::uint32_t> raw = {2, 10, 20, 33};
    SentencePair sp{0, to_tokens(raw), {}};
    auto sga = substitution_sweep({sp, 2, TokenId{20}}, t.source_vocab(), t, {});
    auto sgb = substitution_sweep({sp, 1, TokenId{10}}, t.source_vocab(), t, {});
    auto pd = pair_sweep(sp, sga, sgb, t, {});
    const double want = (16.0 - k) / 16.0;
    if (pd.pair_count != ev.pair_count(raw, 2, 1)) o.fail("engineered pair_count != enumeration");
    if (!pd.ratio || *pd.ratio != want) o.fail("engineered ratio off for k = " + std::to_string(k));
    if (!(*pd.ratio > 0.5 && *pd.ratio <= 1.0)) o.fail("engineered ratio outside (0.5, 1]");
    if (!(*pd.ratio < 1.0)) o.fail("coupling did not lower the ratio");
    engineered.push_back(*pd.ratio);
  }

  // Random specs with rules, drops and ignore markers: ratio <= 1 and equal
  // to enumeration.
  std::size_t random_pairs = 0;
  for (int round = 0; round < 60; ++round) {
    SynthSpec spec = testutil::random_spec(gen, 60, true);
    SynthTranslator t(spec);
    oracle::Evaluator ev(spec);
    std::vector<std::uint32_t> raw(6);
    for (auto& x : raw) x = static_cast<std::uint32_t>(gen() % 60);
    SentencePair sp{0, to_tokens(raw), {}};
    auto sga = substitution_sweep({sp, 2, sp.source[2]}, t.source_vocab(), t, {});
    auto sgb = substitution_sweep({sp, 3, sp.source[3]}, t.source_vocab(), t, {});
    auto pd = pair_sweep(sp, sga, sgb, t, {});
    if (pd.pair_count != ev.pair_count(raw, 2, 3)) o.fail("random pair_count != enumeration");
    if (pd.pair_count > pd.sg_a * pd.sg_b) o.fail("pair_count above product");
    if (pd.ratio && *pd.ratio > 1.0) o.fail("ratio above 1");
    ++random_pairs;
  }
  if (o.pass) {
    o.detail << context_free_pairs << " context-free pairs at ratio 1; engineered ratios";
    for (double r : engineered) o.detail << ' ' << r;
    o.detail << " match enumeration; " << random_pairs << " random specs <= 1";
  }
  return o;
}

// 6. S^95 order of a low-noise and a high-noise spec across beta_c 5..10.
Outcome ranking_robustness() {
  Outcome o;
  struct Model {
    std::string name;
    std::uint32_t partial;
    RunConfig config;
  };
  std::vector<Model> models = {{"low-noise", 2, {}}, {"high-noise", 8, {}}};
  testutil::TempDir dir("acc_rank");
  for (auto& m : models) {
    SynthCorpusOptions opt;
    opt.vocab_size = 3000;
    opt.pivots = 100;
    opt.sentences_per_pivot = 30;
    opt.partial_synonyms = m.partial;
    opt.seed = 77;
    const SynthBundle bundle = make_synth_bundle(opt);
    const auto files = write_synth_bundle(bundle, dir / m.name);
    m.config = config_for(files, dir / (m.name + "_run"), 100, 30);
    m.config.model_id = m.name;
    cmd_select_pivots(m.config);
    cmd_sweep(m.config);
  }
  for (int beta = 5; beta <= 10; ++beta) {
    std::vector<double> s95;
    for (auto& m : models) {
      m.config.entropy.beta_c = beta;
      s95.push_back(cmd_entropy(m.config).thresholded.s_k);
    }
    o.detail << (beta > 5 ? ", " : "") << "beta " << beta << ": " << s95[0] << " < " << s95[1];
    if (!(s95[0] < s95[1])) o.fail("order flips at beta_c = " + std::to_string(beta));
  }
  return o;
}

// Runs the CLI with `args`, killing it with SIGKILL once `ready` returns
// true. Returns true if the kill landed before the process finished.
bool run_and_kill(const std::vector<std::string>& args, const std::function<bool()>& ready) {
  std::vector<char*> argv;
  std::vector<std::string> storage = args;
  storage.insert(storage.begin(), TRANSENT_CLI_PATH);
  for (auto& s : storage) argv.push_back(s.data());
  argv.push_back(nullptr);
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 2, "/dev/null", O_WRONLY, 0);
  pid_t pid = 0;
  if (posix_spawn(&pid, TRANSENT_CLI_PATH, &actions, nullptr, argv.data(), environ) != 0) {
    return false;
  }
  posix_spawn_file_actions_destroy(&actions);
  bool killed = false;
  int status = 0;
  while (true) {
    if (waitpid(pid, &status, WNOHANG) == pid) break;
    if (ready()) {
      kill(pid, SIGKILL);
      waitpid(pid, &status, 0);
      killed = WIFSIGNALED(status);
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  return killed;
}

std::size_t line_count(const std::filesystem::path& p) {
  if (!std::filesystem::exists(p)) return 0;
  std::string s = read_file(p);
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// 7. Cache transparency, crash resume, dedup and sweep throughput.
Outcome orchestration() {
  Outcome o;
  testutil::TempDir dir("acc_orch");
  SynthCorpusOptions opt;
  opt.vocab_size = 1000;
  opt.pivots = 20;
  opt.sentences_per_pivot = 30;
  opt.partial_synonyms = 3;
  opt.breaking_rules = 2;
  opt.random_rules = 20;
  opt.ignored_sentences_per_pivot = 4;
  opt.seed = 4242;
  const SynthBundle bundle = make_synth_bundle(opt);
  const auto files = write_synth_bundle(bundle, dir / "data");

  // Cache on vs off.
  RunConfig off = config_for(files, dir / "off", 20, 30);
  RunConfig on = config_for(files, dir / "on", 20, 30);
  on.cache_path = (dir / "cache.log").string();
  for (const RunConfig* c : {&off, &on}) {
    cmd_select_pivots(*c);
    cmd_sweep(*c);
    cmd_entropy(*c);
  }
  bool cache_same = true;
  for (const char* f : {"pivots.jsonl", "sweeps.jsonl", "report.json", "tables.csv",
                        "histogram.csv"}) {
    cache_same &= read_file(off.output_dir / f) == read_file(on.output_dir / f);
  }
  if (!cache_same) o.fail("cache on/off outputs differ");

  // Kill the CLI mid-sweep with SIGKILL, then resume. The persistent cache
  // slows the sweep enough to land the kill.
  RunConfig crash = config_for(files, dir / "crash", 20, 30);
  crash.cache_path = (dir / "crash_cache.log").string();
  write_file_atomic(dir / "crash.json", Json(crash).dump());
  cmd_select_pivots(crash);
  const std::size_t units = kPivots * kSentences;
  const auto journal = crash.output_dir / "sweeps.partial.jsonl";
  const bool killed = run_and_kill({"sweep", "--config", (dir / "crash.json").string()},
                                   [&] { return line_count(journal) >= 1 + units / 2; });
  const std::size_t done_at_kill = line_count(journal) - 1;
  if (!killed) o.fail("sweep finished before the kill landed");
  const SweepRunResult resumed = cmd_sweep(crash);
  if (!resumed.complete || resumed.units_resumed == 0) o.fail("resume did not reuse the journal");
  if (read_file(crash.output_dir / "sweeps.jsonl") != read_file(off.output_dir / "sweeps.jsonl")) {
    o.fail("resumed sweeps.jsonl differs from the uninterrupted run");
  }

  // In-process interruption at 50%.
  RunConfig half = config_for(files, dir / "half", 20, 30);
  half.workers = 3;
  cmd_select_pivots(half);
  SweepRunOptions stop;
  stop.stop_after = units / 2;
  cmd_sweep(half, stop);
  cmd_sweep(half);
  if (read_file(half.output_dir / "sweeps.jsonl") != read_file(off.output_dir / "sweeps.jsonl")) {
    o.fail("stop-and-resume sweeps.jsonl differs");
  }

  // 40% duplicates: 1000 inputs, 600 distinct.
  SynthTranslator synth(bundle.spec);
  testutil::CountingTranslator counting(synth);
  TranslationStore store;
  CachedTranslator cached(counting, store);
  std::vector<TokenSeq> distinct;
  for (std::size_t i = 0; i < 600; ++i) distinct.push_back(bundle.corpus.pairs[i].source);
  std::vector<TokenSeq> workload = distinct;
  std::mt19937_64 gen(40);
  while (workload.size() < 1000) workload.push_back(distinct[gen() % distinct.size()]);
  std::shuffle(workload.begin(), workload.end(), gen);
  const auto got = cached.translate_batch(workload, {});
  const auto want = synth.translate_batch(workload, {});
  bool dedup_same = got.size() == want.size();
  for (std::size_t i = 0; dedup_same && i < got.size(); ++i) {
    dedup_same = got[i].output == want[i].output;
  }
  if (!dedup_same) o.fail("deduplicated results differ");
  if (counting.inputs_seen.load() != distinct.size()) {
    o.fail("backend saw " + std::to_string(counting.inputs_seen.load()) + " inputs, expected " +
           std::to_string(distinct.size()));
  }

  // Throughput: 1000-token vocab, 100 sentences.
  RunConfig speed = config_for(files, dir / "speed", 4, 25);
  speed.selection = {30, 30, 4, 25};
  cmd_select_pivots(speed);
  const auto t0 = Clock::now();
  const auto sr = cmd_sweep(speed);
  const double sweep_seconds = seconds_since(t0);
  if (sr.units_total != 100 || !sr.complete) o.fail("speed sweep did not cover 100 sentences");
  if (sweep_seconds >= kSweepBudgetSeconds) {
    o.fail("100-sentence sweep took " + std::to_string(sweep_seconds) + " s");
  }

  if (o.pass) {
    o.detail << "cache on/off identical; SIGKILL at " << done_at_kill << "/" << units
             << " units then resume identical; 50% stop identical; backend inputs "
             << counting.inputs_seen.load() << " for 1000 requests (600 distinct); "
             << "1000-vocab x 100-sentence sweep " << sweep_seconds << " s";
  }
  return o;
}

}  // namespace

int main() {
  quiet();
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"oracle-equivalence", oracle_equivalence},
      {"hand-computed-entropy", hand_entropy},
      {"structural-invariants", structural_invariants},
      {"perfect-synonym-zero-entropy", perfect_synonyms},
      {"pair-degeneracy", pair_degeneracy},
      {"ranking-robustness", ranking_robustness},
      {"orchestration", orchestration},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto t0 = Clock::now();
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %s (%.2f s): %s\n", out.pass ? "PASS" : "FAIL", c.name, seconds_since(t0),
                out.detail.str().c_str());
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
