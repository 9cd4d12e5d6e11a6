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

#include "transent/pipeline.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "transent/bleu.h"
#include "transent/degeneracy.h"
#include "transent/digest.h"
#include "transent/remote.h"
#include "transent/synth.h"

namespace transent {
namespace fs = std::filesystem;

namespace {

constexpr const char* kPivotsFile = "pivots.jsonl";
constexpr const char* kSweepsFile = "sweeps.jsonl";
constexpr const char* kJournalFile = "sweeps.partial.jsonl";
constexpr const char* kCheckpointFile = "checkpoint.json";
constexpr const char* kPairsFile = "pairs.jsonl";
constexpr const char* kMemoryCache = ":memory:";

std::string file_digest(const fs::path& p) {
  try {
    return to_hex(sha256_file(p));
  } catch (const std::exception& e) {
    throw PipelineError("missing_input", e.what());
  }
}

std::string json_digest(const Json& j) { return to_hex(sha256(j.dump())); }

ParallelCorpus load_corpus(const RunConfig& config) {
  try {
    auto corpus = load_parallel_corpus(config.corpus, config.max_len, config.direction);
    if (corpus.stats.unknown_source + corpus.stats.unknown_target > 0) {
      spdlog::warn("corpus: {} source and {} target surfaces mapped to <unk>",
                   corpus.stats.unknown_source, corpus.stats.unknown_target);
    }
    if (corpus.stats.dropped_too_long + corpus.stats.dropped_empty > 0) {
      spdlog::info("corpus: dropped {} over-long and {} empty pairs of {}",
                   corpus.stats.dropped_too_long, corpus.stats.dropped_empty,
                   corpus.stats.lines);
    }
    return corpus;
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError("corpus", e.what());
  }
}

void check_digest(const Json& header, const char* field,
                  const std::string& expected, const fs::path& file) {
  const std::string found = header.is_object() ? header.value(field, std::string{})
                                               : std::string{};
  if (found != expected) {
    throw PipelineError(
        "digest_mismatch",
        file.string() + " was produced under a different configuration (" +
            field + " " + (found.empty() ? std::string("missing") : found.substr(0, 12)) +
            " vs current " + expected.substr(0, 12) +
            "); use a fresh output directory or restore the original config");
  }
}

Json file_header(const RunConfig& config, const char* kind) {
  Json h = provenance(config);
  h["kind"] = kind;
  return h;
}

// Corpus vocab and backend vocab must describe the same universe.
void check_vocab_compat(const Vocab& corpus_vocab, const Vocab& backend_vocab) {
  if (corpus_vocab.size() != backend_vocab.size()) {
    throw PipelineError("vocab_mismatch",
                        "corpus source vocab has " +
                            std::to_string(corpus_vocab.size()) +
                            " entries, backend reports " +
                            std::to_string(backend_vocab.size()));
  }
  for (const VocabEntry& e : corpus_vocab.entries()) {
    if (backend_vocab.is_special(e.id) != e.special) {
      throw PipelineError("vocab_mismatch",
                          "special flag of token " + std::to_string(to_index(e.id)) +
                              " differs between corpus and backend vocab");
    }
  }
}

// Backend plus optional caching wrapper, owned together.
struct Backend {
  std::unique_ptr<Translator> owned;
  std::unique_ptr<TranslationStore> store;
  std::unique_ptr<CachedTranslator> cached;
  Translator* active = nullptr;
};

Backend open_backend(const RunConfig& config, Translator* override_backend) {
  Backend b;
  Translator* base = override_backend;
  if (base == nullptr) {
    b.owned = make_backend(config);
    base = b.owned.get();
  }
  b.active = base;
  if (!config.cache_path.empty()) {
    b.store = config.cache_path == kMemoryCache
                  ? std::make_unique<TranslationStore>()
                  : std::make_unique<TranslationStore>(fs::path(config.cache_path));
    b.cached = std::make_unique<CachedTranslator>(*base, *b.store, config.batch_size);
    b.active = b.cached.get();
  }
  return b;
}

const Vocab& backend_vocab(Translator& t) {
  try {
    return t.source_vocab();
  } catch (const TranslatorError& e) {
    throw PipelineError("backend", e.what());
  }
}

std::vector<PivotRecord> read_pivots(const RunConfig& config) {
  const fs::path path = config.pivots_file();
  if (!fs::exists(path)) {
    throw PipelineError("missing_artifact",
                        path.string() + " not found; run select-pivots first");
  }
  auto file = read_jsonl(path);
  check_digest(file.header, "selection_digest", selection_digest(config), path);
  std::vector<PivotRecord> out;
  for (const Json& j : file.records) out.push_back(j.get<PivotRecord>());
  return out;
}

struct UnitKey {
  std::uint32_t pivot;
  SentenceId sentence;
  auto operator<=>(const UnitKey&) const = default;
};

void write_checkpoint(const fs::path& path, const std::string& digest,
                      const std::set<UnitKey>& done,
                      const std::vector<PivotRecord>& pivots, bool complete) {
  Json units = Json::array();
  for (const UnitKey& u : done) units.push_back({u.pivot, u.sentence});
  Json tokens = Json::array();
  for (const PivotRecord& p : pivots) {
    bool all = true;
    for (const Occurrence& o : p.sentences) {
      all &= done.count({to_index(p.token), o.sentence}) > 0;
    }
    if (all) tokens.push_back(to_index(p.token));
  }
  Json j = {{"sweep_digest", digest},
            {"completed_tokens", tokens},
            {"completed_units", units},
            {"complete", complete}};
  write_file_atomic(path, j.dump(1) + "\n");
}

std::string backend_label(const RunConfig& c) {
  return c.model_id.empty() ? (c.synth_spec.empty() ? "remote" : "synthetic")
                            : c.model_id;
}

}  // namespace

fs::path RunConfig::pivots_file() const {
  return pivots_path.empty() ? output_dir / kPivotsFile : pivots_path;
}

DecodeParams RunConfig::decode() const {
  DecodeParams p;
  p.max_output_len = max_output_len;
  p.model_id = model_id;
  return p;
}

void to_json(Json& j, const RunConfig& c) {
  j = Json{{"source", c.corpus.source.string()},
           {"target", c.corpus.target.string()},
           {"source_vocab", c.corpus.source_vocab.string()},
           {"target_vocab", c.corpus.target_vocab.string()},
           {"max_len", c.max_len},
           {"direction", c.direction},
           {"synth_spec", c.synth_spec},
           {"translator_url", c.translator_url},
           {"model_id", c.model_id},
           {"max_output_len", c.max_output_len},
           {"pivot_count", c.selection.count},
           {"min_freq", c.selection.min_freq},
           {"max_freq", c.selection.max_freq},
           {"sentences_per_token", c.selection.sentences_per_token},
           {"seed", c.seed},
           {"keep", c.entropy.keep},
           {"beta_c", c.entropy.beta_c},
           {"k", c.entropy.k},
           {"workers", c.workers},
           {"batch_size", c.batch_size},
           {"max_in_flight", c.max_in_flight},
           {"cache", c.cache_path},
           {"output_dir", c.output_dir.string()},
           {"pivots", c.pivots_path.string()}};
}

void from_json(const Json& j, RunConfig& c) {
  RunConfig d;
  c.corpus.source = j.value("source", std::string{});
  c.corpus.target = j.value("target", std::string{});
  c.corpus.source_vocab = j.value("source_vocab", std::string{});
  c.corpus.target_vocab = j.value("target_vocab", std::string{});
  c.max_len = j.value("max_len", d.max_len);
  c.direction = j.value("direction", d.direction);
  c.synth_spec = j.value("synth_spec", d.synth_spec);
  c.translator_url = j.value("translator_url", d.translator_url);
  c.model_id = j.value("model_id", d.model_id);
  c.max_output_len = j.value("max_output_len", d.max_output_len);
  c.selection.count = j.value("pivot_count", d.selection.count);
  c.selection.min_freq = j.value("min_freq", d.selection.min_freq);
  c.selection.max_freq = j.value("max_freq", d.selection.max_freq);
  c.selection.sentences_per_token =
      j.value("sentences_per_token", d.selection.sentences_per_token);
  c.seed = j.value("seed", d.seed);
  c.entropy.keep = j.value("keep", d.entropy.keep);
  c.entropy.beta_c = j.value("beta_c", d.entropy.beta_c);
  c.entropy.k = j.value("k", d.entropy.k);
  c.workers = j.value("workers", d.workers);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.max_in_flight = j.value("max_in_flight", d.max_in_flight);
  c.cache_path = j.value("cache", d.cache_path);
  c.output_dir = j.value("output_dir", d.output_dir.string());
  c.pivots_path = j.value("pivots", std::string{});
}

RunConfig load_run_config(const fs::path& path) {
  try {
    return Json::parse(read_file(path)).get<RunConfig>();
  } catch (const std::exception& e) {
    throw PipelineError("config", path.string() + ": " + e.what());
  }
}

Json selection_config(const RunConfig& c) {
  return Json{{"corpus",
               {{"source", c.corpus.source.string()},
                {"target", c.corpus.target.string()},
                {"source_vocab", c.corpus.source_vocab.string()},
                {"target_vocab", c.corpus.target_vocab.string()},
                {"source_sha256", file_digest(c.corpus.source)},
                {"target_sha256", file_digest(c.corpus.target)},
                {"source_vocab_sha256", file_digest(c.corpus.source_vocab)},
                {"target_vocab_sha256", file_digest(c.corpus.target_vocab)},
                {"max_len", c.max_len}}},
              {"direction", c.direction},
              {"selection",
               {{"pivot_count", c.selection.count},
                {"min_freq", c.selection.min_freq},
                {"max_freq", c.selection.max_freq},
                {"sentences_per_token", c.selection.sentences_per_token}}},
              {"seed", c.seed}};
}

Json sweep_config(const RunConfig& c) {
  Json backend;
  if (!c.synth_spec.empty()) {
    backend = {{"kind", "synthetic"},
               {"spec", c.synth_spec},
               {"spec_sha256", file_digest(c.synth_spec)}};
  } else {
    backend = {{"kind", "remote"}};
  }
  Json j = selection_config(c);
  j["backend"] = backend;
  j["decode"] = {{"model_id", c.model_id},
                 {"strategy", strategy_name(DecodeStrategy::kGreedy)},
                 {"max_output_len", c.max_output_len}};
  return j;
}

// Paths are kept in the embedded config for readers but excluded from the
// digests, which only see file contents.
namespace {

Json strip_paths(Json j) {
  for (const char* k : {"source", "target", "source_vocab", "target_vocab"}) {
    j["corpus"].erase(k);
  }
  if (j.contains("backend")) j["backend"].erase("spec");
  return j;
}

}  // namespace

std::string selection_digest(const RunConfig& c) {
  return json_digest(strip_paths(selection_config(c)));
}

std::string sweep_digest(const RunConfig& c) {
  return json_digest(strip_paths(sweep_config(c)));
}

Json provenance(const RunConfig& c) {
  Json config = sweep_config(c);
  config["entropy"] = c.entropy;
  return Json{{"config", config},
              {"selection_digest", json_digest(strip_paths(selection_config(c)))},
              {"sweep_digest", json_digest(strip_paths(sweep_config(c)))},
              {"seeds", {{"seed", c.seed}}},
              {"code_version", TRANSENT_VERSION}};
}

std::unique_ptr<Translator> make_backend(const RunConfig& config) {
  if (config.synth_spec.empty() == config.translator_url.empty()) {
    throw PipelineError("config",
                        "set exactly one of --synth-spec and --translator-url");
  }
  if (!config.synth_spec.empty()) {
    try {
      return std::make_unique<SynthTranslator>(load_synth_spec(config.synth_spec));
    } catch (const std::exception& e) {
      throw PipelineError("backend", e.what());
    }
  }
  RemoteOptions o;
  o.url = config.translator_url;
  o.max_in_flight = config.max_in_flight;
  return std::make_unique<RemoteTranslator>(o);
}

std::vector<PivotRecord> cmd_select_pivots(const RunConfig& config) {
  const ParallelCorpus corpus = load_corpus(config);
  const FrequencyIndex index = FrequencyIndex::build(corpus);
  std::vector<TokenId> tokens;
  try {
    tokens = select_pivot_tokens(index, corpus.source_vocab, config.selection,
                                 config.seed);
  } catch (const std::exception& e) {
    throw PipelineError("selection", e.what());
  }

  std::vector<PivotRecord> records;
  std::string body = jsonl_line({{"header", file_header(config, "pivots")}});
  for (TokenId t : tokens) {
    const auto sentences = sample_pivot_sentences(
        corpus, index, t, config.selection.sentences_per_token, config.seed);
    PivotRecord r{t, corpus.source_vocab.at(t).surface, index.count(t), {}};
    for (const auto& ps : sentences) r.sentences.push_back({ps.sentence.id, ps.position});
    body += jsonl_line(r);
    records.push_back(std::move(r));
  }
  write_file_atomic(config.pivots_file(), body);
  spdlog::info("selected {} pivot tokens into {}", records.size(),
               config.pivots_file().string());
  return records;
}

SweepRunResult cmd_sweep(const RunConfig& config, const SweepRunOptions& options) {
  const auto pivots = read_pivots(config);
  const std::string digest = sweep_digest(config);
  const fs::path out = config.output_dir;
  const fs::path final_path = out / kSweepsFile;
  const fs::path journal_path = out / kJournalFile;
  const fs::path checkpoint_path = out / kCheckpointFile;
  fs::create_directories(out);

  SweepRunResult result;
  for (const auto& p : pivots) result.units_total += p.sentences.size();

  if (fs::exists(checkpoint_path)) {
    Json cp = Json::parse(read_file(checkpoint_path));
    check_digest(cp, "sweep_digest", digest, checkpoint_path);
  }
  if (fs::exists(final_path)) {
    check_digest(read_jsonl(final_path).header, "sweep_digest", digest, final_path);
    result.complete = true;
    result.units_resumed = result.units_total;
    return result;
  }

  const ParallelCorpus corpus = load_corpus(config);
  Backend backend = open_backend(config, options.backend);
  check_vocab_compat(corpus.source_vocab, backend_vocab(*backend.active));
  const Vocab& vocab = backend_vocab(*backend.active);

  // Resume from the journal.
  std::map<UnitKey, Subgroup> done;
  if (fs::exists(journal_path)) {
    auto journal = read_jsonl(journal_path, /*tolerate_torn_tail=*/true);
    check_digest(journal.header, "sweep_digest", digest, journal_path);
    std::string clean = jsonl_line({{"header", journal.header}});
    for (const Json& j : journal.records) {
      Subgroup sg = j.get<Subgroup>();
      clean += jsonl_line(j);
      done.emplace(UnitKey{to_index(sg.pivot), sg.sentence_id}, std::move(sg));
    }
    if (journal.torn_tail) {
      spdlog::warn("{}: dropping torn final record", journal_path.string());
      write_file_atomic(journal_path, clean);
    }
  } else {
    write_file_atomic(journal_path,
                      jsonl_line({{"header", file_header(config, "sweep_journal")}}));
  }
  result.units_resumed = done.size();

  struct Unit {
    UnitKey key;
    PivotSentence sentence;
  };
  std::vector<Unit> pending;
  for (const PivotRecord& p : pivots) {
    for (PivotSentence& ps : materialize(corpus, p)) {
      UnitKey key{to_index(p.token), ps.sentence.id};
      if (!done.count(key)) pending.push_back({key, std::move(ps)});
    }
  }

  std::ofstream journal(journal_path, std::ios::binary | std::ios::app);
  if (!journal) throw PipelineError("io", "cannot append to " + journal_path.string());
  std::set<UnitKey> done_keys;
  for (const auto& [k, v] : done) done_keys.insert(k);

  std::mutex mu;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::size_t ran = 0;
  const DecodeParams params = config.decode();
  SweepOptions sweep_opts;
  sweep_opts.batch_size = config.batch_size;

  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      try {
        Subgroup sg = substitution_sweep(pending[i].sentence, vocab,
                                         *backend.active, params, sweep_opts);
        std::lock_guard lock(mu);
        journal << jsonl_line(sg);
        journal.flush();
        if (!journal) throw PipelineError("io", "journal write failed");
        done_keys.insert(pending[i].key);
        done.emplace(pending[i].key, std::move(sg));
        ++ran;
        // Checkpoint when a pivot token completes.
        const bool token_done = i + 1 == pending.size() ||
                                pending[i + 1].key.pivot != pending[i].key.pivot;
        if (token_done) {
          write_checkpoint(checkpoint_path, digest, done_keys, pivots, false);
        }
        if (options.stop_after > 0 && ran >= options.stop_after) stop = true;
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
    }
  };

  {
    const std::size_t n = std::max<std::size_t>(1, std::min(config.workers, pending.size()));
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n; ++w) pool.emplace_back(worker);
  }
  journal.close();
  result.units_run = ran;
  if (backend.cached) result.cache = backend.cached->stats();
  write_checkpoint(checkpoint_path, digest, done_keys, pivots, false);

  if (failure) std::rethrow_exception(failure);
  if (done.size() < result.units_total) {
    spdlog::info("sweep stopped after {} units; {} of {} complete", ran,
                 done.size(), result.units_total);
    return result;
  }

  std::string body = jsonl_line({{"header", file_header(config, "sweeps")}});
  for (const PivotRecord& p : pivots) {
    for (const Occurrence& o : p.sentences) {
      body += jsonl_line(done.at({to_index(p.token), o.sentence}));
    }
  }
  write_file_atomic(final_path, body);
  write_checkpoint(checkpoint_path, digest, done_keys, pivots, true);
  fs::remove(journal_path);
  result.complete = true;
  return result;
}

ModelEntropyReport cmd_entropy(const RunConfig& config, double histogram_bin_width) {
  const fs::path out = config.output_dir;
  const fs::path sweeps_path = out / kSweepsFile;
  if (!fs::exists(sweeps_path)) {
    throw PipelineError("missing_artifact",
                        sweeps_path.string() + " not found; run sweep first");
  }
  auto sweeps = read_jsonl(sweeps_path);
  check_digest(sweeps.header, "sweep_digest", sweep_digest(config), sweeps_path);

  std::map<std::uint32_t, std::string> surfaces;
  if (fs::exists(config.pivots_file())) {
    for (const PivotRecord& p : read_pivots(config)) surfaces[to_index(p.token)] = p.surface;
  }

  std::vector<SubgroupEnsemble> ensembles;
  for (const Json& j : sweeps.records) {
    Subgroup sg = j.get<Subgroup>();
    if (ensembles.empty() || ensembles.back().pivot != sg.pivot) {
      ensembles.push_back({sg.pivot, {}});
    }
    ensembles.back().subgroups.push_back(std::move(sg));
  }

  std::vector<TokenEntropyRecord> records;
  try {
    for (const auto& e : ensembles) {
      records.push_back(token_record(e, config.entropy, surfaces[to_index(e.pivot)]));
    }
    ModelEntropyReport report =
        build_report(backend_label(config), config.direction, std::move(records),
                     config.entropy);
    const Json prov = file_header(config, "entropy_report");
    write_file_atomic(out / "report.json", report_to_json(report, prov).dump(1) + "\n");
    const std::string label = config.direction.empty() ? report.model_id : config.direction;
    write_file_atomic(out / "tables.csv",
                      entropy_table_csv(std::span(&report, 1), std::span(&label, 1)));
    write_file_atomic(out / "histogram.csv",
                      histogram_csv(histogram(report.records, histogram_bin_width)));
    return report;
  } catch (const std::invalid_argument& e) {
    throw PipelineError("entropy", e.what());
  }
}

std::pair<std::uint32_t, std::uint32_t> default_pair_positions(
    const SentencePair& sentence, const FrequencyIndex& index, const Vocab& vocab,
    std::uint64_t max_freq) {
  struct Cand {
    std::uint64_t freq;
    std::uint32_t pos;
  };
  std::vector<Cand> capped;
  std::vector<Cand> any;
  for (std::uint32_t j = 0; j < sentence.source.size(); ++j) {
    const TokenId t = sentence.source[j];
    if (vocab.is_special(t)) continue;
    any.push_back({index.count(t), j});
    if (index.count(t) <= max_freq) capped.push_back({index.count(t), j});
  }
  auto& pool = capped.size() >= 2 ? capped : any;
  if (pool.size() < 2) {
    throw PipelineError("pair", "sentence " + std::to_string(sentence.id) +
                                    " has fewer than two substitutable positions");
  }
  std::stable_sort(pool.begin(), pool.end(), [](const Cand& a, const Cand& b) {
    return a.freq != b.freq ? a.freq > b.freq : a.pos < b.pos;
  });
  return std::minmax(pool[0].pos, pool[1].pos);
}

PairDegeneracy cmd_pair(const RunConfig& config, SentenceId sentence_id,
                        std::optional<std::pair<std::uint32_t, std::uint32_t>> positions,
                        Translator* backend_override) {
  const ParallelCorpus corpus = load_corpus(config);
  const SentencePair* sentence = corpus.find(sentence_id);
  if (sentence == nullptr) {
    throw PipelineError("pair", "sentence " + std::to_string(sentence_id) +
                                    " is not in the corpus");
  }
  if (!positions) {
    positions = default_pair_positions(*sentence, FrequencyIndex::build(corpus),
                                       corpus.source_vocab, config.selection.max_freq);
  }
  auto [ja, jb] = *positions;
  if (ja == jb || ja >= sentence->source.size() || jb >= sentence->source.size()) {
    throw PipelineError("pair", "positions must be distinct and inside the sentence");
  }

  Backend backend = open_backend(config, backend_override);
  check_vocab_compat(corpus.source_vocab, backend_vocab(*backend.active));
  const Vocab& vocab = backend_vocab(*backend.active);
  const DecodeParams params = config.decode();
  SweepOptions opts;
  opts.batch_size = config.batch_size;

  const Subgroup sg_a = substitution_sweep({*sentence, ja, sentence->source[ja]},
                                           vocab, *backend.active, params, opts);
  const Subgroup sg_b = substitution_sweep({*sentence, jb, sentence->source[jb]},
                                           vocab, *backend.active, params, opts);
  PairDegeneracy pd = pair_sweep(*sentence, sg_a, sg_b, *backend.active, params, opts);

  const fs::path path = config.output_dir / kPairsFile;
  fs::create_directories(config.output_dir);
  std::string body;
  if (fs::exists(path)) {
    check_digest(read_jsonl(path).header, "sweep_digest", sweep_digest(config), path);
    body = read_file(path);
  } else {
    body = jsonl_line({{"header", file_header(config, "pairs")}});
  }
  body += jsonl_line(pd);
  write_file_atomic(path, body);
  return pd;
}

BleuScore cmd_bleu(const RunConfig& config, std::size_t limit,
                   Translator* backend_override) {
  const ParallelCorpus corpus = load_corpus(config);
  Backend backend = open_backend(config, backend_override);
  const std::size_t n =
      limit == 0 ? corpus.pairs.size() : std::min(limit, corpus.pairs.size());
  if (n == 0) throw PipelineError("bleu", "corpus is empty");

  std::vector<TokenSeq> hyps;
  std::vector<TokenSeq> refs;
  const DecodeParams params = config.decode();
  const std::size_t batch = std::max<std::size_t>(1, config.batch_size);
  for (std::size_t begin = 0; begin < n; begin += batch) {
    std::vector<TokenSeq> inputs;
    for (std::size_t i = begin; i < std::min(n, begin + batch); ++i) {
      inputs.push_back(corpus.pairs[i].source);
      refs.push_back(corpus.pairs[i].target);
    }
    for (auto& t : backend.active->translate_batch(inputs, params)) {
      hyps.push_back(std::move(t.output));
    }
  }
  const BleuScore score = bleu_corpus(hyps, refs);
  Json j = {{"model_id", backend_label(config)},
            {"direction", config.direction},
            {"sentences", n},
            {"score", score},
            {"provenance", file_header(config, "bleu")}};
  write_file_atomic(config.output_dir / "bleu.json", j.dump(1) + "\n");
  return score;
}

void cmd_rank(const std::vector<fs::path>& reports,
              const std::vector<fs::path>& bleu_files, const fs::path& output_dir) {
  if (reports.empty()) throw PipelineError("rank", "no reports given");
  struct Row {
    std::string model;
    std::string direction;
    std::optional<ModelEntropyReport> report;
    std::optional<double> bleu;
  };
  std::map<std::pair<std::string, std::string>, Row> rows;
  std::vector<ModelEntropyReport> loaded;
  for (const auto& p : reports) {
    ModelEntropyReport r;
    try {
      r = report_from_json(Json::parse(read_file(p)));
    } catch (const std::exception& e) {
      throw PipelineError("rank", p.string() + ": " + e.what());
    }
    Row& row = rows[{r.direction, r.model_id}];
    row.model = r.model_id;
    row.direction = r.direction;
    row.report = r;
    loaded.push_back(std::move(r));
  }
  for (const auto& p : bleu_files) {
    try {
      const Json j = Json::parse(read_file(p));
      const std::string model = j.at("model_id").get<std::string>();
      const std::string dir = j.at("direction").get<std::string>();
      Row& row = rows[{dir, model}];
      row.model = model;
      row.direction = dir;
      row.bleu = j.at("score").at("bleu").get<double>();
    } catch (const PipelineError&) {
      throw;
    } catch (const std::exception& e) {
      throw PipelineError("rank", p.string() + ": " + e.what());
    }
  }

  // Rank within each direction: S^K ascending, BLEU descending.
  std::map<std::string, std::vector<Row*>> by_dir;
  for (auto& [key, row] : rows) by_dir[row.direction].push_back(&row);
  std::ostringstream csv;
  csv << "direction,model,S,S_K,K,beta_c,BLEU,rank_S_K,rank_BLEU\n";
  for (auto& [dir, list] : by_dir) {
    std::map<const Row*, std::size_t> te_rank;
    std::map<const Row*, std::size_t> bleu_rank;
    std::vector<Row*> te;
    std::vector<Row*> bl;
    for (Row* r : list) {
      if (r->report) te.push_back(r);
      if (r->bleu) bl.push_back(r);
    }
    std::stable_sort(te.begin(), te.end(), [](const Row* a, const Row* b) {
      return a->report->thresholded.s_k < b->report->thresholded.s_k;
    });
    std::stable_sort(bl.begin(), bl.end(),
                     [](const Row* a, const Row* b) { return *a->bleu > *b->bleu; });
    for (std::size_t i = 0; i < te.size(); ++i) te_rank[te[i]] = i + 1;
    for (std::size_t i = 0; i < bl.size(); ++i) bleu_rank[bl[i]] = i + 1;
    for (Row* r : list) {
      csv << dir << ',' << r->model << ',';
      if (r->report) {
        csv << format_number(r->report->thresholded.s) << ','
            << format_number(r->report->thresholded.s_k) << ','
            << r->report->thresholded.k << ',' << format_number(r->report->params.beta_c, 2);
      } else {
        csv << ",,,";
      }
      csv << ',' << (r->bleu ? format_number(*r->bleu, 2) : std::string{}) << ','
          << (te_rank.count(r) ? std::to_string(te_rank[r]) : std::string{}) << ','
          << (bleu_rank.count(r) ? std::to_string(bleu_rank[r]) : std::string{}) << '\n';
    }
  }
  write_file_atomic(output_dir / "ranking.csv", csv.str());

  std::set<std::string> models;
  std::set<std::string> dirs;
  for (const auto& r : loaded) {
    models.insert(r.model_id);
    dirs.insert(r.direction);
  }
  std::vector<std::string> labels;
  for (const auto& r : loaded) {
    if (models.size() == 1) {
      labels.push_back(r.direction);
    } else if (dirs.size() == 1) {
      labels.push_back(r.model_id);
    } else {
      labels.push_back(r.model_id + " " + r.direction);
    }
  }
  write_file_atomic(output_dir / "tables.csv", entropy_table_csv(loaded, labels));
}

}  // namespace transent
