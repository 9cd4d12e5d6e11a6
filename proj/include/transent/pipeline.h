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

#ifndef TRANSENT_PIPELINE_H_
#define TRANSENT_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "transent/cache.h"
#include "transent/corpus.h"
#include "transent/entropy.h"
#include "transent/report_io.h"
#include "transent/translator.h"

namespace transent {

struct RunConfig {
  CorpusFiles corpus;
  std::size_t max_len = kDefaultMaxLen;
  std::string direction;

  // Exactly one backend: a SynthSpec JSON path or a model server URL.
  std::string synth_spec;
  std::string translator_url;
  std::string model_id;
  std::uint32_t max_output_len = 128;

  PivotSelection selection;
  std::uint64_t seed = 0;
  EntropyParams entropy;

  // Operational knobs; they never change results.
  std::size_t workers = 1;
  std::size_t batch_size = 2048;
  std::size_t max_in_flight = 4;
  std::string cache_path;
  std::filesystem::path output_dir = "out";
  // Defaults to <output_dir>/pivots.jsonl.
  std::filesystem::path pivots_path;

  std::filesystem::path pivots_file() const;
  DecodeParams decode() const;
};

void to_json(Json& j, const RunConfig& c);
void from_json(const Json& j, RunConfig& c);
RunConfig load_run_config(const std::filesystem::path& path);

// Error surfaced to the CLI as {"error": kind, "message": what()}.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Everything that determines pivot selection (corpus contents included).
Json selection_config(const RunConfig& config);
// selection_config plus backend and decode parameters.
Json sweep_config(const RunConfig& config);
std::string selection_digest(const RunConfig& config);
std::string sweep_digest(const RunConfig& config);
// {config, selection_digest, sweep_digest, seeds, code_version}.
Json provenance(const RunConfig& config);

std::unique_ptr<Translator> make_backend(const RunConfig& config);

// Writes pivots.jsonl.
std::vector<PivotRecord> cmd_select_pivots(const RunConfig& config);

struct SweepRunOptions {
  // Stop after this many newly completed units (0 = run to the end). Used to
  // exercise resume.
  std::size_t stop_after = 0;
  // Backend to use instead of make_backend(config); not owned.
  Translator* backend = nullptr;
};

struct SweepRunResult {
  bool complete = false;
  std::size_t units_total = 0;
  std::size_t units_resumed = 0;
  std::size_t units_run = 0;
  CacheStats cache;
};

// Sweeps every (pivot, sentence) unit with a bounded worker pool. Completed
// units are journaled to sweeps.partial.jsonl and a checkpoint.json is kept;
// a rerun resumes from the journal and refuses if the sweep digest differs.
// On completion writes sweeps.jsonl ordered by (pivot, sentence id).
SweepRunResult cmd_sweep(const RunConfig& config,
                         const SweepRunOptions& options = {});

// Reads sweeps.jsonl, writes report.json, tables.csv and histogram.csv.
ModelEntropyReport cmd_entropy(const RunConfig& config,
                               double histogram_bin_width = 1.0);

// Sweeps both positions of the sentence, then all pair combinations; appends
// one record to pairs.jsonl. Without explicit positions the two most frequent
// non-special tokens not above max_freq are used.
PairDegeneracy cmd_pair(
    const RunConfig& config, SentenceId sentence_id,
    std::optional<std::pair<std::uint32_t, std::uint32_t>> positions = {},
    Translator* backend = nullptr);

// Default pair positions for a sentence (see cmd_pair).
std::pair<std::uint32_t, std::uint32_t> default_pair_positions(
    const SentencePair& sentence, const FrequencyIndex& index,
    const Vocab& vocab, std::uint64_t max_freq);

// Translates the first `limit` corpus sources (0 = all) and scores them
// against the targets. Writes bleu.json.
BleuScore cmd_bleu(const RunConfig& config, std::size_t limit = 0,
                   Translator* backend = nullptr);

// Joins report.json and bleu.json files on (model, direction) and writes
// ranking.csv plus a combined tables.csv into `output_dir`.
void cmd_rank(const std::vector<std::filesystem::path>& reports,
              const std::vector<std::filesystem::path>& bleu_files,
              const std::filesystem::path& output_dir);

}  // namespace transent

#endif  // TRANSENT_PIPELINE_H_
