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

// Command-line front end for the pivot-token entropy pipeline.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "transent/pipeline.h"
#include "transent/synth_corpus.h"

namespace fs = std::filesystem;
using namespace transent;

namespace {

// Flags that override fields of a RunConfig loaded from --config.
class ConfigFlags {
 public:
  void attach(CLI::App& app) {
    app.add_option("--config", config_path_, "RunConfig JSON file");
    sub(app, "--source", "source-side corpus file", [](RunConfig& c) -> fs::path& { return c.corpus.source; });
    sub(app, "--target", "target-side corpus file", [](RunConfig& c) -> fs::path& { return c.corpus.target; });
    sub(app, "--source-vocab", "source vocab TSV", [](RunConfig& c) -> fs::path& { return c.corpus.source_vocab; });
    sub(app, "--target-vocab", "target vocab TSV", [](RunConfig& c) -> fs::path& { return c.corpus.target_vocab; });
    bind(app, "--direction", "direction label, e.g. de-en", &RunConfig::direction);
    bind(app, "--max-len", "drop pairs longer than this", &RunConfig::max_len);
    bind(app, "--synth-spec", "synthetic translator spec JSON", &RunConfig::synth_spec);
    bind(app, "--translator-url", "model server base URL", &RunConfig::translator_url);
    bind(app, "--model-id", "model name sent to the server", &RunConfig::model_id);
    bind(app, "--max-output-len", "decode length limit", &RunConfig::max_output_len);
    bind(app, "--seed", "master seed", &RunConfig::seed);
    bind(app, "--workers", "sweep worker threads", &RunConfig::workers);
    bind(app, "--batch-size", "inputs per translator call", &RunConfig::batch_size);
    bind(app, "--max-in-flight", "concurrent server requests", &RunConfig::max_in_flight);
    bind(app, "--cache", "translation cache file, or :memory:", &RunConfig::cache_path);
    sub(app, "--pivot-count", "pivot tokens to select", [](RunConfig& c) -> auto& { return c.selection.count; });
    sub(app, "--min-freq", "lowest eligible pivot frequency", [](RunConfig& c) -> auto& { return c.selection.min_freq; });
    sub(app, "--max-freq", "highest eligible pivot frequency", [](RunConfig& c) -> auto& { return c.selection.max_freq; });
    sub(app, "--sentences-per-token", "sentences drawn per pivot", [](RunConfig& c) -> auto& { return c.selection.sentences_per_token; });
    sub(app, "--keep", "smallest subgroups kept per pivot", [](RunConfig& c) -> auto& { return c.entropy.keep; });
    sub(app, "--beta-c", "count threshold", [](RunConfig& c) -> auto& { return c.entropy.beta_c; });
    sub(app, "--k", "tokens in the lowest-K mean", [](RunConfig& c) -> auto& { return c.entropy.k; });
    sub(app, "--out", "output directory", [](RunConfig& c) -> auto& { return c.output_dir; });
    sub(app, "--pivots", "pivots.jsonl path", [](RunConfig& c) -> auto& { return c.pivots_path; });
  }

  RunConfig resolve() const {
    RunConfig c = config_path_.empty() ? RunConfig{} : load_run_config(config_path_);
    for (const auto& apply : appliers_) apply(c);
    return c;
  }

 private:
  template <typename T>
  void bind(CLI::App& app, const std::string& name, const std::string& help,
            T RunConfig::*field) {
    sub(app, name, help, [field](RunConfig& c) -> T& { return c.*field; });
  }

  template <typename Get>
  void sub(CLI::App& app, const std::string& name, const std::string& help, Get get) {
    using T = std::remove_reference_t<decltype(get(std::declval<RunConfig&>()))>;
    auto value = std::make_shared<T>();
    CLI::Option* opt = app.add_option(name, *value, help);
    appliers_.push_back([opt, value, get](RunConfig& c) {
      if (opt->count() > 0) get(c) = *value;
    });
  }

  std::string config_path_;
  std::vector<std::function<void(RunConfig&)>> appliers_;
};

void print_error(const std::string& kind, const std::string& message) {
  std::cerr << Json{{"error", kind}, {"message", message}}.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pivot-token translation entropy pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", TRANSENT_VERSION);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");

  ConfigFlags select_flags;
  std::function<void()> action;

  auto* select = app.add_subcommand("select-pivots", "draw pivot tokens and their sentences");
  select_flags.attach(*select);
  select->callback([&] {
    action = [&] {
      auto records = cmd_select_pivots(select_flags.resolve());
      std::cout << records.size() << " pivots\n";
    };
  });

  // Each subcommand gets its own flag set because CLI11 binds options per app.
  ConfigFlags sweep_flags;
  std::size_t stop_after = 0;
  auto* sweep = app.add_subcommand("sweep", "run substitution sweeps with checkpointing");
  sweep_flags.attach(*sweep);
  sweep->add_option("--stop-after", stop_after, "stop after this many new units");
  sweep->callback([&] {
    action = [&] {
      SweepRunOptions o;
      o.stop_after = stop_after;
      auto r = cmd_sweep(sweep_flags.resolve(), o);
      std::cout << Json{{"complete", r.complete},
                        {"units_total", r.units_total},
                        {"units_resumed", r.units_resumed},
                        {"units_run", r.units_run},
                        {"cache_hits", r.cache.hits},
                        {"translator_inputs", r.cache.inner_inputs}}
                       .dump()
                << "\n";
    };
  });

  ConfigFlags entropy_flags;
  double bin_width = 1.0;
  auto* entropy = app.add_subcommand("entropy", "compute per-token entropy and aggregates");
  entropy_flags.attach(*entropy);
  entropy->add_option("--bin-width", bin_width, "histogram bin width");
  entropy->callback([&] {
    action = [&] {
      auto r = cmd_entropy(entropy_flags.resolve(), bin_width);
      std::cout << Json{{"tokens", r.thresholded.n},
                        {"S", r.thresholded.s},
                        {"K", r.thresholded.k},
                        {"S_K", r.thresholded.s_k}}
                       .dump()
                << "\n";
    };
  });

  ConfigFlags pair_flags;
  SentenceId sentence_id = 0;
  std::vector<std::uint32_t> positions;
  auto* pair = app.add_subcommand("pair", "two-position degeneracy on one sentence");
  pair_flags.attach(*pair);
  pair->add_option("--sentence", sentence_id, "sentence id")->required();
  pair->add_option("--positions", positions, "two token positions")->expected(2);
  pair->callback([&] {
    action = [&] {
      std::optional<std::pair<std::uint32_t, std::uint32_t>> pos;
      if (positions.size() == 2) pos = std::pair{positions[0], positions[1]};
      std::cout << Json(cmd_pair(pair_flags.resolve(), sentence_id, pos)).dump() << "\n";
    };
  });

  ConfigFlags bleu_flags;
  std::size_t limit = 0;
  auto* bleu = app.add_subcommand("bleu", "corpus BLEU of the backend on the corpus");
  bleu_flags.attach(*bleu);
  bleu->add_option("--limit", limit, "only the first N pairs");
  bleu->callback([&] {
    action = [&] {
      auto s = cmd_bleu(bleu_flags.resolve(), limit);
      std::cout << format_number(s.score, 2) << "\n";
    };
  });

  std::vector<fs::path> reports;
  std::vector<fs::path> bleu_files;
  fs::path rank_out = ".";
  auto* rank = app.add_subcommand("rank", "combine reports and BLEU across models");
  rank->add_option("--report", reports, "report.json files")->required();
  rank->add_option("--bleu", bleu_files, "bleu.json files");
  rank->add_option("--out", rank_out, "output directory");
  rank->callback([&] { action = [&] { cmd_rank(reports, bleu_files, rank_out); }; });

  SynthCorpusOptions demo;
  demo.partial_synonyms = 2;
  fs::path demo_out = "demo";
  auto* synth = app.add_subcommand("synth-demo", "write a synthetic corpus, spec and config");
  synth->add_option("--out", demo_out, "directory to create");
  synth->add_option("--vocab-size", demo.vocab_size);
  synth->add_option("--pivots", demo.pivots);
  synth->add_option("--sentences-per-pivot", demo.sentences_per_pivot);
  synth->add_option("--partial-synonyms", demo.partial_synonyms);
  synth->add_option("--seed", demo.seed);
  synth->callback([&] {
    action = [&] {
      const SynthBundle bundle = make_synth_bundle(demo);
      const SynthBundleFiles files = write_synth_bundle(bundle, demo_out);
      RunConfig c;
      c.corpus = files.corpus;
      c.synth_spec = files.spec.string();
      c.direction = "synthetic";
      c.model_id = "synthetic";
      c.selection.count = demo.pivots;
      c.selection.min_freq = demo.sentences_per_pivot;
      c.selection.max_freq = demo.sentences_per_pivot;
      c.selection.sentences_per_token = 30;
      c.output_dir = demo_out / "run";
      c.cache_path = (demo_out / "cache.log").string();
      c.seed = demo.seed;
      write_file_atomic(demo_out / "config.json", Json(c).dump(1) + "\n");
      std::cout << (demo_out / "config.json").string() << "\n";
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("usage", e.what());
    return 2;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
  spdlog::set_default_logger(spdlog::stderr_color_mt("transent"));

  try {
    action();
    return 0;
  } catch (const PipelineError& e) {
    print_error(e.kind(), e.what());
  } catch (const TransportError& e) {
    print_error("transport", e.what());
  } catch (const ProtocolError& e) {
    print_error("protocol", e.what());
  } catch (const TranslatorError& e) {
    print_error("translator", e.what());
  } catch (const CorpusError& e) {
    print_error("corpus", e.what());
  } catch (const std::exception& e) {
    print_error("internal", e.what());
  }
  return 1;
}
